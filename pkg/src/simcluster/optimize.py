"""Direction-partition search and the latent-dimension sweep.

The optimizer is a deliberately simple random-restart local search over
unit directions: the objective is the Monte Carlo boundary measure plus
a quadratic penalty pushing every cell toward measure 1/m, evaluated on
one fixed latent sample (common random numbers) so candidate objectives
are directly comparable.  Warm starts from known-good configurations
(the planar equal-angle fan and, when it exists, the regular simplex)
join the random restart pool.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._backend import all_margins as _all_margins
from ._backend import own_margin as _own_margin
from .bounds import precision_lower_bound, precision_upper_bound
from .frames import SimplexFrame, directions_frame, equidistant_points
from .generator import GeneratorStar, ModeSet, epsilon_max, epsilon_min
from .sampling import standard_normals, task_seed

BALANCE_PENALTY = 10.0


def partition_objective(dirs: np.ndarray, eps: float, Z: np.ndarray,
                        penalty: float = BALANCE_PENALTY) -> float:
    """Boundary-measure estimate plus the cell-balance penalty.

    ``dirs`` are equal-norm directions; the estimate uses the margin
    surrogate on the fixed sample ``Z``.
    """
    m = dirs.shape[0]
    diff = dirs[:, None, :] - dirs[None, :, :]
    S = np.sqrt(np.sum(diff * diff, axis=-1))
    np.fill_diagonal(S, np.inf)
    P = np.ascontiguousarray(Z @ dirs.T)
    idx, marg = _own_margin(P, np.ascontiguousarray(S))
    boundary = float((marg <= eps).mean())
    shares = np.bincount(idx, minlength=m) / len(Z)
    balance = float(np.sum((shares - 1.0 / m) ** 2))
    return boundary + penalty * balance


def _fan_directions(m: int, d: int) -> np.ndarray:
    ang = np.arange(m) * 2.0 * np.pi / m
    dirs = np.zeros((m, d))
    dirs[:, 0] = np.cos(ang)
    dirs[:, 1] = np.sin(ang)
    return dirs


def _simplex_directions(m: int, d: int) -> np.ndarray:
    u = equidistant_points(m, d, 1.0).directions
    return u / np.linalg.norm(u, axis=1, keepdims=True)


def optimize_directions(m: int, d: int, eps: float, n_samples: int = 20_000,
                        iters: int = 200, step: float = 0.4, seed: int = 0,
                        restarts: int = 8, penalty: float = BALANCE_PENALTY,
                        warm_starts: bool = True) -> SimplexFrame:
    """Search for m unit directions whose partition has a small boundary.

    Each restart runs an accept-if-better spherical perturbation walk
    with step decay 0.9 on non-improving iterations; the best frame over
    all restarts is returned.  Best-effort: never raises on a poor
    optimum.
    """
    if m < 2 or d < 2:
        raise ValueError("optimize_directions needs m >= 2 and d >= 2")
    if not eps > 0:
        raise ValueError("eps must be positive")
    Z = standard_normals(task_seed(seed, 0), n_samples, d)

    starts: list[np.ndarray] = []
    if warm_starts:
        if d == 2:
            starts.append(_fan_directions(m, d))
        if m <= d + 1:
            starts.append(_simplex_directions(m, d))

    best_dirs = None
    best_obj = np.inf
    for r in range(restarts):
        rng = np.random.Generator(np.random.Philox(task_seed(seed, r + 1)))
        if r < len(starts):
            dirs = starts[r].copy()
        else:
            dirs = rng.standard_normal((m, d))
            dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        obj = partition_objective(dirs, eps, Z, penalty)
        sigma = step
        for _ in range(iters):
            cand = dirs + sigma * rng.standard_normal((m, d))
            norms = np.linalg.norm(cand, axis=1, keepdims=True)
            if norms.min() <= 0:
                continue
            cand /= norms
            cdiff = cand[:, None, :] - cand[None, :, :]
            cdist = np.sqrt(np.sum(cdiff * cdiff, axis=-1))
            if cdist[~np.eye(m, dtype=bool)].min() < 1e-9:
                sigma *= 0.9
                continue
            cobj = partition_objective(cand, eps, Z, penalty)
            if cobj < obj:
                dirs, obj = cand, cobj
            else:
                sigma *= 0.9
        if obj < best_obj:
            best_dirs, best_obj = dirs, obj
    return directions_frame(best_dirs)


@dataclass(frozen=True)
class SweepRow:
    """One latent dimension of the sweep, with its bound values."""

    d: int
    eps_min: float
    eps_max: float
    alpha_hat: float
    alpha_half_width: float
    lower_bound: float
    upper_bound: float
    regime: str

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in
                ("d", "eps_min", "eps_max", "alpha_hat", "alpha_half_width",
                 "lower_bound", "upper_bound", "regime")}

    @staticmethod
    def csv_header() -> str:
        return ("d,eps_min,eps_max,alpha_hat,alpha_half_width,"
                "lower_bound,upper_bound,regime")

    def csv_row(self) -> str:
        return ",".join(str(v) for v in self.to_dict().values())


def memorization_rate(gstar: GeneratorStar, n_samples: int,
                      seed: int) -> tuple[float, float]:
    """Fraction of seeded latents mapping exactly onto a mode center.

    Streams blocks, counting points with a single active extension.
    Returns (estimate, standard error).
    """
    from .sampling import normal_blocks
    frame = gstar.frame
    eps = gstar.epsilon
    pure = 0
    for block in normal_blocks(seed, n_samples, frame.dim):
        P = frame.dots(block)
        idx, marg = _own_margin(P, frame.pair_dist)
        cand = marg < eps
        sub = _all_margins(np.ascontiguousarray(P[cand]), frame.pair_dist)
        n_active = (eps + sub > 0.0).sum(axis=1)
        pure += int((~cand).sum()) + int((n_active == 1).sum())
    p = pure / n_samples
    return p, math.sqrt(max(p * (1.0 - p), 1e-12) / n_samples)


def sweep_modes(m: int, side: float = 1.0) -> ModeSet:
    """Equidistant mode centers used by the sweep: a simplex in R^{m-1}."""
    return ModeSet(modes=equidistant_points(m, max(m - 1, 1), side).directions)


def dimension_sweep(m: int, d_list: list[int], L_mult: float = 4.0,
                    n_samples: int = 200_000, seed: int = 0,
                    opt_samples: int = 20_000, opt_iters: int = 150,
                    opt_restarts: int = 6) -> list[SweepRow]:
    """Precision of the optimal generator across latent dimensions.

    Modes are fixed (m equidistant centers), ``L = L_mult * D * sqrt(m)``.
    Each dimension gets the regular simplex partition when it fits and an
    optimized direction partition otherwise; rows carry the memorization
    rate and the two closed-form bounds, ready for plotting.
    """
    if any(d < 2 for d in d_list):
        raise ValueError("all sweep dimensions must be >= 2")
    modes = sweep_modes(m)
    L = L_mult * modes.diameter * math.sqrt(m)
    e_min = epsilon_min(modes, L)
    e_max = epsilon_max(modes, L)
    rows = []
    for t, d in enumerate(d_list):
        if m <= d + 1:
            frame = equidistant_points(m, d, 1.0)
        else:
            frame = optimize_directions(m, d, e_max, n_samples=opt_samples,
                                        iters=opt_iters, seed=task_seed(seed, 100 + t),
                                        restarts=opt_restarts)
        gstar = GeneratorStar(frame=frame, modes=modes, epsilon=e_max,
                              lipschitz_budget=L)
        alpha, se = memorization_rate(gstar, n_samples, task_seed(seed, t))
        lower = precision_lower_bound(e_max, m, d)
        upper = precision_upper_bound(e_min, m, L=L, d=d)
        rows.append(SweepRow(d=d, eps_min=e_min, eps_max=e_max,
                             alpha_hat=alpha, alpha_half_width=1.96 * se,
                             lower_bound=lower.leading_value,
                             upper_bound=upper.leading_value,
                             regime=lower.regime))
    return rows
