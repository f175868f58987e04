"""The optimal mode-blending generator over a direction frame.

Inside its cell's eroded interior every latent maps exactly onto the
cell's mode center; where cell extensions overlap, the output blends the
touching modes with weights proportional to each extension's interior
distance.  The image is therefore the convex hull of the modes, every
mode is attained, and the map is Lipschitz with constant at most
``diameter * sqrt(m) / epsilon``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._backend import all_margins as _all_margins
from ._backend import own_margin as _own_margin
from .frames import SimplexFrame, _check_cell
from .sampling import standard_normals, task_seed
from .metrics import SampleSet


@dataclass(frozen=True)
class ModeSet:
    """Distinct target mode centers in data space, with pair statistics."""

    modes: np.ndarray  # (m, ambient_dim)
    ambient_dim: int = field(init=False)
    count: int = field(init=False)
    diameter: float = field(init=False)
    min_gap: float = field(init=False)

    def __post_init__(self):
        pts = np.array(self.modes, dtype=np.float64, order="C", copy=True)
        if pts.ndim != 2:
            raise ValueError("modes must be a 2-D array (m, ambient_dim)")
        m = pts.shape[0]
        if m < 2:
            raise ValueError("need at least 2 modes")
        if not np.all(np.isfinite(pts)):
            raise ValueError("mode coordinates must be finite")
        diff = pts[:, None, :] - pts[None, :, :]
        dist = np.sqrt(np.sum(diff * diff, axis=-1))
        off = dist[~np.eye(m, dtype=bool)]
        if off.min() <= 0.0:
            raise ValueError("modes must be pairwise distinct")
        pts.flags.writeable = False
        object.__setattr__(self, "modes", pts)
        object.__setattr__(self, "ambient_dim", pts.shape[1])
        object.__setattr__(self, "count", m)
        object.__setattr__(self, "diameter", float(off.max()))
        object.__setattr__(self, "min_gap", float(off.min()))


def epsilon_min(modes: ModeSet, L: float) -> float:
    """Smallest blending radius forced by Lipschitzness: min gap / L."""
    if not L > 0:
        raise ValueError("L must be positive")
    return modes.min_gap / L


def epsilon_max(modes: ModeSet, L: float) -> float:
    """Blending radius of the optimal generator: diameter * sqrt(m) / L."""
    if not L > 0:
        raise ValueError("L must be positive")
    return modes.diameter * np.sqrt(modes.count) / L


@dataclass(frozen=True)
class GeneratorStar:
    """Optimal generator bundle: frame + modes + blending radius.

    ``lipschitz_budget`` must exceed the mode diameter (the regime in
    which the generator attains recall 1).
    """

    frame: SimplexFrame
    modes: ModeSet
    epsilon: float
    lipschitz_budget: float

    def __post_init__(self):
        if self.frame.count != self.modes.count:
            raise ValueError("frame cell count must equal mode count")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if not self.lipschitz_budget > self.modes.diameter:
            raise ValueError("lipschitz_budget must exceed the mode diameter")

    @classmethod
    def with_max_radius(cls, frame: SimplexFrame, modes: ModeSet,
                        L: float) -> "GeneratorStar":
        return cls(frame=frame, modes=modes,
                   epsilon=epsilon_max(modes, L), lipschitz_budget=L)

    def __call__(self, z: np.ndarray) -> np.ndarray:
        return generate(self, z)


def extension_distance(gstar: GeneratorStar, i: int, z: np.ndarray):
    """Interior distance of ``z`` within cell i's epsilon-extension.

    ``max(0, eps + margin)``: positive exactly when ``z`` is treated as
    inside the extension, and equal to the true distance to the
    extension's complement whenever the nearest complement point lies on
    a facet extension.  ``i`` is 1-based.
    """
    _check_cell(gstar.frame, i)
    from .geometry import margin
    return np.maximum(0.0, gstar.epsilon + margin(gstar.frame, z, i))


def _blend_weights(gstar: GeneratorStar, batch: np.ndarray):
    """Per-point blend weights over modes, plus cell index and active count.

    The own-cell margin prefilters the batch: a point whose margin is at
    least eps cannot touch any other extension, so only near-boundary
    rows pay for the all-cells margin pass.
    """
    frame = gstar.frame
    eps = gstar.epsilon
    P = frame.dots(batch)
    idx, marg = _own_margin(P, frame.pair_dist)
    n, m = P.shape
    weights = np.zeros((n, m))
    weights[np.arange(n), idx] = 1.0
    n_active = np.ones(n, dtype=np.int64)

    cand = np.nonzero(marg < eps)[0]
    if len(cand):
        ext = np.maximum(0.0, eps + _all_margins(
            np.ascontiguousarray(P[cand]), frame.pair_dist))
        counts = (ext > 0.0).sum(axis=1)
        weights[cand] = ext / ext.sum(axis=1, keepdims=True)
        n_active[cand] = counts
    return idx, weights, n_active


def active_set(gstar: GeneratorStar, z: np.ndarray) -> set[int]:
    """1-based indices of all cell extensions containing ``z``."""
    zv = np.asarray(z, dtype=np.float64)
    if zv.ndim != 1:
        raise ValueError("active_set expects a single point (d,)")
    from .geometry import margins_to_all_cells
    margins = margins_to_all_cells(gstar.frame, zv)
    return {int(i) + 1 for i in
            np.nonzero(gstar.epsilon + margins > 0.0)[0]}


def generate(gstar: GeneratorStar, z: np.ndarray) -> np.ndarray:
    """Map latents through the generator.

    Accepts ``(d,)`` or ``(n, d)``.  Points with a single active
    extension return their mode center bitwise; blended points return
    the weighted mode combination, whose weights are nonnegative and sum
    to one, so outputs always lie in the convex hull of the modes.
    """
    zv = np.asarray(z, dtype=np.float64)
    single = zv.ndim == 1
    batch = np.atleast_2d(zv)
    if batch.shape[1] != gstar.frame.dim:
        raise ValueError("latent dimension mismatch")
    idx, weights, n_active = _blend_weights(gstar, batch)
    out = weights @ gstar.modes.modes
    pure = n_active == 1
    out[pure] = gstar.modes.modes[idx[pure]]
    return out[0] if single else out


def generate_batch(gstar: GeneratorStar, n: int, seed: int) -> SampleSet:
    """Push ``n`` seeded Gaussian latents through the generator.

    The latent points and the seed are recorded on the returned sample
    set so any batch can be reproduced exactly.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    latents = standard_normals(seed, n, gstar.frame.dim)
    points = generate(gstar, latents)
    return SampleSet(points=points, provenance="fake", seed=seed,
                     latents=latents)


def lipschitz_probe(gstar: GeneratorStar, n_pairs: int, seed: int) -> float:
    """Largest observed ratio ||G(z) - G(z')|| / ||z - z'||.

    Probes ``n_pairs`` independent Gaussian pairs plus ``n_pairs`` pairs
    concentrated near cell boundaries (Gaussian points snapped to their
    nearest bisector, then perturbed at scale eps/10), where the slope
    of the blend is steepest.
    """
    if n_pairs < 1:
        raise ValueError("n_pairs must be >= 1")
    frame = gstar.frame
    d = frame.dim
    eps = gstar.epsilon

    za = standard_normals(task_seed(seed, 0), n_pairs, d)
    zb = standard_normals(task_seed(seed, 1), n_pairs, d)

    base = standard_normals(task_seed(seed, 2), n_pairs, d)
    P = frame.dots(base)
    idx, _ = _own_margin(P, frame.pair_dist)
    rows = np.arange(n_pairs)
    diffs = (P[rows, idx][:, None] - P) / frame.pair_dist[idx, :]
    diffs[rows, idx] = np.inf
    jstar = np.argmin(diffs, axis=1)
    normals = (frame.directions[idx] - frame.directions[jstar]) \
        / frame.pair_dist[idx, jstar][:, None]
    snapped = base - diffs[rows, jstar][:, None] * normals

    scale = eps / 10.0
    pa = snapped + scale * standard_normals(task_seed(seed, 3), n_pairs, d)
    pb = snapped + scale * standard_normals(task_seed(seed, 4), n_pairs, d)

    first = np.concatenate([za, pa])
    second = np.concatenate([zb, pb])
    sep = np.linalg.norm(first - second, axis=1)
    keep = sep > 0
    gaps = np.linalg.norm(generate(gstar, first[keep])
                          - generate(gstar, second[keep]), axis=1)
    return float(np.max(gaps / sep[keep]))
