"""Cell membership, signed margins, and exact cell projections.

Margins are the workhorse: for a point in cell ``i`` the quantity
``min_{j != i} <z, n_ij>`` equals the Euclidean distance to the cell
boundary whenever the nearest boundary point lies in the relative
interior of a facet, which is the generic case under Gaussian sampling.
The Dykstra projection is kept as the exact (and much slower) oracle.
"""

from __future__ import annotations

import numpy as np

from ._backend import all_margins as _all_margins
from ._backend import own_margin as _own_margin
from .errors import ConvergenceError
from .frames import SimplexFrame, _check_cell

DYKSTRA_TOL = 1e-10
DYKSTRA_MAX_ITER = 10_000


def _as_batch(z: np.ndarray, dim: int) -> tuple[np.ndarray, bool]:
    z = np.asarray(z, dtype=np.float64)
    single = z.ndim == 1
    batch = np.atleast_2d(z)
    if batch.shape[1] != dim:
        raise ValueError(f"points have dimension {batch.shape[1]}, "
                         f"frame has dimension {dim}")
    if not np.all(np.isfinite(batch)):
        raise ValueError("points must have finite coordinates")
    return batch, single


def cell_index(frame: SimplexFrame, z: np.ndarray):
    """1-based index of the Voronoi cell containing ``z``.

    Ties break to the lowest index.  Accepts a single point ``(d,)`` or a
    batch ``(n, d)``; returns an int or an int64 array accordingly.
    """
    batch, single = _as_batch(z, frame.dim)
    idx, _ = _own_margin(frame.dots(batch), frame.pair_dist)
    idx = idx + 1
    return int(idx[0]) if single else idx


def margin(frame: SimplexFrame, z: np.ndarray, i: int):
    """Signed margin of ``z`` relative to cell ``i``: min_{j != i} <z, n_ij>.

    Nonnegative exactly when ``z`` lies in the closed cell ``i``; equals
    the distance to the cell boundary off ridges.  ``i`` is 1-based.
    """
    _check_cell(frame, i)
    batch, single = _as_batch(z, frame.dim)
    P = frame.dots(batch)
    i0 = i - 1
    diffs = (P[:, i0:i0 + 1] - P) / frame.pair_dist[i0][None, :]
    diffs[:, i0] = np.inf
    out = diffs.min(axis=1)
    return float(out[0]) if single else out


def margins_to_all_cells(frame: SimplexFrame, z: np.ndarray) -> np.ndarray:
    """Margins of each point relative to every cell, shape ``(n, m)``."""
    batch, single = _as_batch(z, frame.dim)
    out = _all_margins(frame.dots(batch), frame.pair_dist)
    return out[0] if single else out


def project_onto_cell(frame: SimplexFrame, i: int, z: np.ndarray,
                      tol: float = DYKSTRA_TOL,
                      max_iter: int = DYKSTRA_MAX_ITER):
    """Euclidean projection of ``z`` onto closed cell ``i`` via Dykstra.

    Alternates projections onto the halfspaces ``{<x, n_ij> >= 0}`` with
    Dykstra's correction increments, stopping once a full cycle moves the
    iterate less than ``tol``.  Returns ``(projection, distance)``.

    Raises
    ------
    ConvergenceError
        If ``max_iter`` cycles pass with movement still >= ``tol``.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    _check_cell(frame, i)
    zv = np.asarray(z, dtype=np.float64)
    if zv.shape != (frame.dim,):
        raise ValueError("project_onto_cell expects a single point (d,)")
    if margin(frame, zv, i) >= 0.0:
        return zv.copy(), 0.0

    i0 = i - 1
    m = frame.count
    normals = np.empty((m - 1, frame.dim))
    r = 0
    for j in range(m):
        if j == i0:
            continue
        normals[r] = (frame.directions[i0] - frame.directions[j]) \
            / frame.pair_dist[i0, j]
        r += 1

    x = zv.copy()
    corr = np.zeros_like(normals)
    for _ in range(max_iter):
        x_prev = x.copy()
        for c in range(m - 1):
            y = x + corr[c]
            viol = min(0.0, float(y @ normals[c]))
            x = y - viol * normals[c]
            corr[c] = y - x
        if np.linalg.norm(x - x_prev) < tol:
            return x, float(np.linalg.norm(zv - x))
    raise ConvergenceError(
        f"Dykstra projection onto cell {i} did not converge within "
        f"{max_iter} cycles (tol={tol:g})")


def in_epsilon_boundary(frame: SimplexFrame, z: np.ndarray, eps: float,
                        method: str = "margin"):
    """Whether ``z`` lies within distance ``eps`` of another closed cell.

    Implements the pointwise test behind the partition's epsilon-boundary
    (the union over cells of the eps-extension of the other cells, minus
    those cells): the point's own cell is found first, then its distance
    to the nearest other cell is compared against ``eps``.

    ``method="margin"`` uses the bisector margin, a lower bound on the
    true distance; it over-includes near ridges, which is conservative
    for boundary measures.  ``method="exact"`` certifies the distance
    with Dykstra projections onto every candidate cell (candidates are
    pruned with the margin lower bound first).
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    if method not in ("margin", "exact"):
        raise ValueError(f"unknown method {method!r}")
    batch, single = _as_batch(z, frame.dim)
    P = frame.dots(batch)
    idx, marg = _own_margin(P, frame.pair_dist)
    if method == "margin":
        out = marg <= eps
        return bool(out[0]) if single else out

    out = np.zeros(len(batch), dtype=bool)
    candidates = np.nonzero(marg <= eps)[0]
    for r in candidates:
        i0 = int(idx[r])
        # only cells whose bisector margin (a distance lower bound) is
        # within eps can be within eps in true distance
        pair = (P[r, i0] - P[r]) / frame.pair_dist[i0]
        for j in range(frame.count):
            if j == i0 or pair[j] > eps:
                continue
            _, dist = project_onto_cell(frame, j + 1, batch[r])
            if dist <= eps:
                out[r] = True
                break
    return bool(out[0]) if single else out
