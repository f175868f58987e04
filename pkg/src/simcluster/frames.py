"""Direction frames and their Voronoi partitions of Gaussian space.

A frame is a set of ``m`` points ("directions") in R^d whose Voronoi
cells partition the latent space.  Two kinds are supported:

* regular-simplex frames (``m <= d + 1``): the directions are the
  vertices of a centered regular simplex with a common pairwise
  distance (``side``); this is the least-boundary equal-measure
  partition in its regime.
* generalized frames (any ``m >= 2``): arbitrary distinct directions of
  a common norm.  Equal norms make every bisector pass through the
  origin, which is what all margin computations rely on.

Cells are numbered 1..m in the public API.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

# relative tolerance on pairwise distances / norms, absolute on centroid
DIST_RTOL = 1e-12
NORM_RTOL = 1e-9
CENTROID_ATOL = 1e-10


@dataclass(frozen=True)
class SimplexFrame:
    """Immutable direction frame with precomputed pair geometry.

    Attributes
    ----------
    dim : latent dimension d.
    count : number of cells m.
    directions : (m, d) array of direction points.
    side : common pairwise distance for regular-simplex frames, None for
        generalized frames.
    """

    dim: int
    count: int
    directions: np.ndarray
    side: float | None
    pair_dist: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        dirs = np.array(self.directions, dtype=np.float64, order="C", copy=True)
        if dirs.shape != (self.count, self.dim):
            raise ValueError(f"directions shape {dirs.shape} does not match "
                             f"(count, dim)=({self.count}, {self.dim})")
        if self.count < 2:
            raise ValueError("a frame needs at least 2 directions")
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if not np.all(np.isfinite(dirs)):
            raise ValueError("directions must be finite")

        diff = dirs[:, None, :] - dirs[None, :, :]
        S = np.sqrt(np.sum(diff * diff, axis=-1))
        off = S[~np.eye(self.count, dtype=bool)]
        if off.min() <= 0.0:
            raise ValueError("directions must be pairwise distinct")

        if self.side is not None:
            if self.side <= 0:
                raise ValueError("side must be positive")
            if np.abs(off / self.side - 1.0).max() > DIST_RTOL:
                raise ValueError("pairwise distances do not all equal side "
                                 f"within {DIST_RTOL:g} relative tolerance")
            centroid = dirs.sum(axis=0)
            if np.abs(centroid).max() > CENTROID_ATOL:
                raise ValueError("regular-simplex frame is not centered at "
                                 f"the origin within {CENTROID_ATOL:g}")

        norms = np.linalg.norm(dirs, axis=1)
        if np.ptp(norms) > DIST_RTOL * norms.max():
            raise ValueError("direction norms must be equal (bisectors must "
                             "pass through the origin)")

        np.fill_diagonal(S, np.inf)
        S = np.ascontiguousarray(S)
        dirs.flags.writeable = False
        S.flags.writeable = False
        object.__setattr__(self, "directions", dirs)
        object.__setattr__(self, "pair_dist", S)

    @property
    def is_regular(self) -> bool:
        return self.side is not None

    def normal(self, i: int, j: int) -> np.ndarray:
        """Unit normal n_ij = (u_i - u_j) / ||u_i - u_j|| for 1-based i != j."""
        if i == j:
            raise ValueError("normal requires i != j")
        _check_cell(self, i)
        _check_cell(self, j)
        d = self.directions[i - 1] - self.directions[j - 1]
        return d / self.pair_dist[i - 1, j - 1]

    @property
    def normals(self) -> np.ndarray:
        """(m, m, d) array with normals[i-1, j-1] = n_ij (zero on diagonal)."""
        diff = self.directions[:, None, :] - self.directions[None, :, :]
        S = self.pair_dist.copy()
        return diff / S[:, :, None]

    def dots(self, z: np.ndarray) -> np.ndarray:
        """Dot products of each point with each direction, shape (n, m)."""
        return np.ascontiguousarray(z @ self.directions.T)

    def to_dict(self) -> dict:
        return {"dim": self.dim, "count": self.count, "side": self.side,
                "directions": self.directions.tolist()}

    def to_json(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=1) + "\n")

    @classmethod
    def from_dict(cls, obj: dict) -> "SimplexFrame":
        try:
            dirs = np.asarray(obj["directions"], dtype=np.float64)
            return cls(dim=int(obj["dim"]), count=int(obj["count"]),
                       directions=dirs, side=(None if obj["side"] is None
                                              else float(obj["side"])))
        except KeyError as exc:
            raise ValueError(f"frame JSON missing field {exc}") from exc

    @classmethod
    def from_json(cls, path: str | Path) -> "SimplexFrame":
        return cls.from_dict(json.loads(Path(path).read_text()))


def _check_cell(frame: SimplexFrame, i: int) -> None:
    if not 1 <= i <= frame.count:
        raise ValueError(f"cell index {i} outside [1, {frame.count}]")


def equidistant_points(m: int, d: int, side: float) -> SimplexFrame:
    """Regular simplex of ``m`` vertices in R^d, centered at the origin.

    The vertices of the centered standard simplex in R^m are rotated by a
    Householder reflection into the first ``m - 1`` coordinates and
    scaled so every pairwise distance equals ``side``.  Deterministic.
    """
    if m < 2:
        raise ValueError("m must be >= 2")
    if m > d + 1:
        raise ValueError(f"cannot place {m} equidistant points in R^{d}; "
                         "m <= d + 1 is required")
    if not side > 0:
        raise ValueError("side must be positive")
    E = np.eye(m) - 1.0 / m
    a = np.full(m, 1.0 / np.sqrt(m))
    b = np.zeros(m)
    b[-1] = 1.0
    w = a - b
    H = np.eye(m) - 2.0 * np.outer(w, w) / (w @ w)
    rotated = E @ H.T  # last coordinate of every row is ~0
    dirs = np.zeros((m, d))
    dirs[:, :m - 1] = rotated[:, :m - 1] * (side / np.sqrt(2.0))
    return SimplexFrame(dim=d, count=m, directions=dirs, side=float(side))


def directions_frame(points: np.ndarray) -> SimplexFrame:
    """Generalized frame from ``m`` equal-norm points (``m > d + 1`` regime).

    Input norms must agree within 1e-9 relative tolerance; directions are
    then rescaled to their common mean norm so stored norms are equal to
    machine precision and every bisector passes exactly through the
    origin.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2:
        raise ValueError("points must be a 2-D array (m, d)")
    m, d = pts.shape
    if m < 2:
        raise ValueError("m must be >= 2")
    norms = np.linalg.norm(pts, axis=1)
    if norms.min() <= 0:
        raise ValueError("directions must be nonzero")
    if np.ptp(norms) > NORM_RTOL * norms.max():
        raise ValueError("direction norms differ by more than 1e-9 relative; "
                         "bisectors would not pass through the origin")
    radius = norms.mean()
    dirs = pts * (radius / norms)[:, None]
    return SimplexFrame(dim=d, count=m, directions=dirs, side=None)
