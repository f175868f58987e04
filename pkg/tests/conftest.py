import numpy as np
import pytest

from simcluster import ModeSet, equidistant_points


@pytest.fixture
def tri_frame():
    """Equilateral 3-cell frame in the plane, unit side."""
    return equidistant_points(3, 2, 1.0)


@pytest.fixture
def tetra_frame():
    return equidistant_points(4, 3, 1.0)


@pytest.fixture
def two_frame():
    return equidistant_points(2, 4, 1.0)


def equidistant_modes(m: int, side: float = 1.0) -> ModeSet:
    return ModeSet(modes=equidistant_points(m, max(m - 1, 1), side).directions)


def brute_pairwise(points: np.ndarray) -> np.ndarray:
    """Naive per-pair Euclidean distances (independent oracle)."""
    n = len(points)
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            out[i, j] = np.sqrt(np.sum((points[i] - points[j]) ** 2))
    return out
