"""Pure-numpy margin kernels (fallback when the C extension is absent).

Both backends share this contract: ``P`` is the ``(n, m)`` matrix of dot
products between latent points and the frame directions, ``S`` the
``(m, m)`` matrix of pairwise direction distances (diagonal ignored).
Because every bisector passes through the origin, the signed margin of a
point relative to cell ``i`` is ``min_{j != i} (P[:, i] - P[:, j]) / S[i, j]``.
"""

from __future__ import annotations

import numpy as np


def own_margin(P: np.ndarray, S: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Cell assignment (first argmax) and margin to that cell's boundary."""
    n = P.shape[0]
    idx = np.argmax(P, axis=1)
    rows = np.arange(n)
    diffs = (P[rows, idx][:, None] - P) / S[idx, :]
    diffs[rows, idx] = np.inf
    return idx.astype(np.int64, copy=False), diffs.min(axis=1)


def all_margins(P: np.ndarray, S: np.ndarray) -> np.ndarray:
    """Margins of every point relative to every cell, shape ``(n, m)``."""
    n, m = P.shape
    out = np.empty((n, m), dtype=np.float64)
    for i in range(m):
        diffs = (P[:, i:i + 1] - P) / S[i][None, :]
        diffs[:, i] = np.inf
        out[:, i] = diffs.min(axis=1)
    return out
