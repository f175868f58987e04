"""Seeded Monte Carlo estimation of Gaussian measures.

Estimates are pure functions of ``(seed, n_samples, block_size)``; see
:mod:`simcluster.sampling` for the block-stream contract.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from ._backend import own_margin as _own_margin
from .frames import SimplexFrame
from .geometry import in_epsilon_boundary
from .sampling import BLOCK_SIZE, normal_blocks
from .stats import MeasureEstimate

MIN_SAMPLES = 100


def gaussian_measure(indicator: Callable[[np.ndarray], np.ndarray],
                     dim: int, n_samples: int, seed: int,
                     block_size: int = BLOCK_SIZE) -> MeasureEstimate:
    """Standard-Gaussian measure of the set ``{z : indicator(z)}``.

    ``indicator`` receives an ``(n, dim)`` block and must return a
    boolean array of length ``n``.  The estimate is the hit fraction over
    ``n_samples`` i.i.d. draws with a Wilson 95% interval.
    """
    if n_samples < MIN_SAMPLES:
        raise ValueError(f"n_samples must be >= {MIN_SAMPLES}")
    hits = 0
    for block in normal_blocks(seed, n_samples, dim, block_size):
        mask = np.asarray(indicator(block), dtype=bool)
        if mask.shape != (len(block),):
            raise ValueError("indicator must return one boolean per point")
        hits += int(mask.sum())
    return MeasureEstimate.from_hits(hits, n_samples, seed)


def boundary_measure(frame: SimplexFrame, eps: float, n_samples: int,
                     seed: int, method: str = "margin",
                     block_size: int = BLOCK_SIZE) -> MeasureEstimate:
    """Gaussian measure of the partition's epsilon-boundary."""
    return gaussian_measure(
        lambda z: in_epsilon_boundary(frame, z, eps, method=method),
        frame.dim, n_samples, seed, block_size)


def cell_measures(frame: SimplexFrame, n_samples: int, seed: int,
                  block_size: int = BLOCK_SIZE) -> list[MeasureEstimate]:
    """Gaussian measure of every cell, one estimate per cell.

    Each sample lands in exactly one cell (lowest-index tie rule), so the
    reported values partition the mass; they are telescoped from the
    cumulative counts so that their float sum is exactly 1.0.
    """
    if n_samples < MIN_SAMPLES:
        raise ValueError(f"n_samples must be >= {MIN_SAMPLES}")
    counts = np.zeros(frame.count, dtype=np.int64)
    for block in normal_blocks(seed, n_samples, frame.dim, block_size):
        idx, _ = _own_margin(frame.dots(block), frame.pair_dist)
        counts += np.bincount(idx, minlength=frame.count)
    cum = np.concatenate([[0.0], np.cumsum(counts) / n_samples])
    values = np.diff(cum)
    out = []
    for i in range(frame.count):
        base = MeasureEstimate.from_hits(int(counts[i]), n_samples, seed)
        out.append(MeasureEstimate(value=float(values[i]),
                                   half_width=base.half_width,
                                   samples=n_samples, seed=seed))
    return out
