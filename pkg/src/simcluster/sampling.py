"""Deterministic, block-structured Gaussian sampling.

All Monte Carlo work in the package draws from Philox counter-based
streams.  A run is identified by a 64-bit seed; samples are produced in
fixed-size blocks where block ``b`` comes from the seed's stream jumped
``b`` times.  Because every block depends only on ``(seed, b)``, results
are a pure function of ``(seed, n_samples, block_size)`` no matter how
blocks are scheduled, and serial and parallel evaluation agree.
"""

from __future__ import annotations

from typing import Iterator

import numpy as np

#: Number of samples per Monte Carlo block.
BLOCK_SIZE = 1 << 16


def block_rng(seed: int, block: int) -> np.random.Generator:
    """Generator for the given block of the seed's sample stream."""
    return np.random.Generator(np.random.Philox(seed).jumped(block))


def task_seed(seed: int, task: int) -> int:
    """Derive an independent 64-bit child seed for a sub-task.

    Used where a computation needs several unrelated streams (e.g. one
    per optimizer restart) that must not collide with each other or with
    the parent stream.
    """
    child = np.random.SeedSequence(seed, spawn_key=(task,))
    return int(child.generate_state(1, np.uint64)[0])


def normal_blocks(seed: int, n: int, dim: int,
                  block_size: int = BLOCK_SIZE) -> Iterator[np.ndarray]:
    """Yield ``(<=block_size, dim)`` arrays of standard normals, n rows total."""
    if n < 1:
        raise ValueError("n must be >= 1")
    n_blocks = (n + block_size - 1) // block_size
    for b in range(n_blocks):
        take = min(block_size, n - b * block_size)
        yield block_rng(seed, b).standard_normal((take, dim))


def standard_normals(seed: int, n: int, dim: int,
                     block_size: int = BLOCK_SIZE) -> np.ndarray:
    """Materialize the first ``n`` rows of the seed's Gaussian stream.

    Identical to concatenating :func:`normal_blocks`, so batch consumers
    and streaming consumers of the same seed see the same points.
    """
    return np.concatenate(list(normal_blocks(seed, n, dim, block_size)), axis=0)
