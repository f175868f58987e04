#!/usr/bin/env python3
"""Benchmark the compiled margin kernels against the numpy fallback.

Runs the two kernels every Monte Carlo measure goes through (cell
assignment + own-cell margin, and the all-cells margin pass) on a range
of (m, d) shapes, and checks that both backends agree.

Usage: python benchmarks/kernel_bench.py [n_samples]
"""

import sys
import time

import numpy as np

from simcluster import _kernels_py
from simcluster.frames import equidistant_points

try:
    from simcluster import _kernels
except ImportError:
    _kernels = None


def bench(fn, *args, repeats=5):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 200_000
    rng = np.random.default_rng(0)
    print(f"n = {n} samples per call, best of 5")
    print(f"{'shape':>12} {'kernel':>12} {'numpy':>10} {'C':>10} {'speedup':>8}")
    for m, d in [(2, 4), (3, 3), (5, 8), (16, 16), (16, 32)]:
        frame = equidistant_points(m, d, 1.0)
        Z = rng.standard_normal((n, d))
        P = np.ascontiguousarray(Z @ frame.directions.T)
        S = frame.pair_dist
        for name, np_fn in [("own_margin", _kernels_py.own_margin),
                            ("all_margins", _kernels_py.all_margins)]:
            t_np = bench(np_fn, P, S)
            if _kernels is None:
                print(f"{f'm={m},d={d}':>12} {name:>12} {t_np*1e3:>8.1f}ms "
                      f"{'absent':>10} {'-':>8}")
                continue
            c_fn = getattr(_kernels, name)
            t_c = bench(c_fn, P, S)
            ref, got = np_fn(P, S), c_fn(P, S)
            if isinstance(ref, tuple):
                agree = all(np.allclose(a, b, atol=1e-12)
                            for a, b in zip(ref, got))
            else:
                agree = np.allclose(ref, got, atol=1e-12)
            print(f"{f'm={m},d={d}':>12} {name:>12} {t_np*1e3:>8.1f}ms "
                  f"{t_c*1e3:>8.1f}ms {t_np/t_c:>7.1f}x"
                  + ("" if agree else "  MISMATCH"))


if __name__ == "__main__":
    main()
