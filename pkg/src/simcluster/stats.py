"""Scalar statistics: normal CDF, Wilson intervals, measure estimates."""

from __future__ import annotations

import math
from dataclasses import dataclass

#: two-sided 95% normal quantile
Z95 = 1.959963984540054


def normal_cdf(x: float) -> float:
    """Standard normal CDF via the complementary error function.

    ``erfc`` is evaluated by the C library's rational/continued-fraction
    implementation, accurate to well below 1e-12 relative error over the
    range used here; tests pin it against tabulated values.
    """
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def wilson_interval(hits: int, n: int, z: float = Z95) -> tuple[float, float]:
    """Wilson score confidence interval for a binomial proportion.

    Behaves correctly near 0 and 1, where boundary measures live.
    """
    if n <= 0:
        raise ValueError("n must be positive")
    if not 0 <= hits <= n:
        raise ValueError("hits must lie in [0, n]")
    phat = hits / n
    z2n = z * z / n
    denom = 1.0 + z2n
    center = (phat + z2n / 2.0) / denom
    half = z * math.sqrt(phat * (1.0 - phat) / n + z2n / (4.0 * n)) / denom
    return max(0.0, center - half), min(1.0, center + half)


@dataclass(frozen=True)
class MeasureEstimate:
    """Monte Carlo probability estimate with a 95% confidence half-width.

    ``value`` is the raw hit fraction; ``half_width`` is the larger
    one-sided deviation of the Wilson interval from ``value``, so that
    ``[value - half_width, value + half_width]`` (clipped to [0, 1])
    covers the Wilson interval.
    """

    value: float
    half_width: float
    samples: int
    seed: int

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise ValueError("value must lie in [0, 1]")
        if self.half_width < 0.0:
            raise ValueError("half_width must be nonnegative")

    @property
    def lower(self) -> float:
        return max(0.0, self.value - self.half_width)

    @property
    def upper(self) -> float:
        return min(1.0, self.value + self.half_width)

    @classmethod
    def from_hits(cls, hits: int, n: int, seed: int) -> "MeasureEstimate":
        lo, hi = wilson_interval(hits, n)
        phat = hits / n
        return cls(value=phat,
                   half_width=max(hi - phat, phat - lo, 0.0),
                   samples=n, seed=seed)

    def to_dict(self) -> dict:
        return {"value": self.value, "half_width": self.half_width,
                "samples": self.samples, "seed": self.seed}
