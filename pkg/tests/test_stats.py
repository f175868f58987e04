import math

import pytest

from simcluster import MeasureEstimate, normal_cdf, wilson_interval

# high-precision reference values (40-digit arithmetic, rounded to 17
# significant digits)
CDF_TABLE = [
    (-8.0, 6.2209605742717841e-16),
    (-5.0, 2.8665157187919391e-7),
    (-4.0, 3.1671241833119921e-5),
    (-3.0, 0.0013498980316300945),
    (-2.5, 0.0062096653257761352),
    (-2.0, 0.022750131948179207),
    (-1.5, 0.066807201268858066),
    (-1.0, 0.15865525393145705),
    (-0.5, 0.3085375387259869),
    (-0.2, 0.42074029056089697),
    (0.0, 0.5),
    (0.2, 0.57925970943910303),
    (0.5, 0.6914624612740131),
    (1.0, 0.84134474606854295),
    (1.5, 0.93319279873114193),
    (2.0, 0.97724986805182079),
    (2.5, 0.99379033467422386),
    (3.0, 0.99865010196836991),
    (4.0, 0.99996832875816688),
    (6.0, 0.99999999901341235),
]


def test_normal_cdf_against_tabulated_values():
    assert len(CDF_TABLE) == 20
    for x, expected in CDF_TABLE:
        got = normal_cdf(x)
        assert abs(got - expected) <= 1e-12 * max(expected, 1e-300), \
            f"Phi({x}) = {got!r}, expected {expected!r}"


def test_normal_cdf_symmetry():
    for x in (0.3, 1.7, 4.2):
        assert normal_cdf(x) + normal_cdf(-x) == pytest.approx(1.0, abs=1e-15)


class TestWilson:
    def test_known_interval(self):
        # 10 hits of 40 at 95%, worked by hand from the score formula:
        # center = (0.25 + z^2/80)/(1 + z^2/40), half-width from
        # z*sqrt(0.25*0.75/40 + z^2/6400)/(1 + z^2/40)
        lo, hi = wilson_interval(10, 40)
        assert lo == pytest.approx(0.141875, abs=1e-5)
        assert hi == pytest.approx(0.401944, abs=1e-5)

    def test_extremes_clip(self):
        lo, hi = wilson_interval(0, 50)
        assert lo == pytest.approx(0.0, abs=1e-12) and 0 < hi < 0.1
        lo, hi = wilson_interval(50, 50)
        assert hi == 1.0 and 0.9 < lo < 1.0

    def test_rejects_bad_counts(self):
        with pytest.raises(ValueError):
            wilson_interval(5, 0)
        with pytest.raises(ValueError):
            wilson_interval(-1, 10)
        with pytest.raises(ValueError):
            wilson_interval(11, 10)

    def test_width_shrinks_like_sqrt_n(self):
        w1 = (lambda t: t[1] - t[0])(wilson_interval(100, 1000))
        w2 = (lambda t: t[1] - t[0])(wilson_interval(10000, 100000))
        assert w2 == pytest.approx(w1 / 10.0, rel=0.05)


class TestMeasureEstimate:
    def test_from_hits(self):
        est = MeasureEstimate.from_hits(500, 1000, seed=3)
        assert est.value == 0.5
        assert est.samples == 1000 and est.seed == 3
        se = math.sqrt(0.25 / 1000)
        assert est.half_width == pytest.approx(1.96 * se, rel=0.05)

    def test_interval_clipped(self):
        est = MeasureEstimate.from_hits(1000, 1000, seed=0)
        assert est.value == 1.0
        assert est.upper == 1.0
        assert est.half_width < 1e-2
        assert 0.0 <= est.lower <= 1.0

    def test_validation(self):
        with pytest.raises(ValueError):
            MeasureEstimate(value=1.2, half_width=0.0, samples=10, seed=0)
        with pytest.raises(ValueError):
            MeasureEstimate(value=0.5, half_width=-0.1, samples=10, seed=0)
