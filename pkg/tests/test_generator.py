import numpy as np
import pytest

from simcluster import (GeneratorStar, ModeSet, active_set, boundary_measure,
                        cell_index, epsilon_max, epsilon_min,
                        equidistant_points, extension_distance, generate,
                        generate_batch, lipschitz_probe, margin)
from tests.conftest import equidistant_modes


def make_gstar(m=3, d=2, L_mult=4.0, ambient=None):
    frame = equidistant_points(m, d, 1.0)
    modes = equidistant_modes(m) if ambient is None else \
        ModeSet(modes=np.eye(m, ambient) * 2.0)
    L = L_mult * modes.diameter * np.sqrt(m)
    return GeneratorStar.with_max_radius(frame, modes, L)


class TestModeSet:
    def test_pair_stats_against_brute_force(self):
        rng = np.random.default_rng(8)
        pts = rng.standard_normal((7, 5))
        modes = ModeSet(modes=pts)
        dists = [np.linalg.norm(pts[i] - pts[j])
                 for i in range(7) for j in range(7) if i != j]
        assert modes.diameter == pytest.approx(max(dists), abs=0)
        assert modes.min_gap == pytest.approx(min(dists), abs=0)

    def test_rejects_duplicates(self):
        with pytest.raises(ValueError, match="distinct"):
            ModeSet(modes=np.array([[1.0, 0.0], [1.0, 0.0]]))

    def test_rejects_single_mode(self):
        with pytest.raises(ValueError):
            ModeSet(modes=np.array([[1.0, 0.0]]))


class TestEpsilonRadii:
    def test_two_modes(self):
        modes = ModeSet(modes=np.array([[0.0], [4.0]]))
        assert epsilon_min(modes, 2.0) == 2.0
        assert epsilon_max(modes, 2.0) == pytest.approx(2.0 * np.sqrt(2.0))

    def test_collinear_modes(self):
        modes = ModeSet(modes=np.array([[0.0], [1.0], [3.0]]))
        assert epsilon_min(modes, 10.0) == pytest.approx(0.1)

    def test_unit_square(self):
        modes = ModeSet(modes=np.array([[0, 0], [1, 0], [0, 1], [1, 1]],
                                       dtype=float))
        assert epsilon_max(modes, 8.0) == pytest.approx(np.sqrt(2.0) * 2 / 8)

    def test_random_against_pair_scan(self):
        rng = np.random.default_rng(17)
        pts = rng.standard_normal((9, 3))
        modes = ModeSet(modes=pts)
        gaps = [np.linalg.norm(pts[i] - pts[j])
                for i in range(9) for j in range(i + 1, 9)]
        assert epsilon_min(modes, 3.0) == pytest.approx(min(gaps) / 3.0)
        assert epsilon_max(modes, 3.0) == pytest.approx(
            max(gaps) * 3.0 / 3.0)

    def test_rejects_nonpositive_L(self):
        modes = ModeSet(modes=np.array([[0.0], [4.0]]))
        with pytest.raises(ValueError):
            epsilon_min(modes, 0.0)


class TestGeneratorStarInvariants:
    def test_count_mismatch(self):
        frame = equidistant_points(3, 3, 1.0)
        modes = equidistant_modes(4)
        with pytest.raises(ValueError, match="count"):
            GeneratorStar(frame=frame, modes=modes, epsilon=0.1,
                          lipschitz_budget=100.0)

    def test_budget_must_exceed_diameter(self):
        frame = equidistant_points(3, 3, 1.0)
        modes = equidistant_modes(3)
        with pytest.raises(ValueError, match="diameter"):
            GeneratorStar(frame=frame, modes=modes, epsilon=0.1,
                          lipschitz_budget=modes.diameter)


class TestExtensionDistance:
    def test_deep_interior_exceeds_epsilon(self):
        g = make_gstar()
        z = 3.0 * g.frame.directions[0]
        assert extension_distance(g, 1, z) > g.epsilon

    def test_bisector_gives_exactly_epsilon(self):
        g = make_gstar()
        z = -0.8 * g.frame.directions[2]  # bisector of cells 1 and 2
        assert extension_distance(g, 1, z) == pytest.approx(g.epsilon,
                                                            abs=1e-12)
        assert extension_distance(g, 2, z) == pytest.approx(g.epsilon,
                                                            abs=1e-12)

    def test_halfspace_closed_form(self):
        g = make_gstar(m=2, d=4)
        n12 = g.frame.normal(1, 2)
        rng = np.random.default_rng(2)
        for z in rng.standard_normal((50, 4)):
            t = z @ n12
            if t >= -g.epsilon:
                assert extension_distance(g, 1, z) == pytest.approx(
                    g.epsilon + t, abs=1e-12)
            else:
                assert extension_distance(g, 1, z) == 0.0


class TestActiveSet:
    def test_deep_point_is_singleton(self):
        g = make_gstar()
        assert active_set(g, 3.0 * g.frame.directions[1]) == {2}

    def test_origin_touches_all_cells(self):
        g = make_gstar(m=4, d=3)
        assert active_set(g, np.zeros(3)) == {1, 2, 3, 4}

    def test_matches_exhaustive_scan(self):
        g = make_gstar(m=4, d=3)
        rng = np.random.default_rng(23)
        for z in rng.standard_normal((200, 3)):
            expected = {i for i in range(1, 5)
                        if extension_distance(g, i, z) > 0}
            assert active_set(g, z) == expected
            assert cell_index(g.frame, z) in expected


class TestGenerate:
    def test_deep_latents_memorize_bitwise(self):
        g = make_gstar()
        for i in range(3):
            z = 4.0 * g.frame.directions[i]
            assert margin(g.frame, z, i + 1) > g.epsilon
            out = generate(g, z)
            assert np.array_equal(out, g.modes.modes[i])

    def test_bisector_blends_two_modes_equally(self):
        g = make_gstar()
        # far enough out that cell 3's extension is inactive
        z = -2.0 * g.frame.directions[2]
        assert active_set(g, z) == {1, 2}
        out = generate(g, z)
        expected = (g.modes.modes[0] + g.modes.modes[1]) / 2.0
        assert np.allclose(out, expected, atol=1e-12)

    def test_origin_blends_all_modes_with_weight_oracle(self):
        g = make_gstar(m=4, d=3)
        z = np.zeros(3)
        # independent weights: every margin is 0 at the origin, so every
        # extension distance equals epsilon and weights are uniform
        exts = np.array([extension_distance(g, i, z) for i in range(1, 5)])
        assert np.allclose(exts, g.epsilon, atol=1e-12)
        expected = (exts / exts.sum()) @ g.modes.modes
        assert np.allclose(generate(g, z), expected, atol=1e-12)
        assert np.allclose(generate(g, z), g.modes.modes.mean(axis=0),
                           atol=1e-12)

    def test_weights_on_simplex(self):
        # nonnegative weights summing to one: outputs solve the convex
        # combination exactly
        g = make_gstar(m=4, d=4)
        rng = np.random.default_rng(31)
        z = rng.standard_normal((500, 4))
        from simcluster.generator import _blend_weights
        _, weights, _ = _blend_weights(g, z)
        assert weights.min() >= 0.0
        assert np.abs(weights.sum(axis=1) - 1.0).max() < 1e-12

    def test_recall_region_attains_every_mode(self):
        g = make_gstar(m=4, d=5)
        for i in range(4):
            out = generate(g, 50.0 * g.frame.directions[i])
            assert np.array_equal(out, g.modes.modes[i])


class TestGenerateBatch:
    def test_deterministic(self):
        g = make_gstar()
        a = generate_batch(g, 1, seed=77)
        b = generate_batch(g, 1, seed=77)
        assert np.array_equal(a.points, b.points)
        assert np.array_equal(a.latents, b.latents)
        assert a.seed == 77 and a.provenance == "fake"

    def test_outputs_in_convex_hull(self):
        g = make_gstar(m=3, d=3)
        batch = generate_batch(g, 2000, seed=5)
        # hull membership certified by recomputing the blend weights
        from simcluster.generator import _blend_weights
        _, weights, _ = _blend_weights(g, batch.latents)
        assert weights.min() >= 0.0
        assert np.abs(weights.sum(axis=1) - 1.0).max() < 1e-12
        assert np.allclose(batch.points,
                           np.where((weights > 0).sum(1, keepdims=True) == 1,
                                    batch.points, weights @ g.modes.modes),
                           atol=1e-12)

    def test_memorized_fraction_matches_boundary_measure(self):
        g = make_gstar(m=3, d=3)
        n = 100_000
        batch = generate_batch(g, n, seed=9)
        exact_hits = np.array([
            np.min(np.linalg.norm(batch.points[i] - g.modes.modes, axis=1))
            < 1e-9 for i in range(n)])
        memorized = exact_hits.mean()
        bd = boundary_measure(g.frame, g.epsilon, n, seed=10)
        combined = 3 * np.sqrt(bd.value * (1 - bd.value) / n) * 2
        assert abs(memorized - (1.0 - bd.value)) <= combined


class TestLipschitzProbe:
    def test_two_mode_ramp_slope(self):
        g = make_gstar(m=2, d=3)
        bound = g.modes.diameter / (2.0 * g.epsilon)
        ratio = lipschitz_probe(g, 10_000, seed=1)
        assert ratio <= bound * (1.0 + 1e-6)
        # the boundary-concentrated pairs actually see the ramp
        assert ratio >= 0.9 * bound

    def test_triangle_bound(self):
        g = make_gstar(m=3, d=3)
        bound = g.modes.diameter * np.sqrt(3.0) / g.epsilon
        assert lipschitz_probe(g, 20_000, seed=2) <= bound * (1.0 + 1e-6)

    def test_rejects_zero_pairs(self):
        g = make_gstar()
        with pytest.raises(ValueError):
            lipschitz_probe(g, 0, seed=1)
