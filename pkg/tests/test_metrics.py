import math

import numpy as np
import pytest

from simcluster import (SampleSet, coverage, coverage_convergence,
                        coverage_schedule_k, density, equilibrium,
                        generate_batch, knn_radii, precision_support,
                        recall_support)
from simcluster.metrics import pairwise_distances
from tests.conftest import equidistant_modes
from tests.test_generator import make_gstar


# naive reference implementations (independent double loops)

def brute_knn_radii(points, k):
    n = len(points)
    out = np.empty(n)
    for i in range(n):
        dists = sorted(np.sqrt(np.sum((points[i] - points[j]) ** 2))
                       for j in range(n) if j != i)
        out[i] = dists[k - 1]
    return out


def brute_density(real, fake, k):
    radii = brute_knn_radii(real, k)
    count = 0
    for j in range(len(fake)):
        for i in range(len(real)):
            if np.sqrt(np.sum((fake[j] - real[i]) ** 2)) <= radii[i]:
                count += 1
    return count / (k * len(fake))


def brute_coverage(real, fake, k):
    radii = brute_knn_radii(real, k)
    hits = 0
    for i in range(len(real)):
        for j in range(len(fake)):
            if np.sqrt(np.sum((fake[j] - real[i]) ** 2)) <= radii[i]:
                hits += 1
                break
    return hits / len(real)


def brute_equilibrium(real, fake):
    counts = [0] * len(real)
    for j in range(len(fake)):
        best, best_d = 0, np.inf
        for i in range(len(real)):
            d = np.sqrt(np.sum((fake[j] - real[i]) ** 2))
            if d < best_d:
                best, best_d = i, d
        counts[best] += 1
    alpha = 1.0 / len(fake)
    smoothed = np.array(counts, dtype=float) + alpha
    p = smoothed / smoothed.sum()
    u = 1.0 / len(real)
    kl = float(np.sum(u * np.log(u / p)))
    return kl, sum(c == 0 for c in counts)


class TestSampleSet:
    def test_validation(self):
        with pytest.raises(ValueError):
            SampleSet(points=np.zeros((0, 2)))
        with pytest.raises(ValueError):
            SampleSet(points=np.array([[np.inf, 0.0]]))
        with pytest.raises(ValueError):
            SampleSet(points=np.zeros((3, 2)), labels=np.array([1, 2]))
        with pytest.raises(ValueError):
            SampleSet(points=np.zeros((3, 2)), provenance="other")


class TestSupportMetrics:
    def test_exact_memorization(self):
        modes = equidistant_modes(3)
        fake = SampleSet(points=np.tile(modes.modes[0], (10, 1)),
                         provenance="fake")
        assert precision_support(fake, modes, tol=0.0) == 1.0

    def test_no_overlap(self):
        modes = equidistant_modes(3)
        fake = SampleSet(points=modes.modes + 10.0, provenance="fake")
        assert precision_support(fake, modes, tol=0.5) == 0.0
        assert recall_support(fake, modes, tol=0.5) == 0.0

    def test_recall_counts_modes_hit(self):
        modes = equidistant_modes(4)
        fake = SampleSet(points=modes.modes[:3], provenance="fake")
        assert recall_support(fake, modes, tol=0.0) == 0.75
        full = SampleSet(points=modes.modes, provenance="fake")
        assert recall_support(full, modes, tol=0.0) == 1.0

    def test_precision_matches_active_set_counting(self):
        g = make_gstar(m=3, d=3)
        n = 50_000
        batch = generate_batch(g, n, seed=3)
        alpha = precision_support(batch, g.modes, tol=0.0)
        from simcluster import memorization_rate
        mem, se = memorization_rate(g, n, seed=3)
        assert abs(alpha - mem) <= 3 * se * 2

    def test_gstar_recall_is_one(self):
        g = make_gstar(m=5, d=8)
        batch = generate_batch(g, 10_000, seed=4)
        assert recall_support(batch, g.modes, tol=0.0) == 1.0

    def test_permutation_invariance(self):
        rng = np.random.default_rng(0)
        modes = equidistant_modes(4)
        pts = rng.standard_normal((50, 3))
        fake = SampleSet(points=pts, provenance="fake")
        shuffled = SampleSet(points=pts[rng.permutation(50)],
                             provenance="fake")
        assert precision_support(fake, modes, 0.5) \
            == precision_support(shuffled, modes, 0.5)

    def test_dimension_mismatch(self):
        modes = equidistant_modes(3)
        fake = SampleSet(points=np.zeros((5, modes.ambient_dim + 1)))
        with pytest.raises(ValueError, match="dimension"):
            precision_support(fake, modes)


class TestKnnRadii:
    def test_two_points(self):
        pts = np.array([[0.0, 0.0], [3.0, 4.0]])
        radii = knn_radii(SampleSet(points=pts), k=1)
        assert np.array_equal(radii, [5.0, 5.0])

    def test_duplicate_gives_zero_radius(self):
        pts = np.array([[1.0, 1.0], [1.0, 1.0], [5.0, 5.0]])
        radii = knn_radii(SampleSet(points=pts), k=1)
        assert radii[0] == 0.0 and radii[1] == 0.0

    def test_bit_identical_to_brute_force(self):
        rng = np.random.default_rng(12)
        pts = rng.standard_normal((50, 3))
        got = knn_radii(SampleSet(points=pts), k=5)
        assert np.array_equal(got, brute_knn_radii(pts, 5))

    def test_rejects_large_k(self):
        pts = np.zeros((4, 2)) + np.arange(4)[:, None]
        with pytest.raises(ValueError):
            knn_radii(SampleSet(points=pts), k=4)


class TestDensityCoverage:
    def test_density_identical_sets(self):
        rng = np.random.default_rng(3)
        pts = rng.standard_normal((30, 2))
        real = SampleSet(points=pts)
        fake = SampleSet(points=pts, provenance="fake")
        val = density(real, fake, k=1)
        assert val == brute_density(pts, pts, 1)
        assert val >= 1.0  # every fake point sits in its twin's ball

    def test_density_far_fake_is_zero(self):
        real = SampleSet(points=np.eye(4))
        fake = SampleSet(points=np.eye(4) + 100.0, provenance="fake")
        assert density(real, fake, k=1) == 0.0

    def test_density_square_center_hand_value(self):
        # unit square corners: every 1-NN radius is 1; the center is at
        # distance sqrt(0.5) of all four corners, so it lands in all four
        # balls and density = 4 / (1 * 1)
        real = SampleSet(points=np.array([[0, 0], [1, 0], [0, 1], [1, 1]],
                                         dtype=float))
        fake = SampleSet(points=np.array([[0.5, 0.5]]), provenance="fake")
        assert density(real, fake, k=1) == 4.0

    def test_coverage_self_is_one(self):
        rng = np.random.default_rng(5)
        pts = rng.standard_normal((40, 3))
        assert coverage(SampleSet(points=pts),
                        SampleSet(points=pts, provenance="fake"), k=2) == 1.0

    def test_coverage_disjoint_is_zero(self):
        real = SampleSet(points=np.eye(5))
        fake = SampleSet(points=np.eye(5) + 50.0, provenance="fake")
        assert coverage(real, fake, k=1) == 0.0

    def test_small_instance_enumeration(self):
        real_pts = np.array([[0, 0], [2, 0], [0, 2], [2, 2]], dtype=float)
        fake_pts = np.array([[0.1, 0.1], [5.0, 5.0]])
        real = SampleSet(points=real_pts)
        fake = SampleSet(points=fake_pts, provenance="fake")
        assert coverage(real, fake, 1) == brute_coverage(real_pts, fake_pts, 1)
        assert density(real, fake, 1) == brute_density(real_pts, fake_pts, 1)

    def test_coverage_monotone_in_k(self):
        rng = np.random.default_rng(9)
        real = SampleSet(points=rng.standard_normal((60, 2)))
        fake = SampleSet(points=rng.standard_normal((60, 2)),
                         provenance="fake")
        vals = [coverage(real, fake, k) for k in (1, 2, 4, 8)]
        assert all(a <= b for a, b in zip(vals, vals[1:]))
        assert all(0.0 <= v <= 1.0 for v in vals)

    def test_rigid_motion_invariance(self):
        rng = np.random.default_rng(21)
        A = rng.standard_normal((40, 3))
        B = rng.standard_normal((35, 3))
        theta = 0.7
        R = np.array([[np.cos(theta), -np.sin(theta), 0],
                      [np.sin(theta), np.cos(theta), 0],
                      [0, 0, 1.0]])
        shift = np.array([3.0, -1.0, 2.0])
        A2, B2 = A @ R.T + shift, B @ R.T + shift
        real, fake = SampleSet(points=A), SampleSet(points=B,
                                                    provenance="fake")
        real2, fake2 = SampleSet(points=A2), SampleSet(points=B2,
                                                       provenance="fake")
        assert density(real, fake, 3) == density(real2, fake2, 3)
        assert coverage(real, fake, 3) == coverage(real2, fake2, 3)


class TestEquilibrium:
    def test_perfectly_balanced_is_zero(self):
        real = SampleSet(points=np.array([[0.0, 0.0], [10.0, 0.0]]))
        fake = SampleSet(points=np.array([[0.1, 0], [-0.1, 0],
                                          [9.9, 0], [10.1, 0]]),
                         provenance="fake")
        result = equilibrium(real, fake)
        assert result.kl == 0.0
        assert result.empty_cells == 0

    def test_collapsed_matches_hand_calculation(self):
        real = SampleSet(points=np.array([[0.0], [10.0]]))
        fake = SampleSet(points=np.array([[0.1], [0.2], [-0.3]]),
                         provenance="fake")
        result = equilibrium(real, fake)
        # counts (3, 0), smoothing alpha = 1/3
        alpha = 1.0 / 3.0
        p = np.array([3 + alpha, alpha]) / (3 + 2 * alpha)
        expected = 0.5 * math.log(0.5 / p[0]) + 0.5 * math.log(0.5 / p[1])
        assert result.kl == pytest.approx(expected, abs=1e-15)
        assert result.kl > 0.0
        assert result.empty_cells == 1

    def test_matches_brute_force(self):
        rng = np.random.default_rng(14)
        real_pts = rng.standard_normal((20, 2))
        fake_pts = rng.standard_normal((30, 2))
        got = equilibrium(SampleSet(points=real_pts),
                          SampleSet(points=fake_pts, provenance="fake"))
        kl, empty = brute_equilibrium(real_pts, fake_pts)
        assert got.kl == kl
        assert got.empty_cells == empty

    def test_real_permutation_invariant_off_ties(self):
        rng = np.random.default_rng(15)
        real_pts = rng.standard_normal((12, 2))
        fake_pts = rng.standard_normal((40, 2))
        a = equilibrium(SampleSet(points=real_pts),
                        SampleSet(points=fake_pts, provenance="fake"))
        perm = rng.permutation(12)
        b = equilibrium(SampleSet(points=real_pts[perm]),
                        SampleSet(points=fake_pts, provenance="fake"))
        assert a.kl == pytest.approx(b.kl, abs=1e-12)


def blob_sampler(centers, scale=0.05):
    centers = np.asarray(centers, dtype=float)

    def sample(n, rng):
        which = rng.integers(0, len(centers), size=n)
        return centers[which] + scale * rng.standard_normal(
            (n, centers.shape[1]))

    return sample


class TestCoverageConvergence:
    def test_schedule_k(self):
        assert coverage_schedule_k(20_000) == 4
        assert coverage_schedule_k(1000) == 3

    def test_identical_laws_converge_to_one(self):
        centers = np.array([[0, 0], [10, 0], [0, 10], [10, 10]], dtype=float)
        law = blob_sampler(centers)
        rows = coverage_convergence(law, law, beta_true=1.0,
                                    n_schedule=[500, 4000], seed=3)
        assert rows[-1]["gap"] <= rows[0]["gap"] + 0.01
        assert rows[-1]["coverage"] >= 0.97

    def test_disjoint_laws_stay_near_zero(self):
        near = blob_sampler(np.array([[0.0, 0.0]]))
        far = blob_sampler(np.array([[50.0, 50.0]]))
        rows = coverage_convergence(near, far, beta_true=0.0,
                                    n_schedule=[500, 2000], seed=5)
        assert rows[-1]["coverage"] <= 0.02

    def test_rejects_non_increasing_schedule(self):
        law = blob_sampler(np.array([[0.0, 0.0]]))
        with pytest.raises(ValueError):
            coverage_convergence(law, law, 1.0, [100, 100], seed=0)


def test_pairwise_distances_chunking_consistent():
    rng = np.random.default_rng(2)
    A, B = rng.standard_normal((37, 4)), rng.standard_normal((53, 4))
    full = pairwise_distances(A, B)
    naive = np.array([[np.sqrt(np.sum((a - b) ** 2)) for b in B] for a in A])
    assert np.array_equal(full, naive)
