import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from robustdesign import (
    DesignPoint,
    InvalidInputError,
    UncertaintySpec,
    child_rng,
    inverse_normal_cdf,
    lhs_unit,
    sample_around,
)


def occupancy(u):
    n = u.shape[0]
    return np.stack([np.bincount(np.floor(u[:, j] * n).astype(int), minlength=n)
                     for j in range(u.shape[1])])


class TestLhs:
    def test_single_point(self):
        u = lhs_unit(1, 3, child_rng(0))
        assert u.shape == (1, 3)
        assert np.all((u >= 0) & (u < 1))

    def test_fifty_by_two(self):
        u = lhs_unit(50, 2, child_rng(5))
        for j in range(2):
            assert sorted(np.floor(u[:, j] * 50).astype(int)) == list(range(50))

    def test_four_strata(self):
        u = lhs_unit(4, 1, child_rng(11))
        assert occupancy(u).tolist() == [[1, 1, 1, 1]]

    @pytest.mark.parametrize("n,d", [(0, 2), (3, 0)])
    def test_rejects_empty(self, n, d):
        with pytest.raises(InvalidInputError):
            lhs_unit(n, d, child_rng(0))

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 300), st.integers(1, 6), st.integers(0, 2 ** 63))
    def test_stratification_property(self, n, d, seed):
        u = lhs_unit(n, d, child_rng(seed))
        assert np.all((u >= 0) & (u < 1))
        assert np.all(occupancy(u) == 1)

    def test_deterministic(self):
        a = lhs_unit(30, 4, child_rng(99, 0, 7))
        b = lhs_unit(30, 4, child_rng(99, 0, 7))
        assert a.tobytes() == b.tobytes()

    def test_child_streams_differ(self):
        assert not np.array_equal(lhs_unit(30, 2, child_rng(1, 0, 1)),
                                  lhs_unit(30, 2, child_rng(1, 0, 2)))

    def test_pairing_is_random(self):
        # identical permutations in every column would put all points on the diagonal
        u = lhs_unit(200, 2, child_rng(3))
        assert abs(np.corrcoef(u.T)[0, 1]) < 0.3


class TestInverseNormal:
    def test_median(self):
        assert inverse_normal_cdf(0.5) == 0.0

    def test_phi_of_one(self):
        assert inverse_normal_cdf(0.8413447460685429) == pytest.approx(1.0, abs=1e-8)

    def test_against_high_precision(self):
        mpmath.mp.dps = 50
        ps = [1e-12, 1e-9, 1e-5, 0.001, 0.02425, 0.1, 0.3, 0.425, 0.5, 0.75, 0.97575, 0.999,
              1 - 1e-7, 1 - 1e-12]
        for p in ps:
            exact = float(mpmath.sqrt(2) * mpmath.erfinv(2 * mpmath.mpf(p) - 1))
            assert inverse_normal_cdf(p) == pytest.approx(exact, abs=1e-9)

    @given(st.floats(1e-12, 0.5))
    def test_symmetry(self, p):
        p = 1 - (1 - p)  # so that 1 - p is exact
        assert inverse_normal_cdf(p) == pytest.approx(-inverse_normal_cdf(1 - p), abs=1e-12)

    @given(st.floats(1e-12, 1 - 1e-12))
    def test_round_trip_through_cdf(self, p):
        z = inverse_normal_cdf(p)
        assert 0.5 * math.erfc(-z / math.sqrt(2)) == pytest.approx(p, rel=1e-9)

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.5, float("nan")])
    def test_domain(self, p):
        with pytest.raises(InvalidInputError):
            inverse_normal_cdf(p)

    def test_vectorised(self):
        out = inverse_normal_cdf(np.array([[0.5, 0.8413447460685429]]))
        assert out.shape == (1, 2)


class TestSampleAround:
    def test_vanishing_noise(self):
        d = DesignPoint((1.5, -0.5))
        b = sample_around(d, UncertaintySpec((1e-12, 1e-12)), 50, child_rng(0))
        assert np.all(np.abs(b.points - d.coords) < 1e-10)

    def test_default_noise_spread(self):
        d = DesignPoint((-2.0, -2.0))
        b = sample_around(d, UncertaintySpec.isotropic(0.1, 2), 50, child_rng(2024))
        sd = b.points.std(axis=0, ddof=1)
        assert np.all((sd > 0.07) & (sd < 0.13))

    @pytest.mark.parametrize("seed", range(10))
    def test_default_noise_spread_many_seeds(self, seed):
        b = sample_around(DesignPoint((-2.0, -2.0)), UncertaintySpec.isotropic(0.1, 2), 50,
                          child_rng(seed, 0, 3))
        sd = b.points.std(axis=0, ddof=1)
        assert np.all((sd > 0.07) & (sd < 0.13))

    def test_two_samples_straddle(self):
        d = DesignPoint((0.0, 3.0))
        b = sample_around(d, UncertaintySpec((1.0, 2.0)), 2, child_rng(8))
        for j in range(2):
            lo, hi = sorted(b.points[:, j])
            assert lo < d.coords[j] < hi

    @given(st.floats(-10, 10), st.floats(-10, 10), st.integers(0, 2 ** 32))
    def test_affine_equivariance(self, cx, cy, seed):
        spec = UncertaintySpec((0.1, 0.3))
        base = sample_around(DesignPoint((0.0, 0.0)), spec, 20, child_rng(seed))
        moved = sample_around(DesignPoint((cx, cy)), spec, 20, child_rng(seed))
        np.testing.assert_allclose(moved.points, base.points + [cx, cy], atol=1e-12)

    def test_mean_converges(self):
        d = DesignPoint((2.0, -1.0))
        b = sample_around(d, UncertaintySpec((0.5, 0.5)), 4000, child_rng(1))
        np.testing.assert_allclose(b.points.mean(axis=0), d.coords, atol=0.01)

    def test_dimension_mismatch(self):
        with pytest.raises(InvalidInputError):
            sample_around(DesignPoint((0.0, 0.0)), UncertaintySpec((0.1,)), 10, child_rng(0))

    def test_standardized(self):
        spec = UncertaintySpec((0.1, 0.2))
        b = sample_around(DesignPoint((1.0, 1.0)), spec, 10, child_rng(0))
        np.testing.assert_allclose(b.standardized(spec) * [0.1, 0.2] + 1.0, b.points)
