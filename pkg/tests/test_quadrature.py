import numpy as np
import pytest

from cutstep.geometry import CornerCutDomain
from cutstep.quadrature import (
    CutCellRule,
    cut_cell_rule,
    gauss_legendre_1d,
    gll_rule_1d,
    tensorize,
)


class QuarterCircle:
    """Probe-fallback domain: inside the circle of given radius at the origin."""

    dimension = 2

    def __init__(self, radius):
        self.radius = radius

    def inside(self, pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        return (pts**2).sum(axis=1) <= self.radius**2


class TestGaussLegendre:
    def test_midpoint_rule(self):
        rule = gauss_legendre_1d(1)
        assert np.allclose(rule.points, [[0.0]]) and np.allclose(rule.weights, [2.0])

    def test_two_point_rule(self):
        # roots of P2 = (3 xi^2 - 1)/2 at +-1/sqrt(3)
        rule = gauss_legendre_1d(2)
        assert np.allclose(np.sort(rule.points[:, 0]), [-0.5773502692, 0.5773502692])
        assert np.allclose(rule.weights, [1.0, 1.0])

    def test_odd_monomial_vanishes(self):
        rule = gauss_legendre_1d(2)
        assert abs(rule.weights @ rule.points[:, 0] ** 3) < 1e-15

    def test_rejects_zero_points(self):
        with pytest.raises(ValueError):
            gauss_legendre_1d(0)

    @pytest.mark.parametrize("n", range(1, 12))
    def test_exactness_2n_minus_1(self, n):
        rule = gauss_legendre_1d(n)
        assert rule.exactness == 2 * n - 1
        x, w = rule.points[:, 0], rule.weights
        for k in range(2 * n):
            exact = 0.0 if k % 2 else 2.0 / (k + 1)
            assert abs(w @ x**k - exact) < 1e-12

    @pytest.mark.parametrize("n", range(1, 12))
    def test_weight_sum(self, n):
        assert abs(gauss_legendre_1d(n).weights.sum() - 2.0) < 1e-12


class TestGllRule:
    def test_trapezoid_p1(self):
        rule = gll_rule_1d(1)
        assert np.allclose(rule.weights, [1.0, 1.0])

    def test_simpson_p2(self):
        rule = gll_rule_1d(2)
        assert np.allclose(rule.weights, [1 / 3, 4 / 3, 1 / 3])

    def test_p2_integrates_squares(self):
        rule = gll_rule_1d(2)
        assert abs(rule.weights @ rule.points[:, 0] ** 2 - 2.0 / 3.0) < 1e-14

    def test_rejects_p0(self):
        with pytest.raises(ValueError):
            gll_rule_1d(0)

    @pytest.mark.parametrize("p", range(1, 11))
    def test_exactness_2p_minus_1(self, p):
        rule = gll_rule_1d(p)
        x, w = rule.points[:, 0], rule.weights
        for k in range(2 * p):
            exact = 0.0 if k % 2 else 2.0 / (k + 1)
            assert abs(w @ x**k - exact) < 1e-12


class TestTensorize:
    def test_two_point_square(self):
        rule = tensorize(gauss_legendre_1d(2), 2)
        assert rule.points.shape == (4, 2)
        assert np.allclose(rule.weights, 1.0)

    def test_single_point_cube(self):
        rule = tensorize(gauss_legendre_1d(1), 3)
        assert np.allclose(rule.points, [[0.0, 0.0, 0.0]])
        assert np.allclose(rule.weights, [8.0])

    def test_measure_preserved(self):
        rule = tensorize(gauss_legendre_1d(3), 2)
        assert abs(rule.weights.sum() - 4.0) < 1e-12

    def test_first_coordinate_fastest(self):
        rule = tensorize(gauss_legendre_1d(2), 2)
        x = gauss_legendre_1d(2).points[:, 0]
        # q = i1 + 2 * i2
        assert np.allclose(rule.points[1], [x[1], x[0]])
        assert np.allclose(rule.points[2], [x[0], x[1]])


class TestCutCellRule:
    def test_interior_element_single_leaf(self):
        domain = CornerCutDomain(0.5, 2)
        rule = cut_cell_rule((0.0, 0.0), (0.2, 0.2), domain, 5, 3)
        assert rule.n_leaves == 1
        assert rule.classification == "interior"
        assert rule.inside.all()
        assert abs(rule.integrate(alpha=0.0) - 0.04) < 1e-14

    def test_exterior_element_single_leaf(self):
        domain = CornerCutDomain(0.5, 2)
        rule = cut_cell_rule((0.6, 0.6), (0.9, 0.9), domain, 5, 3)
        assert rule.n_leaves == 1
        assert rule.classification == "fictitious"
        assert not rule.inside.any()
        assert abs(rule.integrate(alpha=0.5) - 0.5 * 0.09) < 1e-14

    def test_quarter_circle_area(self):
        # analytic area oracle: quarter circle of radius 0.2
        domain = QuarterCircle(0.2)
        rule = cut_cell_rule((0.0, 0.0), (0.2, 0.2), domain, 6, 3)
        assert abs(rule.integrate(alpha=0.0) - np.pi * 0.04 / 4.0) < 1e-4

    def test_alpha_one_degenerates_to_cube_rule(self):
        domain = QuarterCircle(0.2)
        rule = cut_cell_rule((0.0, 0.0), (0.2, 0.2), domain, 4, 3)
        ref_integral = (rule.weights * rule.scales(1.0)).sum()
        assert abs(ref_integral - 4.0) < 1e-12

    def test_leaves_tile_reference_cube(self):
        domain = CornerCutDomain(0.37, 2)
        rule = cut_cell_rule((0.0, 0.0), (1.0, 1.0), domain, 5, 2)
        volumes = np.prod(rule.leaf_bounds[:, 1, :] - rule.leaf_bounds[:, 0, :], axis=1)
        assert abs(volumes.sum() - 4.0) < 1e-12
        # every leaf coarser than or equal to the requested depth
        assert np.all(volumes >= (2.0 / 2**5) ** 2 - 1e-15)

    def test_weights_positive_and_levels_bounded(self):
        domain = CornerCutDomain(0.61, 2)
        rule = cut_cell_rule((0.0, 0.0), (1.0, 1.0), domain, 4, 3)
        assert (rule.weights > 0).all()
        assert rule.depth == 4
        assert set(np.unique(rule.scales(0.25))) <= {0.25, 1.0}

    @pytest.mark.parametrize("d", [1, 2])
    def test_cornercut_volume_convergence(self, d):
        # integral of 1 with alpha = 0 approaches chi^d; the bound halves per level
        chi = 0.61
        domain = CornerCutDomain(chi, d)
        lo, hi = np.zeros(d), np.ones(d)
        errors = []
        for k in range(0, 9, 2):
            rule = cut_cell_rule(lo, hi, domain, k, 3)
            errors.append(abs(rule.integrate(alpha=0.0) - chi**d))
        for i, k in enumerate(range(0, 9, 2)):
            assert errors[i] <= d * 2.0 ** (-k) + 1e-12
        assert errors[-1] < errors[0] / 16.0

    def test_interior_element_integral_independent_of_depth(self):
        domain = CornerCutDomain(0.5, 2)
        values = []
        for k in (0, 2, 5):
            rule = cut_cell_rule((0.0, 0.0), (0.3, 0.3), domain, k, 4)
            assert rule.n_leaves == 1
            values.append(rule.integrate(alpha=1.0, f=lambda x: x[:, 0] ** 2 * x[:, 1]))
        assert np.ptp(values) == 0.0

    def test_dyadic_cut_exact_from_level_one(self):
        domain = CornerCutDomain(0.5, 2)
        rule = cut_cell_rule((0.0, 0.0), (1.0, 1.0), domain, 1, 3)
        assert abs(rule.integrate(alpha=0.0) - 0.25) < 1e-14

    def test_negative_depth_rejected(self):
        with pytest.raises(ValueError):
            cut_cell_rule((0.0, 0.0), (1.0, 1.0), CornerCutDomain(0.5, 2), -1, 2)
