import math

import numpy as np
import pytest

from mqbound.polynomials import (MonomialBasis, is_determining, lagrange_basis,
                                 lebesgue_estimate, lebesgue_upper_bound, vandermonde)
from mqbound.simplex import Simplex, equally_spaced_points
from mqbound.verify import random_points_in_simplex

SEGMENT = Simplex([[0.0], [1.0]])


class TestMonomialBasis:
    @pytest.mark.parametrize("n,l", [(1, 0), (1, 5), (2, 3), (3, 4), (4, 2)])
    def test_size(self, n, l):
        b = MonomialBasis(n, l)
        assert len(b) == math.comb(n + l, n)
        assert len({tuple(e) for e in b.exponents}) == len(b)

    def test_graded_order(self):
        b = MonomialBasis(2, 2)
        assert [tuple(e) for e in b.exponents] == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]

    def test_empty_for_negative_degree(self):
        assert len(MonomialBasis(3, -1)) == 0


class TestVandermonde:
    def test_origin_row(self):
        row = vandermonde([[0.0, 0.0, 0.0]], MonomialBasis(3, 3))[0]
        assert row[0] == 1.0
        assert np.all(row[1:] == 0.0)

    def test_1d(self):
        np.testing.assert_array_equal(vandermonde([[0.0], [1.0]], MonomialBasis(1, 1)),
                                      [[1, 0], [1, 1]])

    def test_2d_linear(self):
        np.testing.assert_array_equal(vandermonde([[2.0, 3.0]], MonomialBasis(2, 1)), [[1, 2, 3]])


class TestDetermining:
    @pytest.mark.parametrize("n", [1, 2, 3])
    @pytest.mark.parametrize("l", [1, 2, 3, 4])
    def test_lattices(self, n, l):
        pts = equally_spaced_points(Simplex.unit(n), l).points
        assert is_determining(pts, n, l)

    def test_collinear(self):
        assert not is_determining([[0, 0], [1, 1], [2, 2]], 2, 1)

    def test_too_few(self):
        pts = equally_spaced_points(Simplex.unit(2), 2).points[:-1]
        assert not is_determining(pts, 2, 2)

    def test_conic_is_not_determining_for_degree_2(self):
        # six points on the unit circle lie on the zero set of x^2 + y^2 - 1
        t = np.linspace(0, 2 * np.pi, 6, endpoint=False)
        assert not is_determining(np.c_[np.cos(t), np.sin(t)], 2, 2)


class TestLagrange:
    def test_linear_1d(self):
        lb = lagrange_basis(equally_spaced_points(SEGMENT, 1))
        x = np.linspace(0, 1, 7)[:, None]
        vals = lb(x)
        # lattice order (0,1) -> x=1 first, (1,0) -> x=0 second
        pts = equally_spaced_points(SEGMENT, 1).points[:, 0]
        for i, y in enumerate(pts):
            expect = x[:, 0] if y == 1.0 else 1 - x[:, 0]
            np.testing.assert_allclose(vals[:, i], expect, atol=1e-14)

    def test_quadratic_1d(self):
        lat = equally_spaced_points(SEGMENT, 2)
        lb = lagrange_basis(lat)
        x = np.linspace(0, 1, 11)
        known = {0.0: 2 * x ** 2 - 3 * x + 1, 0.5: -4 * x ** 2 + 4 * x, 1.0: 2 * x ** 2 - x}
        vals = lb(x[:, None])
        for i, y in enumerate(lat.points[:, 0]):
            np.testing.assert_allclose(vals[:, i], known[float(y)], atol=1e-13)

    @pytest.mark.parametrize("n,l", [(1, 5), (2, 3), (2, 6), (3, 4)])
    def test_cardinal_and_partition_of_unity(self, n, l, rng):
        s = Simplex.unit(n)
        lat = equally_spaced_points(s, l)
        lb = lagrange_basis(lat)
        np.testing.assert_allclose(lb(lat.points), np.eye(len(lat)), atol=1e-8)
        x = random_points_in_simplex(s, 30, rng)
        np.testing.assert_allclose(lb(x).sum(axis=1), 1.0, atol=1e-10)

    @pytest.mark.parametrize("n", [1, 2, 3])
    @pytest.mark.parametrize("l", [1, 2, 3, 4])
    def test_projection_property(self, n, l, rng):
        s = Simplex.unit(n)
        lat = equally_spaced_points(s, l)
        lb = lagrange_basis(lat)
        basis = MonomialBasis(n, l)
        coeffs = rng.standard_normal(len(basis))
        p = lambda x: vandermonde(x, basis) @ coeffs
        x = random_points_in_simplex(s, 50, rng)
        approx = lb(x) @ p(lat.points)
        exact = p(x)
        np.testing.assert_allclose(approx, exact, rtol=1e-8, atol=1e-8 * np.max(np.abs(exact)))


class TestLebesgue:
    def test_linear_segment(self):
        lb = lagrange_basis(equally_spaced_points(SEGMENT, 1))
        est = lebesgue_estimate(lb, SEGMENT, 64)
        assert est.estimate == pytest.approx(1.0, abs=1e-14)
        assert est.upper_bound == 1.0

    def test_quadratic_segment(self):
        # max of |2x^2-3x+1| + |-4x^2+4x| + |2x^2-x| on [0,1] is 5/4 at x = 1/4, 3/4
        lb = lagrange_basis(equally_spaced_points(SEGMENT, 2))
        est = lebesgue_estimate(lb, SEGMENT, 64)
        assert est.estimate == pytest.approx(1.25, abs=0.01)
        assert est.upper_bound == pytest.approx(3.0)

    def test_calculus_oracle(self):
        xs = np.linspace(0, 1, 200001)
        f = np.abs(2 * xs ** 2 - 3 * xs + 1) + np.abs(-4 * xs ** 2 + 4 * xs) + np.abs(2 * xs ** 2 - xs)
        assert f.max() == pytest.approx(1.25, abs=1e-9)

    @pytest.mark.parametrize("n", [1, 2])
    @pytest.mark.parametrize("l", range(1, 7))
    def test_bounded_by_binomial(self, n, l):
        s = Simplex.unit(n)
        est = lebesgue_estimate(lagrange_basis(equally_spaced_points(s, l)), s,
                                max(2 * l, 30 if n == 2 else 64))
        assert est.estimate <= lebesgue_upper_bound(l) + 1e-9
        assert est.estimate >= 1.0 - 1e-12

    def test_norm_inequality_at_samples(self, rng):
        s = Simplex.unit(2)
        l = 3
        lat = equally_spaced_points(s, l)
        lb = lagrange_basis(lat)
        est = lebesgue_estimate(lb, s, 24)
        basis = MonomialBasis(2, l)
        sample = equally_spaced_points(s, 24).points
        for _ in range(10):
            c = rng.standard_normal(len(basis))
            sup = np.max(np.abs(vandermonde(sample, basis) @ c))
            at_nodes = np.max(np.abs(vandermonde(lat.points, basis) @ c))
            assert sup <= est.estimate * at_nodes * (1 + 1e-10)

    def test_rejects_coarse_sampling(self):
        lb = lagrange_basis(equally_spaced_points(SEGMENT, 3))
        with pytest.raises(ValueError):
            lebesgue_estimate(lb, SEGMENT, 5)
