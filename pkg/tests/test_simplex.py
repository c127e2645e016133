import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mqbound.errors import DegenerateSimplexError, DomainError
from mqbound.simplex import (Simplex, barycentric, contains, diameter,
                             equally_spaced_points, multi_indices, scale_to_diameter)

UNIT_TRI = Simplex([[0, 0], [1, 0], [0, 1]])


class TestBarycentric:
    def test_vertex(self):
        s = Simplex.unit(3)
        np.testing.assert_allclose(barycentric(s, s.vertices[1]), [0, 1, 0, 0], atol=1e-15)

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_centroid(self, n):
        s = Simplex.regular(n)
        np.testing.assert_allclose(barycentric(s, s.centroid), np.full(n + 1, 1 / (n + 1)),
                                   atol=1e-14)

    def test_outside_point(self):
        # 3x3 system: c1*(0,0) + c2*(1,0) + c3*(0,1) = (1,1), c1+c2+c3 = 1
        np.testing.assert_allclose(barycentric(UNIT_TRI, [1, 1]), [-1, 1, 1], atol=1e-14)
        assert not contains(UNIT_TRI, [1, 1])

    def test_many_points(self):
        out = barycentric(UNIT_TRI, [[0, 0], [0.5, 0.5]])
        assert out.shape == (2, 3)

    @settings(max_examples=60, deadline=None)
    @given(n=st.integers(1, 4), seed=st.integers(0, 2 ** 31 - 1))
    def test_convex_combination_roundtrip(self, n, seed):
        rng = np.random.default_rng(seed)
        verts = rng.standard_normal((n + 1, n))
        try:
            s = Simplex(verts)
        except DegenerateSimplexError:
            return
        if np.linalg.cond(np.vstack([verts.T, np.ones(n + 1)])) > 1e6:
            return
        w = rng.standard_normal(n + 1)
        w[-1] = 1.0 - w[:-1].sum()
        x = w @ verts
        np.testing.assert_allclose(barycentric(s, x), w, atol=1e-10)


class TestSimplexValidation:
    def test_degenerate(self):
        with pytest.raises(DegenerateSimplexError):
            Simplex([[0, 0], [1, 1], [2, 2]])

    def test_wrong_shape(self):
        with pytest.raises(DegenerateSimplexError):
            Simplex([[0, 0], [1, 0]])

    def test_immutable(self):
        with pytest.raises(ValueError):
            UNIT_TRI.vertices[0, 0] = 3.0


class TestLattice:
    def test_segment_degree3(self):
        lat = equally_spaced_points(Simplex([[0.0], [1.0]]), 3)
        # lexicographic in (k1, k2): (0,3) first -> x = 1
        np.testing.assert_allclose(sorted(lat.points[:, 0]), [0, 1 / 3, 2 / 3, 1], atol=1e-15)

    def test_triangle_degree2(self):
        lat = equally_spaced_points(UNIT_TRI, 2)
        assert len(lat) == 6
        expected = {(0, 0), (1, 0), (0, 1), (0.5, 0), (0, 0.5), (0.5, 0.5)}
        got = {tuple(np.round(p, 12)) for p in lat.points}
        assert got == expected

    def test_tetra_degree4(self):
        assert len(equally_spaced_points(Simplex.unit(3), 4)) == 35

    @pytest.mark.parametrize("n", range(1, 6))
    @pytest.mark.parametrize("l", range(1, 9))
    def test_count_and_barycentric(self, n, l):
        s = Simplex.regular(n)
        lat = equally_spaced_points(s, l)
        assert len(lat) == math.comb(n + l, n)
        assert np.all(lat.multi_indices.sum(axis=1) == l)
        np.testing.assert_allclose(barycentric(s, lat.points), lat.multi_indices / l, atol=1e-12)
        assert np.all(contains(s, lat.points))

    def test_lexicographic_order(self):
        k = multi_indices(2, 3)
        assert [tuple(r) for r in k] == sorted(tuple(r) for r in k)
        assert len({tuple(r) for r in k}) == len(k)

    def test_deterministic(self):
        a = equally_spaced_points(UNIT_TRI, 5).points
        b = equally_spaced_points(UNIT_TRI, 5).points
        assert a.tobytes() == b.tobytes()

    def test_degree_zero_rejected(self):
        with pytest.raises(DomainError):
            equally_spaced_points(UNIT_TRI, 0)


class TestDiameter:
    def test_values(self):
        assert diameter(Simplex([[0.0], [1.0]])) == 1.0
        assert diameter(UNIT_TRI) == pytest.approx(math.sqrt(2), abs=1e-15)
        assert diameter(Simplex.regular(3, 1.0)) == pytest.approx(1.0, abs=1e-14)

    def test_scale_segment(self):
        s = scale_to_diameter(Simplex([[0.0], [1.0]]), 0.5)
        np.testing.assert_allclose(s.vertices, [[0.0], [0.5]])

    def test_scale_triangle(self):
        s = scale_to_diameter(UNIT_TRI, math.sqrt(2) / 2)
        np.testing.assert_allclose(s.vertices, UNIT_TRI.vertices / 2, atol=1e-15)

    def test_scale_identity(self):
        s = Simplex.regular(3, 0.7)
        t = scale_to_diameter(s, diameter(s))
        np.testing.assert_allclose(t.vertices, s.vertices)

    @pytest.mark.parametrize("target", [1e-3, 0.5, 2.0, 37.0])
    def test_scale_target(self, target):
        s = scale_to_diameter(Simplex.regular(4, 0.3), target)
        assert diameter(s) == pytest.approx(target, rel=1e-12)

    def test_scale_rejects_nonpositive(self):
        with pytest.raises(DomainError):
            scale_to_diameter(UNIT_TRI, 0.0)

    def test_right_simplex(self):
        assert diameter(Simplex.right(3, 0.25)) == pytest.approx(0.25, rel=1e-14)
