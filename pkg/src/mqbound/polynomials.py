"""
The space of ``n``-variate polynomials of degree ``<= l``.

Monomial bases in graded lexicographic order, Vandermonde matrices, a
rank-revealing unisolvency test, Lagrange cardinal functions on lattice
points and a sampled estimate of the Lebesgue constant.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.linalg

from mqbound.errors import NotDeterminingError
from mqbound.simplex import LatticePoints, Simplex, diameter, equally_spaced_points
from mqbound.special import ln_binomial

__all__ = [
    "MonomialBasis",
    "LagrangeBasis",
    "LebesgueEstimate",
    "vandermonde",
    "is_determining",
    "lagrange_basis",
    "lebesgue_upper_bound",
    "lebesgue_estimate",
]

RANK_TOL = 1e-10


def _graded_exponents(n, l):
    out = []
    for total in range(l + 1):
        level = []

        def rec(prefix, remaining, slots):
            if slots == 1:
                level.append(tuple(prefix + [remaining]))
                return
            for k in range(remaining, -1, -1):
                rec(prefix + [k], remaining - k, slots - 1)

        rec([], total, n)
        out.extend(level)
    return out


@dataclass(frozen=True, eq=False)
class MonomialBasis:
    """Monomials ``x^alpha`` with ``|alpha| <= degree``.

    Ordered by total degree, then lexicographically with the first variable
    varying slowest (``1, x1, x2, x1^2, x1 x2, x2^2, ...``).
    """

    dim_space: int
    degree: int

    def __post_init__(self):
        if self.degree < 0:
            exps = np.zeros((0, self.dim_space), dtype=int)
        else:
            exps = np.array(_graded_exponents(self.dim_space, self.degree), dtype=int)
        exps.setflags(write=False)
        object.__setattr__(self, "_exponents", exps)

    @property
    def exponents(self) -> np.ndarray:
        return self._exponents

    def __len__(self):
        return self._exponents.shape[0]


def vandermonde(points, basis: MonomialBasis, center=None, scale: float = 1.0) -> np.ndarray:
    """Matrix with entry ``(i, j) = monomial_j((points_i - center) / scale)``."""
    x = np.atleast_2d(np.asarray(points, dtype=float))
    if center is not None:
        x = x - np.asarray(center, dtype=float)
    if scale != 1.0:
        x = x / scale
    exps = basis.exponents
    if exps.shape[0] == 0:
        return np.zeros((x.shape[0], 0))
    # (M, 1, n) ** (1, N, n) -> product over the coordinate axis
    return np.prod(x[:, None, :] ** exps[None, :, :], axis=-1)


def _rank_pivots(a):
    _, r, _ = scipy.linalg.qr(a, mode="economic", pivoting=True)
    return np.abs(np.diag(r))


def is_determining(points, n: int, l: int, tol: float = RANK_TOL) -> bool:
    """Whether ``points`` determine polynomials of degree ``<= l`` in ``n`` variables.

    Uses pivoted QR on a centered, scaled Vandermonde matrix; the set is
    accepted when all ``C(n+l, n)`` pivots exceed ``tol`` times the largest.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.size == 0:
        return False
    basis = MonomialBasis(n, l)
    if pts.shape[0] < len(basis):
        return False
    center = pts.mean(axis=0)
    spread = float(np.max(np.abs(pts - center))) or 1.0
    v = vandermonde(pts, basis, center=center, scale=spread)
    piv = _rank_pivots(v)
    if piv.size < len(basis) or piv[0] == 0.0:
        return False
    return bool(piv[len(basis) - 1] > tol * piv[0])


@dataclass(frozen=True, eq=False)
class LagrangeBasis:
    """Cardinal polynomials of a lattice.

    ``coefficients[:, i]`` expresses ``l_i`` in the monomial basis of the
    shifted, scaled variable ``(x - center) / scale``.
    """

    nodes: LatticePoints
    basis: MonomialBasis
    coefficients: np.ndarray
    center: np.ndarray
    scale: float

    def __call__(self, x) -> np.ndarray:
        """Values ``l_i(x)``, shape ``(M, N)`` for ``M`` points."""
        v = vandermonde(x, self.basis, center=self.center, scale=self.scale)
        return v @ self.coefficients

    def interpolate(self, values):
        """Coefficients (same monomial basis) of the interpolating polynomial."""
        return self.coefficients @ np.asarray(values, dtype=float)


def lagrange_basis(nodes: LatticePoints) -> LagrangeBasis:
    n = nodes.simplex.dim
    basis = MonomialBasis(n, nodes.degree)
    center = nodes.simplex.centroid
    scale = diameter(nodes.simplex)
    v = vandermonde(nodes.points, basis, center=center, scale=scale)
    piv = _rank_pivots(v)
    if piv[-1] <= RANK_TOL * piv[0]:
        raise NotDeterminingError(
            "lattice Vandermonde is numerically singular (pivot ratio %.3g)"
            % (piv[-1] / piv[0]))
    coeffs = scipy.linalg.solve(v, np.eye(len(basis)))
    return LagrangeBasis(nodes=nodes, basis=basis, coefficients=coeffs,
                         center=center, scale=scale)


class LebesgueEstimate(NamedTuple):
    estimate: float
    upper_bound: float


def lebesgue_upper_bound(l: int) -> float:
    """``C(2l-1, l)``, the bound on the Lebesgue constant of degree-``l`` lattices."""
    return math.exp(ln_binomial(2 * l - 1, l))


def lebesgue_estimate(basis: LagrangeBasis, s: Simplex, sample_degree: int) -> LebesgueEstimate:
    """Lower estimate of the Lebesgue constant by lattice sampling.

    The maximum of ``sum_i |l_i(x)|`` is taken over the degree
    ``sample_degree`` lattice of ``s`` and reported next to ``C(2l-1, l)``.
    """
    l = basis.nodes.degree
    if sample_degree < 2 * l:
        raise ValueError("sample_degree must be >= 2l = %d" % (2 * l))
    sample = equally_spaced_points(s, sample_degree).points
    best = 0.0
    for start in range(0, sample.shape[0], 4096):
        vals = basis(sample[start:start + 4096])
        best = max(best, float(np.max(np.sum(np.abs(vals), axis=1))))
    return LebesgueEstimate(best, lebesgue_upper_bound(l))
