"""
Norming measures on lattice points.

For a point ``x`` of a simplex, signed weights ``z_j`` on the degree-``l``
lattice reproduce evaluation at ``x`` on polynomials of degree ``<= l``:
``p(x) = sum_j z_j p(y_j)``.  Using cardinal values ``z_j = l_j(x)`` the
total variation is at most the Lebesgue constant, hence at most
``C(2l-1, l)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from mqbound.errors import OutsideSimplexError
from mqbound.polynomials import MonomialBasis, lagrange_basis, vandermonde
from mqbound.simplex import LatticePoints, Simplex, contains, equally_spaced_points

__all__ = [
    "NormingMeasure",
    "norming_weights",
    "total_variation",
    "moment_against_distance",
    "exactness_residual",
]


@dataclass(frozen=True, eq=False)
class NormingMeasure:
    support: LatticePoints
    weights: np.ndarray
    target: np.ndarray
    degree: int


def norming_weights(s: Simplex, l: int, x) -> NormingMeasure:
    """Measure on the degree-``l`` lattice of ``s`` that is exact on degree ``<= l``.

    Pass ``l - 1`` to get the variant used for the error bound of degree ``l``.
    """
    x = np.asarray(x, dtype=float).reshape(-1)
    if not contains(s, x):
        raise OutsideSimplexError("target point %s lies outside the simplex" % (x,))
    nodes = equally_spaced_points(s, l)
    card = lagrange_basis(nodes)
    z = card(x)[0]
    z.setflags(write=False)
    return NormingMeasure(support=nodes, weights=z, target=x, degree=l)


def total_variation(m: NormingMeasure) -> float:
    return float(np.sum(np.abs(m.weights)))


def moment_against_distance(m: NormingMeasure, x, power: int) -> float:
    """``sum_j |z_j| |y_j - x|^power``."""
    x = np.asarray(x, dtype=float).reshape(-1)
    dist = np.linalg.norm(m.support.points - x, axis=1)
    return float(np.sum(np.abs(m.weights) * dist ** power))


def exactness_residual(m: NormingMeasure) -> float:
    """Worst relative defect ``|sum_j z_j y_j^a - x^a| / max(1, |x^a|)`` over monomials."""
    basis = MonomialBasis(m.support.simplex.dim, m.degree)
    at_nodes = vandermonde(m.support.points, basis)
    at_x = vandermonde(m.target, basis)[0]
    defect = np.abs(m.weights @ at_nodes - at_x)
    return float(np.max(defect / np.maximum(1.0, np.abs(at_x))))
