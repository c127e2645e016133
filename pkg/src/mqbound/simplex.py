"""
Simplices, barycentric coordinates and equally spaced lattice points.

A point of degree ``l`` has barycentric coordinates ``(k_1/l, ..., k_{n+1}/l)``
with nonnegative integers ``k_i`` summing to ``l``; there are ``C(n+l, n)`` of
them, which is exactly the dimension of the polynomials of degree ``<= l``
in ``n`` variables.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from mqbound.errors import DegenerateSimplexError, DomainError

__all__ = [
    "CONTAINMENT_TOL",
    "Simplex",
    "LatticePoints",
    "barycentric",
    "contains",
    "multi_indices",
    "equally_spaced_points",
    "diameter",
    "scale_to_diameter",
]

CONTAINMENT_TOL = 1e-10
_DEGENERACY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Simplex:
    """An ``n``-simplex given by ``n + 1`` affinely independent vertices.

    Parameters
    ----------
    vertices : array_like, shape (n + 1, n)
    """

    vertices: np.ndarray

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[0] != v.shape[1] + 1 or v.shape[1] < 1:
            raise DegenerateSimplexError(
                "an n-simplex needs n+1 vertices in R^n, got shape %s" % (v.shape,))
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        edges = v[1:] - v[0]
        scale = max(float(np.max(np.linalg.norm(edges, axis=1))), 0.0)
        if scale == 0.0:
            raise DegenerateSimplexError("all vertices coincide")
        # scale-free determinant test
        det = np.linalg.det(edges / scale)
        if abs(det) <= _DEGENERACY_TOL:
            raise DegenerateSimplexError(
                "vertices are affinely dependent (normalized det %.3g)" % det)

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    @property
    def centroid(self) -> np.ndarray:
        return self.vertices.mean(axis=0)

    @classmethod
    def unit(cls, n: int) -> "Simplex":
        """The right simplex with vertices ``0, e_1, ..., e_n``."""
        return cls(np.vstack([np.zeros(n), np.eye(n)]))

    @classmethod
    def right(cls, n: int, diameter: float) -> "Simplex":
        """The right simplex ``0, a e_1, ..., a e_n`` scaled to the given diameter."""
        return scale_to_diameter(cls.unit(n), diameter)

    @classmethod
    def regular(cls, n: int, edge: float = 1.0) -> "Simplex":
        """A regular simplex with the given edge length."""
        # standard basis of R^{n+1} lies in the hyperplane sum = 1; project
        # onto an orthonormal basis of that hyperplane
        e = np.eye(n + 1)
        centered = e - e.mean(axis=0)
        q, _ = np.linalg.qr(centered.T)
        pts = centered @ q[:, :n]
        pts *= edge / math.sqrt(2.0)
        return cls(pts - pts[0])

    def to_dict(self) -> dict:
        return {"vertices": self.vertices.tolist()}


@dataclass(frozen=True, eq=False)
class LatticePoints:
    """Equally spaced points of a given degree on a simplex.

    ``multi_indices[i]`` is the integer tuple ``k`` with ``points[i] = sum_j (k_j / l) v_j``.
    """

    degree: int
    points: np.ndarray
    multi_indices: np.ndarray
    simplex: Simplex = field(repr=False)

    def __len__(self):
        return self.points.shape[0]

    @property
    def barycentric(self) -> np.ndarray:
        return self.multi_indices / float(self.degree)


def _as_points(x, n):
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    x = np.atleast_2d(x)
    if x.shape[1] != n:
        raise DomainError("expected points in R^%d, got shape %s" % (n, x.shape))
    return x, single


def barycentric(s: Simplex, x) -> np.ndarray:
    """Barycentric coordinates of ``x`` (one point or an array of points).

    Coordinates sum to one and may be negative for points outside ``s``.
    """
    pts, single = _as_points(x, s.dim)
    n = s.dim
    a = np.vstack([s.vertices.T, np.ones(n + 1)])
    rhs = np.vstack([pts.T, np.ones(pts.shape[0])])
    try:
        coords = np.linalg.solve(a, rhs).T
    except np.linalg.LinAlgError as exc:
        raise DegenerateSimplexError(str(exc)) from exc
    return coords[0] if single else coords


def contains(s: Simplex, x, tol: float = CONTAINMENT_TOL):
    """True where every barycentric coordinate is ``>= -tol``."""
    coords = barycentric(s, x)
    return np.all(coords >= -tol, axis=-1)


def multi_indices(n: int, l: int) -> np.ndarray:
    """All ``(n+1)``-tuples of nonnegative integers summing to ``l``, lexicographically."""
    if l < 0:
        raise DomainError("degree must be nonnegative")
    # stars and bars: bar positions among l + n slots
    out = []
    for bars in itertools.combinations(range(l + n), n):
        prev = -1
        k = []
        for b in bars:
            k.append(b - prev - 1)
            prev = b
        k.append(l + n - 1 - prev)
        out.append(tuple(k))
    out.sort()
    return np.array(out, dtype=int).reshape(len(out), n + 1)


def equally_spaced_points(s: Simplex, l: int) -> LatticePoints:
    """Degree-``l`` lattice points of ``s`` in lexicographic multi-index order."""
    if l < 1:
        raise DomainError("lattice degree must be >= 1, got %r" % (l,))
    k = multi_indices(s.dim, l)
    pts = (k @ s.vertices) / float(l)
    pts.setflags(write=False)
    k.setflags(write=False)
    return LatticePoints(degree=l, points=pts, multi_indices=k, simplex=s)


def diameter(s: Simplex) -> float:
    v = s.vertices
    diff = v[:, None, :] - v[None, :, :]
    return float(np.sqrt(np.max(np.sum(diff * diff, axis=-1))))


def scale_to_diameter(s: Simplex, target: float) -> Simplex:
    """Dilate ``s`` about its first vertex so that its diameter equals ``target``."""
    if not target > 0:
        raise DomainError("target diameter must be positive, got %r" % (target,))
    d = diameter(s)
    if d == target:
        return s
    v0 = s.vertices[0]
    return Simplex(v0 + (s.vertices - v0) * (target / d))
