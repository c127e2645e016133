"""
h-spline interpolation.

An h-spline is ``s(x) = p(x) + sum_j c_j h(x - x_j)`` with ``p`` of degree
``< m`` and coefficients orthogonal to those polynomials on the centers.
Fitting solves the saddle-point system

    [ H   P ] [c]   [f]
    [ P^T 0 ] [a] = [0]

with a dense LU factorization.  The polynomial tail uses monomials in the
variable ``(x - centroid) / diameter`` of the center set.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from mqbound.errors import (DomainError, NotDeterminingError, SeminormError,
                            SingularSystemError)
from mqbound.kernel import KernelParams, evaluate_h
from mqbound.polynomials import MonomialBasis, is_determining, vandermonde

__all__ = [
    "InterpolationProblem",
    "HSpline",
    "PIVOT_TOL",
    "fit",
    "evaluate",
    "native_seminorm",
    "make_hspline",
    "project_to_moment_space",
    "kernel_matrix",
]

PIVOT_TOL = 1e-13
SEMINORM_TOL = 1e-9


def _sq_dist(a, b):
    diff = a[:, None, :] - b[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def kernel_matrix(kernel: KernelParams, centers) -> np.ndarray:
    """Symmetric matrix ``H_ij = h(x_i - x_j)``, one evaluation per unordered pair."""
    x = np.asarray(centers, dtype=float)
    n_pts = x.shape[0]
    iu, ju = np.triu_indices(n_pts)
    d = x[iu] - x[ju]
    vals = evaluate_h(kernel, np.einsum("ij,ij->i", d, d))
    h = np.empty((n_pts, n_pts))
    h[iu, ju] = vals
    h[ju, iu] = vals
    return h


def _point_set_frame(x):
    center = x.mean(axis=0)
    if x.shape[0] < 2:
        return center, 1.0
    scale = math.sqrt(float(np.max(_sq_dist(x, x))))
    return center, (scale if scale > 0 else 1.0)


@dataclass(frozen=True, eq=False)
class InterpolationProblem:
    kernel: KernelParams
    centers: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        x = np.atleast_2d(np.asarray(self.centers, dtype=float))
        f = np.asarray(self.values, dtype=float).reshape(-1)
        if x.shape[0] != f.shape[0]:
            raise DomainError("%d centers but %d values" % (x.shape[0], f.shape[0]))
        if x.shape[0] == 0:
            raise DomainError("at least one center is required")
        if x.shape[0] > 1:
            d2 = _sq_dist(x, x)
            diam = math.sqrt(float(np.max(d2)))
            np.fill_diagonal(d2, np.inf)
            if math.sqrt(float(np.min(d2))) <= 1e-12 * diam:
                raise DomainError("centers are not distinct")
        object.__setattr__(self, "centers", x)
        object.__setattr__(self, "values", f)

    @property
    def dim(self) -> int:
        return self.centers.shape[1]


@dataclass(frozen=True, eq=False)
class HSpline:
    """A fitted (or synthesized) h-spline.

    ``poly_coeffs`` are coefficients over ``MonomialBasis(n, m - 1)`` in the
    variable ``(x - poly_center) / poly_scale``; empty when ``m == 0``.
    """

    kernel: KernelParams
    centers: np.ndarray
    coefficients: np.ndarray
    poly_coeffs: np.ndarray
    poly_center: np.ndarray
    poly_scale: float
    seminorm: float
    condition_diag: float = float("nan")

    @property
    def dim(self) -> int:
        return self.centers.shape[1]

    @property
    def poly_basis(self) -> MonomialBasis:
        return MonomialBasis(self.dim, self.kernel.order_m - 1)

    def __call__(self, x):
        return evaluate(self, x)

    def moment_residual(self) -> float:
        """``max_q |sum_j c_j q(x_j)| / (||c|| ||q||)`` over tail monomials ``q``."""
        p = vandermonde(self.centers, self.poly_basis, self.poly_center, self.poly_scale)
        if p.shape[1] == 0:
            return 0.0
        cn = float(np.linalg.norm(self.coefficients))
        if cn == 0.0:
            return 0.0
        qn = np.linalg.norm(p, axis=0)
        return float(np.max(np.abs(self.coefficients @ p) / (cn * qn)))


def _seminorm(kernel, centers, coeffs, hmat=None, values=None):
    if not np.any(coeffs):
        return 0.0
    if hmat is None:
        hmat = kernel_matrix(kernel, centers)
    q = float(coeffs @ hmat @ coeffs)
    scale = float(np.abs(coeffs) @ np.abs(hmat) @ np.abs(coeffs))
    if values is not None:
        # for a fitted spline c^T H c = c^T f, whose rounding error scales with |c| |f|
        scale = max(scale, len(coeffs) * float(np.abs(coeffs) @ np.abs(values)))
    if q < -SEMINORM_TOL * scale:
        raise SeminormError(
            "kernel quadratic form is negative (%.3g, scale %.3g); "
            "coefficients violate the moment conditions" % (q, scale))
    return math.sqrt(max(q, 0.0))


def project_to_moment_space(kernel: KernelParams, centers, coeffs) -> np.ndarray:
    """Orthogonal projection of ``coeffs`` onto the vectors annihilating degree ``< m``."""
    x = np.atleast_2d(np.asarray(centers, dtype=float))
    c = np.asarray(coeffs, dtype=float).reshape(-1)
    m = kernel.order_m
    if m == 0:
        return c.copy()
    center, scale = _point_set_frame(x)
    p = vandermonde(x, MonomialBasis(x.shape[1], m - 1), center, scale)
    q, _ = np.linalg.qr(p)
    return c - q @ (q.T @ c)


def make_hspline(kernel: KernelParams, centers, coefficients, poly_coeffs=None,
                 poly_center=None, poly_scale=None) -> HSpline:
    """Assemble an h-spline from given coefficients (used to build known targets)."""
    x = np.atleast_2d(np.asarray(centers, dtype=float))
    c = np.asarray(coefficients, dtype=float).reshape(-1)
    if c.shape[0] != x.shape[0]:
        raise DomainError("%d centers but %d coefficients" % (x.shape[0], c.shape[0]))
    frame_center, frame_scale = _point_set_frame(x)
    center = frame_center if poly_center is None else np.asarray(poly_center, dtype=float)
    scale = frame_scale if poly_scale is None else float(poly_scale)
    nb = len(MonomialBasis(x.shape[1], kernel.order_m - 1))
    a = np.zeros(nb) if poly_coeffs is None else np.asarray(poly_coeffs, dtype=float).reshape(-1)
    if a.shape[0] != nb:
        raise DomainError("expected %d polynomial coefficients, got %d" % (nb, a.shape[0]))
    return HSpline(kernel=kernel, centers=x, coefficients=c, poly_coeffs=a,
                   poly_center=center, poly_scale=scale,
                   seminorm=_seminorm(kernel, x, c))


def fit(prob: InterpolationProblem) -> HSpline:
    """Solve the interpolation conditions plus moment conditions for an h-spline.

    Raises
    ------
    NotDeterminingError
        If the centers do not determine polynomials of degree ``m - 1``.
    SingularSystemError
        If the smallest LU pivot is below ``PIVOT_TOL`` times the largest.
    """
    kernel = prob.kernel
    x, f = prob.centers, prob.values
    n_pts, n = x.shape
    m = kernel.order_m
    if m >= 1 and not is_determining(x, n, m - 1):
        raise NotDeterminingError(
            "centers do not form a determining set for degree %d polynomials" % (m - 1))
    center, scale = _point_set_frame(x)
    basis = MonomialBasis(n, m - 1)
    p = vandermonde(x, basis, center, scale)
    nb = p.shape[1]

    hmat = kernel_matrix(kernel, x)
    a = np.zeros((n_pts + nb, n_pts + nb))
    a[:n_pts, :n_pts] = hmat
    a[:n_pts, n_pts:] = p
    a[n_pts:, :n_pts] = p.T
    rhs = np.concatenate([f, np.zeros(nb)])

    with warnings.catch_warnings():
        # singularity is reported through the pivot test below
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(a, check_finite=True)
    pivots = np.abs(np.diag(lu))
    pmax, pmin = float(np.max(pivots)), float(np.min(pivots))
    cond = math.inf if pmin == 0.0 else pmax / pmin
    if pmin < PIVOT_TOL * pmax:
        raise SingularSystemError(
            "interpolation system is numerically singular "
            "(pivot ratio %.3g)" % cond, condition_diag=cond)
    sol = scipy.linalg.lu_solve((lu, piv), rhs)
    coeffs = sol[:n_pts]
    return HSpline(kernel=kernel, centers=x, coefficients=coeffs,
                   poly_coeffs=sol[n_pts:], poly_center=center, poly_scale=scale,
                   seminorm=_seminorm(kernel, x, coeffs, hmat, f), condition_diag=cond)


def evaluate(s: HSpline, x):
    """Value of ``s`` at one point (returns float) or at each row of an array."""
    pts = np.asarray(x, dtype=float)
    single = pts.ndim == 1
    pts = np.atleast_2d(pts)
    if pts.shape[1] != s.dim:
        raise DomainError("expected points in R^%d, got shape %s" % (s.dim, pts.shape))
    out = np.empty(pts.shape[0])
    # chunk to keep the (M, N) kernel block small
    for start in range(0, pts.shape[0], 2048):
        chunk = pts[start:start + 2048]
        vals = evaluate_h(s.kernel, _sq_dist(chunk, s.centers)) @ s.coefficients
        if s.poly_coeffs.size:
            vals = vals + vandermonde(chunk, s.poly_basis, s.poly_center,
                                      s.poly_scale) @ s.poly_coeffs
        out[start:start + 2048] = vals
    return float(out[0]) if single else out


def native_seminorm(s: HSpline) -> float:
    """``sqrt(c^T H c)``, the native-space semi-norm of an h-spline."""
    return s.seminorm
