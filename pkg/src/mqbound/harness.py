"""
Convergence studies on a fixed simplex.

For each degree ``l`` the h-spline is fitted on the degree-``l`` lattice of
the simplex, its sup-error is measured on a dense lattice and, when the
target is itself an h-spline, the certified bound is evaluated at
``delta = 1/(3 l C)`` so that the degree selection returns exactly ``l``.
"""
from __future__ import annotations

import csv
import io
import json
import logging
import math
from dataclasses import asdict, dataclass, field, fields
from typing import Callable, Optional

import numpy as np

from mqbound.bounds import new_constants, ln_new_bound
from mqbound.errors import DomainError, MqboundError
from mqbound.interpolation import (HSpline, InterpolationProblem, evaluate, fit,
                                   make_hspline, project_to_moment_space)
from mqbound.kernel import KernelParams
from mqbound.polynomials import MonomialBasis, vandermonde
from mqbound.simplex import Simplex, diameter, equally_spaced_points

__all__ = [
    "COLUMNS",
    "ExperimentConfig",
    "ExperimentRow",
    "Target",
    "ANALYTIC_TARGETS",
    "build_target",
    "sup_error",
    "run_convergence",
    "certification_violations",
    "emit",
    "parse_rows",
]

log = logging.getLogger(__name__)

COLUMNS = ("l", "delta", "num_centers", "max_error", "seminorm", "ln_bound", "condition_diag")

DEFAULT_EVAL_DEGREE = {1: 64, 2: 40, 3: 16}

ANALYTIC_TARGETS = {
    "exp_sum": lambda x: np.exp(np.sum(x, axis=1)),
    "sin_sum": lambda x: np.sin(3.0 * np.sum(x, axis=1)),
    "runge": lambda x: 1.0 / (1.0 + 25.0 * np.sum(x * x, axis=1)),
    "abs_shift": lambda x: np.abs(np.sum(x, axis=1) - 0.4),
}


@dataclass
class ExperimentConfig:
    n: int
    beta: float
    c: float = 1.0
    b0: float = 1.0
    simplex: Optional[list] = None
    target: dict = field(default_factory=lambda: {"kind": "kernel_translates"})
    l_min: int = 1
    l_max: int = 6
    eval_degree: Optional[int] = None
    output_format: str = "csv"

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("n must be positive")
        if not 1 <= self.l_min <= self.l_max:
            raise DomainError("degree range %d..%d is empty" % (self.l_min, self.l_max))
        if self.eval_degree is None:
            self.eval_degree = max(DEFAULT_EVAL_DEGREE.get(self.n, 8), 2 * self.l_max)
        if self.eval_degree < 2 * self.l_max:
            raise DomainError("eval_degree must be >= 2 * l_max = %d" % (2 * self.l_max))
        if self.output_format not in ("csv", "json"):
            raise DomainError("output_format must be 'csv' or 'json'")
        if "kind" not in self.target:
            raise DomainError("target needs a 'kind'")

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        names = {f.name for f in fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise DomainError("unknown config keys: %s" % ", ".join(sorted(unknown)))
        return cls(**d)

    def kernel(self) -> KernelParams:
        return KernelParams(self.beta, self.c)

    def domain(self) -> Simplex:
        if self.simplex is None:
            return Simplex.right(self.n, self.b0)
        s = Simplex(self.simplex)
        if s.dim != self.n:
            raise DomainError("simplex dimension %d does not match n = %d" % (s.dim, self.n))
        return s


@dataclass
class ExperimentRow:
    l: int
    delta: float
    num_centers: int
    max_error: Optional[float]
    seminorm: Optional[float]
    ln_bound: Optional[float]
    condition_diag: Optional[float]
    error: Optional[str] = None


@dataclass
class Target:
    func: Callable
    seminorm: Optional[float]
    hspline: Optional[HSpline] = None


def _kernel_translates(spec, kernel, s):
    n = s.dim
    if "centers" in spec:
        spl = make_hspline(kernel, spec["centers"], spec["coefficients"],
                           spec.get("poly_coeffs"))
        if spl.moment_residual() > 1e-9:
            raise DomainError("target coefficients violate the moment conditions")
        return spl
    degree = int(spec.get("degree", 3))
    rng = np.random.default_rng(spec.get("seed", 0))
    base = equally_spaced_points(s, degree).points
    spacing = diameter(s) / degree
    centers = base + spec.get("perturbation", 0.3) * spacing * rng.uniform(-1, 1, base.shape)
    coeffs = project_to_moment_space(kernel, centers, rng.standard_normal(len(centers)))
    poly = rng.standard_normal(len(MonomialBasis(n, kernel.order_m - 1)))
    return make_hspline(kernel, centers, coeffs, poly)


def build_target(spec: dict, kernel: KernelParams, s: Simplex) -> Target:
    """Materialize a target description.

    Kinds: ``kernel_translates`` (an h-spline, so its semi-norm is known),
    ``polynomial`` (semi-norm 0 when of degree < m, unknown otherwise) and
    ``analytic`` (one of :data:`ANALYTIC_TARGETS`, semi-norm unknown).
    """
    kind = spec.get("kind")
    if kind == "kernel_translates":
        spl = _kernel_translates(spec, kernel, s)
        return Target(func=spl, seminorm=spl.seminorm, hspline=spl)
    if kind == "polynomial":
        exps = np.asarray(spec.get("exponents", [[0] * s.dim]), dtype=int).reshape(-1, s.dim)
        coeffs = np.asarray(spec.get("coefficients", [1.0]), dtype=float).reshape(-1)
        if exps.shape[0] != coeffs.shape[0]:
            raise DomainError("polynomial exponents and coefficients differ in length")
        if np.any(exps < 0):
            raise DomainError("negative polynomial exponent")

        def poly(x):
            x = np.atleast_2d(x)
            return np.prod(x[:, None, :] ** exps[None, :, :], axis=-1) @ coeffs

        degree = int(exps.sum(axis=1).max()) if np.any(coeffs) else -1
        return Target(func=poly, seminorm=0.0 if degree < kernel.order_m else None)
    if kind == "analytic":
        name = spec.get("name")
        if name not in ANALYTIC_TARGETS:
            raise DomainError("unknown analytic target %r (choose from %s)"
                              % (name, ", ".join(sorted(ANALYTIC_TARGETS))))
        f = ANALYTIC_TARGETS[name]
        return Target(func=lambda x: f(np.atleast_2d(x)), seminorm=None)
    raise DomainError("unknown target kind %r" % (kind,))


def sup_error(s: HSpline, target: Callable, s_domain: Simplex, lattice_degree: int) -> float:
    """``max |s(x) - f(x)|`` over the degree ``lattice_degree`` lattice of the domain."""
    if lattice_degree < 1:
        raise DomainError("lattice_degree must be >= 1")
    pts = equally_spaced_points(s_domain, lattice_degree).points
    diff = evaluate(s, pts) - np.asarray(target(pts), dtype=float)
    return float(np.max(np.abs(diff)))


def _row(cfg, kernel, consts, dom, target, l):
    delta = 1.0 / (3.0 * l * consts.C_big)
    nodes = equally_spaced_points(dom, l)
    row = ExperimentRow(l=l, delta=delta, num_centers=len(nodes), max_error=None,
                        seminorm=target.seminorm, ln_bound=None, condition_diag=None)
    try:
        spl = fit(InterpolationProblem(kernel, nodes.points, target.func(nodes.points)))
    except (MqboundError, np.linalg.LinAlgError) as exc:
        log.warning("fit failed at l=%d: %s", l, exc)
        row.error = str(exc)
        row.condition_diag = getattr(exc, "condition_diag", None)
        return row
    row.condition_diag = spl.condition_diag
    row.max_error = sup_error(spl, target.func, dom, cfg.eval_degree)
    if target.hspline is not None and l > kernel.order_m:
        row.ln_bound = ln_new_bound(consts, delta, target.seminorm)
    return row


def run_convergence(cfg: ExperimentConfig) -> list:
    """One :class:`ExperimentRow` per degree in ``cfg.l_min .. cfg.l_max``.

    ``ln_bound`` is left empty for non-h-spline targets and for degrees
    ``l <= m`` where the bound does not apply.  A failed fit yields a row
    with ``error`` set; the run continues.
    """
    kernel = cfg.kernel()
    consts = new_constants(cfg.n, cfg.beta, cfg.c, cfg.b0)
    dom = cfg.domain()
    target = build_target(cfg.target, kernel, dom)
    return [_row(cfg, kernel, consts, dom, target, l)
            for l in range(cfg.l_min, cfg.l_max + 1)]


def certification_violations(rows, tol: float = 1e-9) -> list:
    """Rows where ``ln(max_error) > ln_bound + tol``."""
    bad = []
    for r in rows:
        if r.max_error is None or r.ln_bound is None:
            continue
        if not math.isfinite(r.ln_bound):
            continue
        if r.max_error > 0 and math.log(r.max_error) > r.ln_bound + tol:
            bad.append(r)
    return bad


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    v = float(v)
    if not math.isfinite(v):
        return ""
    return format(v, ".17g")


def emit(rows, format: str = "csv") -> bytes:
    """Serialize rows; unavailable values become empty fields (CSV) or null (JSON)."""
    if format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        for r in rows:
            w.writerow([_fmt(getattr(r, c)) for c in COLUMNS])
        return buf.getvalue().encode("utf-8")
    if format == "json":
        objs = []
        for r in rows:
            parts = ['"%s": %s' % (c, _fmt(getattr(r, c)) or "null") for c in COLUMNS]
            if r.error is not None:
                parts.append('"error": %s' % json.dumps(r.error))
            objs.append("{" + ", ".join(parts) + "}")
        return ("[" + ",\n ".join(objs) + "]\n").encode("utf-8")
    raise DomainError("unknown format %r" % (format,))


def _num(v, kind):
    if v is None or v == "":
        return None
    return int(v) if kind is int else float(v)


def parse_rows(data: bytes, format: str = "csv") -> list:
    """Inverse of :func:`emit`."""
    kinds = {"l": int, "num_centers": int}
    if format == "csv":
        reader = csv.DictReader(io.StringIO(data.decode("utf-8")))
        recs = list(reader)
    else:
        recs = json.loads(data.decode("utf-8"))
    out = []
    for rec in recs:
        vals = {c: _num(rec.get(c), kinds.get(c, float)) for c in COLUMNS}
        out.append(ExperimentRow(**vals, error=rec.get("error")))
    return out


def rows_as_dicts(rows) -> list:
    return [asdict(r) for r in rows]
