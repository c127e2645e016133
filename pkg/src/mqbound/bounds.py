"""
Constants and certified values of the exponential-type error bound.

Everything is kept in natural-log space.  The improved bound for an
h-spline ``s`` interpolating ``f`` on equally spaced centers reads

    |f(x) - s(x)| <= 2^((n+beta-7)/4) pi^((n-1)/4) sqrt(n alpha_n) c^(beta/2) c^(-l)
                     sqrt(Delta0) sqrt(3C) sqrt(delta) lambda'^(1/delta) ||f||_h

with ``C = max(2/(3 b0), 8 rho)``, ``lambda' = (2/3)^(1/(3C))`` and ``l`` the
smallest integer with ``1 <= 3 l delta C <= 2``.  ``rho`` and ``Delta0`` come
from a case analysis on ``n - beta``.

The older constants use ``gamma_1 = 2, gamma_n = 2n(1 + gamma_{n-1})`` and
``C_old = max(2 rho' sqrt(n) e^(2 n gamma_n), 2/(3 b0))``; ``lambda_old`` is
never materialized because ``1 - lambda_old`` underflows almost immediately.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import NamedTuple

from mqbound.errors import DomainError
from mqbound.kernel import cpd_order
from mqbound.special import ln_binomial, ln_factorial, unit_ball_volume_ln

__all__ = [
    "CASE_IDS",
    "CaseConstants",
    "BoundConstants",
    "OldBoundConstants",
    "CompareRow",
    "LemmaReport",
    "ChainReport",
    "rho_delta0",
    "new_constants",
    "choose_degree",
    "ln_cl_middle",
    "ln_cl_upper",
    "ln_new_bound",
    "gamma_sequence",
    "old_constants",
    "compare_bounds",
    "verify_moment_lemma",
    "verify_factorial_lemma",
    "proof_chain",
]

CASE_IDS = ("A_i", "A_ii", "B_i", "B_ii", "C")

LN2 = math.log(2.0)
LNPI = math.log(math.pi)
LN_TWO_THIRDS = math.log(2.0 / 3.0)


class CaseConstants(NamedTuple):
    rho: float
    ln_delta0: float
    s: int
    case_id: str


def _ln_range_product(lo, hi):
    """ln(lo * (lo+1) * ... * hi); zero for an empty range."""
    if hi < lo:
        return 0.0
    return math.log(math.prod(range(lo, hi + 1)))


def rho_delta0(n: int, beta: float) -> CaseConstants:
    """``rho``, ``ln Delta0``, shift ``s`` and case label from the sign of ``n - beta``.

    ====  ================  =========================================================
    case  condition         constants
    ====  ================  =========================================================
    A_i   n-b > 3, b < 0    s = ceil((n-b-3)/2), rho = (3+s)/3,
                            Delta0 = (2+s)(1+s)...3 / rho^2
    A_ii  n-b > 3, b > 0    rho = 1 + s/(2m+3),
                            Delta0 = (2m+2+s)...(2m+3) / rho^(2m+2)
    B_i   n-b <= 1, b < 0   s = -ceil((n-b-3)/2), rho = 1, Delta0 = 1/2
    B_ii  n-b <= 1, b > 0   rho = 1, Delta0 = 1 / ((2m+2)(2m+1)...(2m-s+3))
    C     1 < n-b <= 3      rho = 1, Delta0 = 1
    ====  ================  =========================================================
    """
    if n < 1:
        raise DomainError("dimension must be positive")
    m = cpd_order(beta)
    gap = n - beta
    if gap > 3:
        s = int(math.ceil((gap - 3) / 2.0))
        if beta < 0:
            rho = (3.0 + s) / 3.0
            ln_d0 = _ln_range_product(3, 2 + s) - 2.0 * math.log(rho)
            return CaseConstants(rho, ln_d0, s, "A_i")
        rho = 1.0 + s / (2.0 * m + 3.0)
        ln_d0 = _ln_range_product(2 * m + 3, 2 * m + 2 + s) - (2 * m + 2) * math.log(rho)
        return CaseConstants(rho, ln_d0, s, "A_ii")
    if gap <= 1:
        s = -int(math.ceil((gap - 3) / 2.0))
        if beta < 0:
            return CaseConstants(1.0, -LN2, s, "B_i")
        return CaseConstants(1.0, -_ln_range_product(2 * m - s + 3, 2 * m + 2), s, "B_ii")
    return CaseConstants(1.0, 0.0, 0, "C")


@dataclass(frozen=True)
class BoundConstants:
    n: int
    beta: float
    c: float
    b0: float
    s: int
    case_id: str
    rho: float
    ln_delta0_const: float
    C_big: float
    delta0: float
    ln_lambda_prime: float

    @property
    def m(self) -> int:
        return cpd_order(self.beta)

    @property
    def delta0_const(self) -> float:
        """The constant Delta0 (not to be confused with the threshold ``delta0``)."""
        return math.exp(self.ln_delta0_const)

    @property
    def lambda_prime(self) -> float:
        return math.exp(self.ln_lambda_prime)


def new_constants(n: int, beta: float, c: float, b0: float) -> BoundConstants:
    if not b0 > 0:
        raise DomainError("b0 must be positive, got %r" % (b0,))
    if not c > 0:
        raise DomainError("c must be positive, got %r" % (c,))
    rc = rho_delta0(n, beta)
    C_big = max(2.0 / (3.0 * b0), 8.0 * rc.rho)
    return BoundConstants(
        n=n, beta=beta, c=c, b0=b0, s=rc.s, case_id=rc.case_id, rho=rc.rho,
        ln_delta0_const=rc.ln_delta0, C_big=C_big, delta0=1.0 / (3.0 * C_big),
        ln_lambda_prime=LN_TWO_THIRDS / (3.0 * C_big))


def choose_degree(delta, C_big) -> int:
    """Smallest positive integer ``l`` with ``1 <= 3 l delta C <= 2``.

    Rational inputs (``int``/``Fraction``) are handled exactly; floats use a
    relative slack of 1e-12 so that ``delta = 1/(3 l C)`` maps back to ``l``.
    """
    if isinstance(delta, Rational) and isinstance(C_big, Rational):
        x = 3 * Fraction(delta) * Fraction(C_big)
        if not x > 0:
            raise DomainError("delta and C must be positive")
        if x > 1:
            raise DomainError("delta exceeds delta0 = 1/(3C)")
        return math.ceil(1 / x)
    x = 3.0 * float(delta) * float(C_big)
    if not x > 0:
        raise DomainError("delta and C must be positive")
    if x > 1.0 + 1e-12:
        raise DomainError("delta = %r exceeds delta0 = 1/(3C) = %r"
                          % (delta, 1.0 / (3.0 * float(C_big))))
    return max(1, math.ceil((1.0 / x) * (1.0 - 1e-12)))


def _ln_kernel_factor(n, beta, c, l, ln_delta0):
    # 2^((n+beta+1)/4) pi^((n+1)/4) sqrt(n alpha_n) c^(beta/2) c^(-l) sqrt(Delta0)
    return ((n + beta + 1) / 4.0 * LN2 + (n + 1) / 4.0 * LNPI
            + 0.5 * (math.log(n) + unit_ball_volume_ln(n))
            + (beta / 2.0 - l) * math.log(c) + 0.5 * ln_delta0)


def _require_l_above_m(l, beta):
    m = cpd_order(beta)
    if l < m + 1:
        raise DomainError("degree l = %d must exceed the kernel order m = %d "
                          "(delta too large for this kernel order)" % (l, m))


def ln_cl_middle(n, beta, c, l, rho, ln_Delta0) -> float:
    """ln of ``(1/l!) K c^((beta-2l)/2) sqrt(Delta0) rho^l sqrt((2l)!)``, before the factorial lemma."""
    _require_l_above_m(l, beta)
    return (_ln_kernel_factor(n, beta, c, l, ln_Delta0) + l * math.log(rho)
            + 0.5 * ln_factorial(2 * l) - ln_factorial(l))


def ln_cl_upper(n, beta, c, l, rho, ln_Delta0) -> float:
    """ln of the upper bound ``K c^(beta/2) c^(-l) sqrt(Delta0) (2 rho)^l`` on ``c_l``."""
    _require_l_above_m(l, beta)
    return _ln_kernel_factor(n, beta, c, l, ln_Delta0) + l * math.log(2.0 * rho)


def ln_new_bound(consts: BoundConstants, delta, seminorm: float) -> float:
    """ln of the improved bound at spacing ``delta`` for a target of semi-norm ``seminorm``.

    Returns ``-inf`` for a zero semi-norm.
    """
    if seminorm < 0:
        raise DomainError("semi-norm must be nonnegative")
    l = choose_degree(delta, consts.C_big)
    _require_l_above_m(l, consts.beta)
    if seminorm == 0:
        return -math.inf
    d = float(delta)
    return (_ln_kernel_factor(consts.n, consts.beta, consts.c, l, consts.ln_delta0_const)
            - 2.0 * LN2 - 0.5 * LNPI  # the 1/(4 sqrt(pi)) factor
            + 0.5 * math.log(3.0 * consts.C_big) + 0.5 * math.log(d)
            + consts.ln_lambda_prime / d + math.log(seminorm))


@dataclass(frozen=True)
class ChainReport:
    """Log values of each line of the inequality chain behind the improved bound.

    ``steps`` lists ``(label, ln value)``; every step must not exceed the next
    one except the last pair, where ``1/sqrt(l-1)`` is traded for
    ``sqrt(3 C delta)`` (an asymptotic replacement, not an inequality).
    ``end_to_end`` compares the first line with the final bound directly.
    """

    l: int
    delta: float
    steps: list
    final: float

    def monotone(self, tol: float = 1e-9) -> bool:
        vals = [v for _, v in self.steps]
        return all(a <= b + tol for a, b in zip(vals, vals[1:]))

    def end_to_end(self, tol: float = 1e-9) -> bool:
        return self.steps[0][1] <= self.final + tol


def proof_chain(consts: BoundConstants, delta) -> ChainReport:
    """Evaluate each displayed line from ``c_l * int |y-x|^l d|sigma|`` to the final bound.

    Uses semi-norm 1.  The total variation bound for the degree ``l-1``
    measure is ``C(2l-3, l-1)`` (1 when ``l == 1``).
    """
    C = consts.C_big
    d = float(delta)
    l = choose_degree(delta, C)
    n, beta, c = consts.n, consts.beta, consts.c
    ln_cl = ln_cl_upper(n, beta, c, l, consts.rho, consts.ln_delta0_const)
    ln_tv = ln_binomial(2 * l - 3, l - 1) if l >= 2 else 0.0
    base = _ln_kernel_factor(n, beta, c, l, consts.ln_delta0_const)
    ln_moment = l * math.log(l * d)

    steps = [("cl_times_moment", ln_cl + ln_moment + ln_tv)]
    if l >= 2:
        ln_stirling = -2.0 * LN2 - 0.5 * LNPI - 0.5 * math.log(l - 1)
        # (2 rho)^l (l delta)^l 4^l / (4 sqrt(pi (l-1)))
        steps.append(("stirling", ln_cl + ln_moment + l * 2 * LN2 + ln_stirling))
        steps.append(("C_for_8rho", base + l * math.log(C * l * d) + ln_stirling))
        steps.append(("two_thirds", base + l * LN_TWO_THIRDS + ln_stirling))
        steps.append(("lambda_prime", base + consts.ln_lambda_prime / d + ln_stirling))
    final = ln_new_bound(consts, delta, 1.0)
    return ChainReport(l=l, delta=d, steps=steps, final=final)


def gamma_sequence(n: int) -> list:
    """Exact integers ``gamma_1 .. gamma_n``."""
    if n < 1:
        raise DomainError("n must be positive")
    seq = [2]
    for k in range(2, n + 1):
        seq.append(2 * k * (1 + seq[-1]))
    return seq


@dataclass(frozen=True)
class OldBoundConstants:
    n: int
    gamma_n: int
    rho_prime: float
    ln_C_old: float
    ln_abs_ln_lambda_old: float
    ln_lambda_old: float = field(init=False)

    def __post_init__(self):
        # may underflow to -0.0; ln_abs_ln_lambda_old keeps the magnitude
        object.__setattr__(self, "ln_lambda_old", -math.exp(self.ln_abs_ln_lambda_old))

    @property
    def one_minus_lambda(self) -> float:
        """``1 - lambda_old`` when representable (0.0 after underflow)."""
        return -math.expm1(self.ln_lambda_old)


def old_constants(n: int, beta: float, c: float, b0: float, rho: float) -> OldBoundConstants:
    if not (c > 0 and b0 > 0 and rho > 0):
        raise DomainError("c, b0 and rho must be positive")
    cpd_order(beta)
    g = gamma_sequence(n)[-1]
    rho_prime = rho / c
    ln_exp_branch = math.log(2.0 * rho_prime) + 0.5 * math.log(n) + float(2 * n * g)
    ln_C_old = max(ln_exp_branch, math.log(2.0 / (3.0 * b0)))
    ln_abs = math.log(-LN_TWO_THIRDS) - math.log(3.0) - math.log(g) - ln_C_old
    return OldBoundConstants(n=n, gamma_n=g, rho_prime=rho_prime, ln_C_old=ln_C_old,
                             ln_abs_ln_lambda_old=ln_abs)


class CompareRow(NamedTuple):
    delta: float
    new_decay: float
    old_decay: float
    ln_ratio: float

    @property
    def ratio(self) -> float:
        """``old_decay / new_decay``; tiny, may underflow."""
        return math.exp(self.ln_ratio)


def compare_bounds(n, beta, c, b0, delta_list) -> list:
    """Per-``delta`` log decay factors ``ln(lambda')/delta`` and ``ln(lambda_old)/delta``."""
    new = new_constants(n, beta, c, b0)
    old = old_constants(n, beta, c, b0, new.rho)
    ln_abs_new = math.log(-new.ln_lambda_prime)
    rows = []
    for delta in delta_list:
        d = float(delta)
        if not 0 < d <= new.delta0 * (1 + 1e-12):
            raise DomainError("delta = %r outside (0, delta0 = %r]" % (delta, new.delta0))
        rows.append(CompareRow(delta=d, new_decay=new.ln_lambda_prime / d,
                               old_decay=old.ln_lambda_old / d,
                               ln_ratio=old.ln_abs_ln_lambda_old - ln_abs_new))
    return rows


@dataclass
class LemmaReport:
    """Slack of a numerically checked inequality; ``rows`` hold ``(parameter, slack)``."""

    name: str
    rows: list
    tol: float
    detail: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(s >= -self.tol for _, s in self.rows)

    @property
    def worst(self):
        return min(self.rows, key=lambda r: r[1]) if self.rows else None

    def violations(self) -> list:
        return [r for r in self.rows if r[1] < -self.tol]


def verify_moment_lemma(n: int, beta: float, l_max: int) -> LemmaReport:
    """Check ``Gamma(l'+1) <= Delta0 rho^l l!`` with ``l' = l + (n-beta-3)/2``.

    ``Gamma(l'+1)`` is exactly ``int_0^inf r^l' e^-r dr``.  Covers
    ``2m+2 <= l <= l_max``.
    """
    m = cpd_order(beta)
    l_min = 2 * m + 2
    if l_max < l_min:
        raise DomainError("l_max must be >= 2m+2 = %d" % l_min)
    rc = rho_delta0(n, beta)
    shift = (n - beta - 3) / 2.0
    rows = []
    for l in range(l_min, l_max + 1):
        slack = (rc.ln_delta0 + l * math.log(rc.rho) + ln_factorial(l)
                 - math.lgamma(l + shift + 1.0))
        rows.append((l, slack))
    return LemmaReport("moment", rows, tol=1e-9,
                       detail={"n": n, "beta": beta, "case": rc.case_id, "rho": rc.rho,
                               "ln_Delta0": rc.ln_delta0})


def verify_factorial_lemma(l_max: int) -> LemmaReport:
    """Check ``sqrt((2l)!) / l! <= 2^l`` for ``l = 1 .. l_max`` in log space."""
    if l_max < 1:
        raise DomainError("l_max must be >= 1")
    rows = [(l, l * LN2 - (0.5 * ln_factorial(2 * l) - ln_factorial(l)))
            for l in range(1, l_max + 1)]
    return LemmaReport("factorial", rows, tol=1e-12)
