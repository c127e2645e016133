"""
Log-space special functions.

Quantities such as ``exp(2 n gamma_n)`` or ``(2l)!`` leave floating-point
range long before the interesting parameter values are reached, so every
routine here works with natural logarithms.  Signed quantities are carried
by :class:`SignedLog`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from mqbound.errors import DomainError, PoleError

__all__ = [
    "SignedLog",
    "gamma_signed",
    "ln_factorial",
    "ln_binomial",
    "unit_ball_volume_ln",
]

# math.comb is exact; above this size lgamma is cheaper and accurate enough
_EXACT_BINOMIAL_LIMIT = 10_000


@dataclass(frozen=True)
class SignedLog:
    """A real number stored as ``sign * exp(ln_abs)``.

    ``ln_abs`` is ignored when ``sign == 0``.
    """

    sign: int
    ln_abs: float = 0.0

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError("sign must be -1, 0 or +1, got %r" % (self.sign,))

    @classmethod
    def from_float(cls, x: float) -> "SignedLog":
        if x == 0:
            return cls(0, -math.inf)
        return cls(1 if x > 0 else -1, math.log(abs(x)))

    @classmethod
    def zero(cls) -> "SignedLog":
        return cls(0, -math.inf)

    def __mul__(self, other):
        if not isinstance(other, SignedLog):
            other = SignedLog.from_float(other)
        if self.sign == 0 or other.sign == 0:
            return SignedLog.zero()
        return SignedLog(self.sign * other.sign, self.ln_abs + other.ln_abs)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, SignedLog):
            other = SignedLog.from_float(other)
        if other.sign == 0:
            raise ZeroDivisionError("division by a zero SignedLog")
        if self.sign == 0:
            return SignedLog.zero()
        return SignedLog(self.sign * other.sign, self.ln_abs - other.ln_abs)

    def __pow__(self, p):
        if self.sign == 0:
            if p > 0:
                return SignedLog.zero()
            raise ZeroDivisionError("zero raised to a nonpositive power")
        if self.sign < 0:
            if float(p) != int(p):
                raise DomainError("negative base with non-integer exponent %r" % (p,))
            sign = -1 if int(p) % 2 else 1
        else:
            sign = 1
        return SignedLog(sign, self.ln_abs * p)

    def __neg__(self):
        return SignedLog(-self.sign, self.ln_abs)

    def __float__(self):
        return self.value()

    def value(self) -> float:
        """Materialize as a float; raises ``OverflowError`` instead of saturating."""
        if self.sign == 0:
            return 0.0
        return self.sign * math.exp(self.ln_abs)


def gamma_signed(x: float) -> SignedLog:
    """Gamma function as a :class:`SignedLog`, valid for negative non-integers.

    ``math.lgamma`` already returns ``ln|Gamma(x)|`` on the negative axis; the
    sign follows from the reflection formula, which makes Gamma negative on
    ``(-1, 0)``, positive on ``(-2, -1)`` and so on.
    """
    x = float(x)
    if x <= 0 and x == math.floor(x):
        raise PoleError("Gamma has a pole at %r" % (x,))
    if x > 0:
        return SignedLog(1, math.lgamma(x))
    sign = -1 if int(math.floor(x)) % 2 else 1
    return SignedLog(sign, math.lgamma(x))


def ln_factorial(l: int) -> float:
    """ln(l!) for a nonnegative integer ``l``."""
    if l < 0:
        raise DomainError("factorial of a negative integer %r" % (l,))
    return math.lgamma(l + 1)


def ln_binomial(a: int, b: int) -> float:
    """ln C(a, b) for ``0 <= b <= a``."""
    if a < 0 or b < 0 or b > a:
        raise DomainError("binomial C(%r, %r) outside 0 <= b <= a" % (a, b))
    if a <= _EXACT_BINOMIAL_LIMIT:
        return math.log(math.comb(a, b))
    return ln_factorial(a) - ln_factorial(b) - ln_factorial(a - b)


def unit_ball_volume_ln(n: int) -> float:
    """ln of the volume of the unit ball in R^n, ``pi^(n/2) / Gamma(n/2 + 1)``."""
    if n < 1:
        raise DomainError("dimension must be positive, got %r" % (n,))
    return 0.5 * n * math.log(math.pi) - math.lgamma(0.5 * n + 1.0)
