"""
The multiquadric / inverse multiquadric kernel

    h(x) = Gamma(-beta/2) (c^2 + |x|^2)^(beta/2),   beta not in {0, 2, 4, ...}, c > 0.

The gamma prefactor is kept: it is negative for ``0 < beta < 2`` and this
sign is what makes ``h`` conditionally positive definite of order
``m = ceil(beta/2)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from mqbound.errors import DomainError, PoleError
from mqbound.special import SignedLog, gamma_signed

__all__ = ["KernelParams", "cpd_order", "evaluate_h"]

# largest ln|h| that still fits in a float64
_LN_MAX = math.log(np.finfo(float).max)


def _is_pole(beta):
    return beta >= 0 and float(beta) == math.floor(beta) and int(beta) % 2 == 0


def cpd_order(beta: float) -> int:
    """Order of conditional positive definiteness: 0 for beta < 0, ceil(beta/2) otherwise."""
    if _is_pole(beta):
        raise PoleError("beta must not be a nonnegative even integer, got %r" % (beta,))
    if beta < 0:
        return 0
    return int(math.ceil(beta / 2.0))


@dataclass(frozen=True)
class KernelParams:
    beta: float
    c: float

    def __post_init__(self):
        if _is_pole(self.beta):
            raise PoleError("beta must not be a nonnegative even integer, got %r" % (self.beta,))
        if not self.c > 0:
            raise DomainError("shape parameter c must be positive, got %r" % (self.c,))

    @property
    def order_m(self) -> int:
        return cpd_order(self.beta)

    @property
    def prefactor(self) -> SignedLog:
        return gamma_signed(-self.beta / 2.0)

    def __call__(self, r2):
        return evaluate_h(self, r2)


def evaluate_h(p: KernelParams, r2):
    """Evaluate ``h`` at squared distance(s) ``r2``.

    Raises ``OverflowError`` if the magnitude does not fit in a float.
    """
    r2 = np.asarray(r2, dtype=float)
    if np.any(r2 < 0):
        raise DomainError("squared distance must be nonnegative")
    g = p.prefactor
    ln_abs = g.ln_abs + 0.5 * p.beta * np.log(p.c * p.c + r2)
    if ln_abs.size and float(np.max(ln_abs)) > _LN_MAX:
        raise OverflowError(
            "|h| = exp(%.6g) exceeds floating-point range" % float(np.max(ln_abs)))
    out = g.sign * np.exp(ln_abs)
    return float(out) if out.ndim == 0 else out
