"""Exception types raised by mqbound."""


class MqboundError(Exception):
    pass


class DomainError(MqboundError, ValueError):
    """An argument lies outside the domain of the operation."""


class PoleError(DomainError):
    """Gamma evaluated at a nonpositive integer, or a kernel exponent hitting one."""


class DegenerateSimplexError(MqboundError, ValueError):
    pass


class OutsideSimplexError(DomainError):
    pass


class NotDeterminingError(MqboundError, ValueError):
    """Points do not determine the polynomial space (rank-deficient Vandermonde)."""


class SingularSystemError(MqboundError, ArithmeticError):
    """Interpolation system is numerically singular.

    ``condition_diag`` holds the max/min pivot-magnitude ratio of the factorization.
    """

    def __init__(self, message, condition_diag=None):
        super().__init__(message)
        self.condition_diag = condition_diag


class SeminormError(MqboundError, ArithmeticError):
    """Kernel quadratic form is clearly negative: moment conditions are broken."""
