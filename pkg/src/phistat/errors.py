"""Exception hierarchy shared by every module of the package."""


class PhistatError(Exception):
    """Base class for all errors raised by phistat."""


class DomainError(PhistatError, ValueError):
    """An argument lies outside the domain of the function being evaluated."""


class RangeError(PhistatError, ValueError):
    """A value lies outside the range of the function being inverted."""


class NoPositiveRoot(RangeError):
    """The implicit equation has no positive solution for these parameters."""


class QuadratureError(PhistatError, ArithmeticError):
    """Numerical integration did not reach the requested tolerance."""


class DivergentIntegral(QuadratureError):
    """The requested improper integral does not converge."""


class ConvergenceError(PhistatError, ArithmeticError):
    """An iterative solver exhausted its iteration budget."""


class InvalidSimplexPoint(PhistatError, ValueError):
    pass


class DimensionMismatch(PhistatError, ValueError):
    pass


class InfeasibleConstraint(PhistatError, ValueError):
    """The mean-energy target is not strictly inside (E_1, E_n)."""


class UnsupportedOutcome(PhistatError, ValueError):
    pass


class VerificationFailure(PhistatError, AssertionError):
    """A maximality check failed; ``check`` names the first violated test."""

    def __init__(self, check, message):
        super().__init__(f"{check}: {message}")
        self.check = check
