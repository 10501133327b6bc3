"""Exception hierarchy shared by every module."""


class TridiagError(Exception):
    """Base class for all errors raised by the package."""


class DomainError(TridiagError, ValueError):
    """An argument lies outside the domain of the operation."""


class ParameterDomainError(DomainError):
    """A family, basis or potential parameter violates its invariants."""


class UnsupportedCaseError(TridiagError, NotImplementedError):
    """The requested case has no supported construction."""


class AccuracyError(TridiagError, ArithmeticError):
    """A numerical procedure failed to reach the requested accuracy.

    The best estimate achieved is kept on ``estimate`` and its error
    bound on ``error``.
    """

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error
