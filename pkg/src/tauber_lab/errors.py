"""Exception hierarchy shared by all tauber_lab modules."""


class TauberLabError(Exception):
    """Base class for library errors."""


class DomainError(TauberLabError, ValueError):
    """An argument lies outside the range the object is defined or stored on."""


class SieveSizeError(TauberLabError, ValueError):
    """Sieve bound is non-positive or exceeds the supported maximum."""


class AbscissaError(DomainError):
    """Dirichlet series queried at or left of its abscissa of convergence."""


class PoleProximityError(DomainError):
    """Evaluation point is within the guard radius of a known pole."""


class NearZeroError(TauberLabError, ArithmeticError):
    """Division by a value indistinguishable from zero."""

    def __init__(self, message: str, magnitude: float):
        super().__init__(message)
        self.magnitude = magnitude


class ToleranceNotMet(TauberLabError, ArithmeticError):
    """Adaptive procedure stopped before reaching the requested tolerance.

    The best available estimate is attached so callers can still inspect it.
    """

    def __init__(self, message: str, best_estimate, error_estimate: float):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.error_estimate = error_estimate


class UnreliableProbe(TauberLabError, ArithmeticError):
    """Contour probe values disagree across node doublings."""

    def __init__(self, message: str, values):
        super().__init__(message)
        self.values = values


class ConsistencyError(TauberLabError, AssertionError):
    """Two independent evaluation routes disagree beyond their error bars."""
