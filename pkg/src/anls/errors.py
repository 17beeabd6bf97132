"""Exception and warning types shared across the toolkit."""

__all__ = [
    "DomainError",
    "SupportOverflowError",
    "SolverDivergedError",
    "NotConvergedError",
    "AccuracyError",
    "InsufficientDataError",
    "BoundaryMassWarning",
]


class DomainError(ValueError):
    """Input lies outside an operation's domain (non-finite data, bad exponent, zero field)."""


class SupportOverflowError(DomainError):
    """A rescaled field would wrap around the periodic box where it is not negligible."""


class SolverDivergedError(RuntimeError):
    """An iteration left the admissible region.  Carries the iteration trace."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = list(trace) if trace is not None else []


class NotConvergedError(RuntimeError):
    """Iteration budget exhausted before the tolerance was met.  Carries the best iterate."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class AccuracyError(RuntimeError):
    """A quadrature could not certify the requested tolerance.

    ``estimate`` is the best value obtained and ``error_bound`` the certified bound.
    """

    def __init__(self, message, estimate=None, error_bound=None):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound


class InsufficientDataError(ValueError):
    """Too few usable samples for a requested fit or difference stencil."""


class BoundaryMassWarning(UserWarning):
    """Mass near the box boundary makes a windowed quantity untrustworthy."""
