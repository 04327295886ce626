"""Exception types shared across the package."""


class SieveLabError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(SieveLabError, ValueError):
    """An argument violates a documented precondition."""


class EvaluationError(SieveLabError):
    """An integrand or objective returned a non-finite value.

    Carries the offending abscissa in ``.abscissa``.
    """

    def __init__(self, message, abscissa):
        super().__init__(f"{message} (at x={abscissa!r})")
        self.abscissa = abscissa


class ConvergenceError(SieveLabError):
    """Adaptive refinement exhausted its depth budget.

    Carries the best estimate obtained so far in ``.best_estimate``.
    """

    def __init__(self, message, best_estimate):
        super().__init__(f"{message} (best estimate {best_estimate!r})")
        self.best_estimate = best_estimate


class ResourceError(SieveLabError):
    """A computation would exceed its configured work budget."""


class StructureError(SieveLabError):
    """An input object lacks the structure an algorithm requires."""


class DegenerateLocalError(DomainError):
    """A local count is degenerate (e.g. no points mod p to form a ratio)."""


class UnsupportedKappaError(DomainError):
    """No tabulated sifting-limit constant exists for the requested dimension."""
