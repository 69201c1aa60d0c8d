"""Exception types shared across the package."""


class BasisMismatchError(ValueError):
    """Two objects built on different composite bases were combined."""


class DegenerateSteadyStateError(RuntimeError):
    """The Liouvillian kernel is more than one-dimensional."""


class SteadyStateConvergenceError(RuntimeError):
    """No steady state could be extracted to the requested tolerance."""


class DiagonalizationError(RuntimeError):
    """Dense eigendecomposition of the Liouvillian failed."""


class UndefinedObservableError(RuntimeError):
    """An observable is undefined at this parameter point (e.g. g2 with an empty cavity)."""
