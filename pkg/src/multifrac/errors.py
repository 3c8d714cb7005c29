"""Exception hierarchy for multifrac."""


class MultifracError(Exception):
    """Base class for all library errors."""


class DomainError(MultifracError, ValueError):
    """A parameter or time lies outside the domain of a kernel."""


class QuadratureError(MultifracError, ArithmeticError):
    """Adaptive quadrature did not reach the requested tolerance.

    Attributes
    ----------
    achieved : float
        Absolute error estimate reported by the integrator.
    """

    def __init__(self, message, achieved=float("nan")):
        super().__init__(f"{message} (achieved abs error {achieved:.3e})")
        self.achieved = achieved


class FactorizationError(MultifracError, ArithmeticError):
    """Cholesky factorization failed for every jitter in the schedule."""

    def __init__(self, message, last_pivot=None, last_jitter=None):
        super().__init__(message)
        self.last_pivot = last_pivot
        self.last_jitter = last_jitter


class EigenSolverError(MultifracError, ArithmeticError):
    """Symmetric eigensolver failure."""


class InsufficientPathsError(MultifracError, ValueError):
    pass


class DegenerateFitError(MultifracError, ValueError):
    """Power-law fit requested on unusable samples."""


class WindowError(MultifracError, ValueError):
    """Estimator window or scale set does not fit the sampled path."""
