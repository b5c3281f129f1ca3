"""Exception types shared across the package."""


class BranchCutError(ValueError):
    """Evaluation point lies on (or too close to) the branch arc."""


class PoleError(ValueError):
    """Denominator of a ratio vanished at the requested point."""


class DegenerateKernelError(ValueError):
    """Kernel radicand is negative beyond rounding noise; basis is broken."""


class EmptyRangeError(ValueError):
    """Requested comparison window is empty for these parameters."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to converge.

    Carries the achieved error estimate so callers can decide whether
    the partial result is still usable.
    """

    def __init__(self, message, error_estimate=None):
        super().__init__(message)
        self.error_estimate = error_estimate


class IllConditionedFitError(ValueError):
    """Least-squares design matrix condition number exceeded the cutoff."""


class MissingCoefficientError(ValueError):
    """Asymptotic estimate requested beyond the fitted expansion depth."""


class RootCountDiagnosticError(RuntimeError):
    """Root counting methods disagree beyond the ambiguity band, or too
    many trials failed in the eigenvalue solver."""
