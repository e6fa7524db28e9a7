"""Exception types shared by the solver modules."""


class CsNewtonError(Exception):
    """Base class for all library errors."""


class NonFiniteEvaluation(CsNewtonError):
    """A user evaluator returned NaN or Inf.

    ``column`` identifies the offending basis direction when the failure
    happened during Jacobian assembly, otherwise it is None.
    """

    def __init__(self, message, column=None):
        super().__init__(message)
        self.column = column


class SingularMatrix(CsNewtonError):
    """LU factorization hit a sub-threshold pivot."""

    def __init__(self, pivot_index):
        super().__init__(f"singular matrix: pivot {pivot_index} below threshold")
        self.pivot_index = pivot_index


class SingularDerivative(CsNewtonError):
    """The complex-step derivative estimate vanished."""


class StagnationError(CsNewtonError):
    """Two consecutive GMRES restart cycles made no progress.

    Carries the best iterate found so far so callers can keep going.
    """

    def __init__(self, x, report):
        super().__init__("GMRES stagnated across consecutive restart cycles")
        self.x = x
        self.report = report


class InsufficientHistory(CsNewtonError):
    """Fewer than three positive error entries for a rate estimate."""


class DegenerateHistory(CsNewtonError):
    """Error ratios of 0 or 1 make the rate estimate undefined."""


class StageSolveFailure(CsNewtonError):
    """The implicit Runge-Kutta stage solve did not converge."""

    def __init__(self, message, report=None, step_index=None):
        super().__init__(message)
        self.report = report
        self.step_index = step_index
