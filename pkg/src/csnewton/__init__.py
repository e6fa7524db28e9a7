"""Complex-step Newton solvers with a GMRES inner loop and a symplectic
implicit Runge-Kutta integrator, plus the benchmark problems and the
experiment command line around them."""

__version__ = "0.1.0"

from .csd import DEFAULT_STEP, cs_derivative, cs_jacobian, cs_matvec
from .errors import (
    CsNewtonError,
    DegenerateHistory,
    InsufficientHistory,
    NonFiniteEvaluation,
    SingularDerivative,
    SingularMatrix,
    StageSolveFailure,
    StagnationError,
)
from .gmres import GmresConfig, GmresReport, gmres_solve
from .irk import ButcherTableau, OdeProblem, Trajectory, gauss_legendre_2, integrate, irk_step
from .linalg import LuFactors, lu_det, lu_factor, lu_solve
from .newton import (
    NewtonConfig,
    SolveReport,
    estimate_rate,
    jacobian_cs_newton,
    jfnk_cs_newton,
    scalar_cs_newton,
)

__all__ = [
    "DEFAULT_STEP",
    "cs_derivative",
    "cs_jacobian",
    "cs_matvec",
    "CsNewtonError",
    "DegenerateHistory",
    "InsufficientHistory",
    "NonFiniteEvaluation",
    "SingularDerivative",
    "SingularMatrix",
    "StageSolveFailure",
    "StagnationError",
    "GmresConfig",
    "GmresReport",
    "gmres_solve",
    "ButcherTableau",
    "OdeProblem",
    "Trajectory",
    "gauss_legendre_2",
    "integrate",
    "irk_step",
    "LuFactors",
    "lu_det",
    "lu_factor",
    "lu_solve",
    "NewtonConfig",
    "SolveReport",
    "estimate_rate",
    "jacobian_cs_newton",
    "jfnk_cs_newton",
    "scalar_cs_newton",
    "__version__",
]
