"""Complex-step Newton solvers.

Three variants share a configuration and report format:

* ``scalar_cs_newton``   -- x_{k+1} = x_k - h f(x_k) / Im f(x_k + ih)
* ``jacobian_cs_newton`` -- assembles the complex-step Jacobian and solves
  the correction by dense LU; linear rate at finite h, quadratic as h -> 0
* ``jfnk_cs_newton``     -- matrix-free: the correction system is solved by
  GMRES with Im F(x + ihv)/h as the matrix-vector oracle; quadratic rate
  for any workable h

Stopping rules, in priority order: distance to a known root (rate studies),
then the step norm, then the residual norm.
"""

import cmath
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .csd import DEFAULT_STEP, cs_jacobian, cs_matvec
from .errors import (
    DegenerateHistory,
    InsufficientHistory,
    NonFiniteEvaluation,
    SingularDerivative,
    StagnationError,
)
from .gmres import GmresConfig, gmres_solve
from .linalg import lu_factor, lu_solve


@dataclass
class NewtonConfig:
    h: float = DEFAULT_STEP
    max_iter: int = 100
    step_tol: float = 1e-12
    residual_tol: Optional[float] = None
    known_root: object = None
    inner: GmresConfig = field(default_factory=lambda: GmresConfig(rel_tol=1e-12))


@dataclass
class SolveReport:
    converged: bool
    iterations: int
    iterate_history: list
    error_history: Optional[list] = None
    inner_iteration_counts: list = field(default_factory=list)
    rate_estimate: Optional[float] = None
    stagnated: bool = False


def estimate_rate(errors):
    """Experimental convergence rate from the last three error entries.

    Returns log(e_K / e_{K-1}) / log(e_{K-1} / e_{K-2}); 2 for an exactly
    quadratic tail, 1 for a geometric one.
    """
    errors = [float(e) for e in errors]
    if len(errors) < 3 or any(e <= 0 for e in errors[-3:]):
        raise InsufficientHistory(
            f"need >= 3 positive error entries, got {errors[-3:]}"
        )
    e0, e1, e2 = errors[-3:]
    r_new, r_old = e2 / e1, e1 / e0
    if r_new <= 1e-300 or abs(r_old - 1.0) <= 1e-300 or r_old <= 1e-300:
        raise DegenerateHistory(f"degenerate error ratios {r_old}, {r_new}")
    return math.log(r_new) / math.log(r_old)


def _try_rate(errors):
    if errors is None or len(errors) < 3:
        return None
    try:
        return estimate_rate(errors)
    except (InsufficientHistory, DegenerateHistory):
        return None


def scalar_cs_newton(f, x0, cfg=None):
    """Complex-step Newton iteration for a scalar equation f(x) = 0."""
    if cfg is None:
        cfg = NewtonConfig()
    h = cfg.h
    root = None if cfg.known_root is None else float(cfg.known_root)
    x = float(x0)
    iterates = [x]
    errors = [abs(x - root)] if root is not None else None

    converged = False
    if root is not None and errors[0] <= cfg.step_tol:
        converged = True
    for _ in range(cfg.max_iter):
        if converged:
            break
        fx = f(complex(x, 0.0))
        if not cmath.isfinite(fx):
            raise NonFiniteEvaluation(f"f({x}) is not finite")
        fxr = fx.real
        if fxr == 0.0:
            converged = True
            break
        if (
            root is None
            and cfg.residual_tol is not None
            and abs(fxr) <= cfg.residual_tol
        ):
            converged = True
            break
        w = f(complex(x, h))
        if not cmath.isfinite(w):
            raise NonFiniteEvaluation(f"f({x} + {h}j) is not finite")
        if abs(w.imag) / h < 1e-300:
            raise SingularDerivative(
                f"complex-step derivative vanished at x = {x}"
            )
        x_new = x - h * fxr / w.imag
        iterates.append(x_new)
        if root is not None:
            errors.append(abs(x_new - root))
            if errors[-1] <= cfg.step_tol:
                converged = True
        elif abs(x_new - x) <= cfg.step_tol:
            x = x_new
            converged = True
            continue
        x = x_new

    return SolveReport(
        converged=converged,
        iterations=len(iterates) - 1,
        iterate_history=iterates,
        error_history=errors,
        rate_estimate=_try_rate(errors),
    )


def _error_norm(x, root):
    # max-norm so uncoupled systems replicate scalar iteration counts
    return float(np.max(np.abs(x - root)))


def _real_eval(F, x):
    fx = np.asarray(F(x.astype(complex)))
    if not np.all(np.isfinite(fx)):
        raise NonFiniteEvaluation("F(x) has non-finite entries")
    return fx.real


def _system_solve(F, x0, cfg, step_fn):
    """Shared outer loop of the two system variants.

    ``step_fn(x, fx)`` returns (correction, inner_iterations, stagnated).
    """
    root = None if cfg.known_root is None else np.asarray(cfg.known_root, float)
    x = np.array(x0, dtype=float)
    iterates = [x.copy()]
    errors = [_error_norm(x, root)] if root is not None else None
    inner_counts = []
    stagnated = False

    converged = False
    if root is not None and errors[0] <= cfg.step_tol:
        converged = True
    for _ in range(cfg.max_iter):
        if converged:
            break
        fx = _real_eval(F, x)
        if not np.any(fx):
            converged = True
            break
        if (
            root is None
            and cfg.residual_tol is not None
            and np.linalg.norm(fx) <= cfg.residual_tol
        ):
            converged = True
            break
        u, n_inner, stalled = step_fn(x, fx)
        stagnated = stagnated or stalled
        if n_inner is not None:
            inner_counts.append(n_inner)
        x_new = x - u
        iterates.append(x_new.copy())
        if root is not None:
            errors.append(_error_norm(x_new, root))
            if errors[-1] <= cfg.step_tol:
                converged = True
        elif np.linalg.norm(u) <= cfg.step_tol:
            x = x_new
            converged = True
            continue
        x = x_new

    return SolveReport(
        converged=converged,
        iterations=len(iterates) - 1,
        iterate_history=iterates,
        error_history=errors,
        inner_iteration_counts=inner_counts,
        rate_estimate=_try_rate(errors),
        stagnated=stagnated,
    )


def jacobian_cs_newton(F, x0, cfg=None):
    """Newton iteration with the assembled complex-step Jacobian.

    Each iteration costs n evaluations of F for the Jacobian plus one dense
    LU solve.
    """
    if cfg is None:
        cfg = NewtonConfig()

    def step(x, fx):
        jac = cs_jacobian(F, x, cfg.h)
        return lu_solve(lu_factor(jac), fx), None, False

    return _system_solve(F, x0, cfg, step)


def jfnk_cs_newton(F, x0, cfg=None):
    """Jacobian-free Newton-Krylov iteration.

    The correction system is handed to GMRES with the one-evaluation
    operator v -> Im F(x + ihv)/h standing in for the Jacobian product.
    GMRES stagnation is non-fatal: the outer loop keeps the best inner
    iterate and the report is flagged.
    """
    if cfg is None:
        cfg = NewtonConfig()

    def step(x, fx):
        def oracle(v):
            return cs_matvec(F, x, v, cfg.h)

        try:
            u, rep = gmres_solve(oracle, fx, None, cfg.inner)
            return u, rep.total_iterations, False
        except StagnationError as exc:
            return exc.x, exc.report.total_iterations, True

    return _system_solve(F, x0, cfg, step)
