"""Two-stage Gauss-Legendre implicit Runge-Kutta integration (order 4).

The stage equations are solved as one stacked nonlinear system by the
Jacobian-free complex-step Newton solver.  The method is A-stable and
symplectic, so quadratic invariants of the flow are conserved up to the
tolerances of the stage solves.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import StageSolveFailure
from .newton import NewtonConfig, jfnk_cs_newton

_S3 = math.sqrt(3.0)


@dataclass(frozen=True)
class ButcherTableau:
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray


def gauss_legendre_2() -> ButcherTableau:
    """The two-stage Gauss-Legendre tableau (collocation at Gauss points)."""
    a = np.array([[0.25, 0.25 - _S3 / 6.0],
                  [0.25 + _S3 / 6.0, 0.25]])
    b = np.array([0.5, 0.5])
    c = np.array([0.5 - _S3 / 6.0, 0.5 + _S3 / 6.0])
    return ButcherTableau(a=a, b=b, c=c)


@dataclass
class OdeProblem:
    """Fixed-step initial-value problem y' = rhs(t, y).

    ``rhs`` must accept a complex state vector (the analytic extension of
    the right-hand side); t stays real.
    """

    dim: int
    rhs: object
    t0: float
    t_end: float
    y0: np.ndarray
    dt: float


@dataclass
class IrkStepReport:
    newton_iterations: int
    inner_iterations_per_newton: list
    stage_values: tuple


@dataclass
class Trajectory:
    times: list
    states: list
    step_reports: list  # step_reports[i] describes the step ending at times[i]; [0] is None


def irk_step(prob, t, y, dt, warm=None, cfg=None, tableau=None):
    """Advance one step of size dt from (t, y); returns (y_new, report).

    The stacked stage vector (k1, k2) is solved by jfnk_cs_newton, warm
    started from ``warm`` when given and from k1 = k2 = rhs(t, y) otherwise.
    """
    if cfg is None:
        cfg = NewtonConfig()
    tab = tableau or gauss_legendre_2()
    a, b, c = tab.a, tab.b, tab.c
    y = np.asarray(y, dtype=float)
    n = y.size
    f = prob.rhs
    t1, t2 = t + c[0] * dt, t + c[1] * dt

    def residual(kk):
        k1, k2 = kk[:n], kk[n:]
        r1 = f(t1, y + dt * (a[0, 0] * k1 + a[0, 1] * k2)) - k1
        r2 = f(t2, y + dt * (a[1, 0] * k1 + a[1, 1] * k2)) - k2
        return np.concatenate((r1, r2))

    if warm is not None:
        guess = np.asarray(warm, dtype=float)
    else:
        f0 = np.asarray(f(t, y), dtype=float)
        guess = np.concatenate((f0, f0))

    rep = jfnk_cs_newton(residual, guess, cfg)
    if not rep.converged:
        raise StageSolveFailure("stage solve did not converge", report=rep)
    kk = np.asarray(rep.iterate_history[-1], dtype=float)
    k1, k2 = kk[:n], kk[n:]
    y_new = y + dt * (b[0] * k1 + b[1] * k2)
    return y_new, IrkStepReport(
        newton_iterations=rep.iterations,
        inner_iterations_per_newton=list(rep.inner_iteration_counts),
        stage_values=(k1, k2),
    )


def integrate(prob, cfg=None, tableau=None):
    """Integrate the problem over [t0, t_end] with fixed steps of prob.dt.

    Stage solves are warm started from the previous step's converged
    stages.  A final shortened step is taken when the span is not an exact
    multiple of dt.
    """
    if prob.dt <= 0:
        raise ValueError(f"dt must be positive, got {prob.dt}")
    span = prob.t_end - prob.t0
    n_whole = int(math.floor(span / prob.dt + 1e-9))
    remainder = span - n_whole * prob.dt
    short_step = remainder if remainder > 1e-9 * prob.dt else None

    y = np.array(prob.y0, dtype=float)
    times = [prob.t0]
    states = [y.copy()]
    reports: list = [None]
    warm = None
    for i in range(n_whole + (1 if short_step else 0)):
        t = prob.t0 + i * prob.dt
        dt = prob.dt if i < n_whole else short_step
        try:
            y, rep = irk_step(prob, t, y, dt, warm=warm, cfg=cfg, tableau=tableau)
        except StageSolveFailure as exc:
            raise StageSolveFailure(
                f"stage solve failed at step {i} (t = {t})",
                report=exc.report,
                step_index=i,
            ) from None
        warm = np.concatenate(rep.stage_values)
        times.append(t + dt)
        states.append(y.copy())
        reports.append(rep)
    return Trajectory(times=times, states=states, step_reports=reports)
