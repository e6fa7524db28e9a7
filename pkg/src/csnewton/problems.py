"""Benchmark problem catalog.

Every evaluator is written once over a generic (complex-capable) scalar
type and reused for real evaluation by embedding reals with zero imaginary
part, so the real function and its analytic extension cannot drift apart.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .irk import OdeProblem


def scalar_test_fn():
    """f(x) = x (e^{x/2} + 1); root at 0 with f'(0) = 2."""

    def f(z):
        return z * (cmath.exp(0.5 * z) + 1.0)

    return f


def uncoupled_system():
    """Two uncoupled copies of the scalar test function; root (0, 0)."""

    def F(z):
        return z * (np.exp(0.5 * z) + 1.0)

    return F


# ---------------------------------------------------------------------------
# ODE problems

STIFF_RATE = 50.0


def stiff_ode(dt=1e-2, t_end=3.0):
    """y' = -50 (y - cos t), y(0) = 0; a classic stiff linear test."""

    def rhs(t, y):
        return -STIFF_RATE * (y - math.cos(t))

    return OdeProblem(dim=1, rhs=rhs, t0=0.0, t_end=t_end,
                      y0=np.array([0.0]), dt=dt)


def stiff_ode_exact(t):
    """Closed-form solution of the stiff test problem."""
    t = np.asarray(t, dtype=float)
    return (2500.0 * np.cos(t) + 50.0 * np.sin(t)
            - 2500.0 * np.exp(-STIFF_RATE * t)) / 2501.0


@dataclass(frozen=True)
class OlsenParams:
    """Rate constants of the four-species peroxidase-oxidase model.

    ``delta`` is the constant feed term in the dX/dt equation.  Published
    parameter sets for this model do not always pin it down separately from
    ``beta``, so the two default to the same value.
    """

    alpha: float = 0.0912
    beta: float = 1.2121e-5
    epsilon: float = 0.0037
    lam: float = 18.5281
    kappa: float = 3.7963
    mu: float = 0.9697
    zeta: float = 0.9847
    delta: float = 1.2121e-5


def olsen_system(params=None, dt=0.01, t_end=10.0):
    """The 4-species reaction model with initial state (1, 1, 1, 1)."""
    p = params or OlsenParams()

    def rhs(t, y):
        a, b, x, w = y[0], y[1], y[2], y[3]
        aby = a * b * w
        return np.array([
            p.mu - p.alpha * a - aby,
            p.epsilon * (1.0 - b * x - aby),
            p.lam * (b * x - x * x + 3.0 * aby - p.zeta * x + p.delta),
            p.kappa * p.lam * (x * x - w - aby),
        ])

    return OdeProblem(dim=4, rhs=rhs, t0=0.0, t_end=t_end,
                      y0=np.ones(4), dt=dt)


# ---------------------------------------------------------------------------
# Discrete Schrödinger lattice


@dataclass(frozen=True)
class DnlsParams:
    """Lattice size, steady-state frequency, and soliton center site."""

    n_sites: int = 200
    omega: float = 0.1
    center: int = 100

    def __post_init__(self):
        if self.n_sites < 1:
            raise ValueError(f"lattice needs at least one site, got {self.n_sites}")
        if not 1 <= self.center <= self.n_sites:
            raise ValueError(f"center {self.center} outside 1..{self.n_sites}")


@dataclass
class LatticeState:
    """Real/imaginary split of the lattice field, periodic in the index."""

    n_sites: int
    re: np.ndarray
    im: np.ndarray

    @classmethod
    def from_stacked(cls, vec):
        vec = np.asarray(vec, dtype=float)
        n = vec.size // 2
        return cls(n_sites=n, re=vec[:n].copy(), im=vec[n:].copy())

    def stacked(self):
        return np.concatenate((self.re, self.im))


def _as_state(state):
    if isinstance(state, LatticeState):
        return state
    return LatticeState.from_stacked(np.asarray(state))


def dnls_steady_residual(params):
    """Residual map of the standing-wave profile equations, dim 2N.

    Input is the stacked (x_1..x_N, y_1..y_N) split of the profile; the
    cubic term uses analytic squares so the map extends off the real axis.
    """
    n, omega = params.n_sites, params.omega

    def F(z):
        return _kernels.steady_residual(np.asarray(z), n, omega)

    return F


def dnls_initial_guess(params):
    """Soliton-like seed (1 + i)/2 * sech^2(n - n0), stacked real/imag."""
    n_idx = np.arange(1, params.n_sites + 1, dtype=float)
    d = np.abs(n_idx - params.center)
    # sech via exp(-|d|) to avoid cosh overflow; far tails flush to zero
    e = np.exp(-d)
    sech2 = (2.0 * e / (1.0 + e * e)) ** 2
    half = 0.5 * sech2
    return np.concatenate((half, half))


def dnls_evolution(params, ground, dt=0.1, t_end=100.0):
    """Time-dependent lattice flow as a real 2N-dimensional ODE problem."""
    n = params.n_sites

    def rhs(t, z):
        return _kernels.evolution_rhs(np.asarray(z), n)

    return OdeProblem(dim=2 * n, rhs=rhs, t0=0.0, t_end=t_end,
                      y0=np.asarray(ground, dtype=float), dt=dt)


def dnls_norm(state):
    """Conserved power sum_n |u_n|^2."""
    s = _as_state(state)
    return _kernels.lattice_norm(s.re, s.im)


def dnls_hamiltonian(state):
    """Conserved energy -sum_n [|u_n - u_{n-1}|^2 - |u_n|^4 / 2], periodic."""
    s = _as_state(state)
    return _kernels.lattice_hamiltonian(s.re, s.im)
