"""Lattice kernels for the discrete Schrödinger problems.

These are the hot inner loops of the library: the steady-state residual
and the evolution right-hand side are evaluated thousands of times inside
the Newton/GMRES machinery.  Each kernel exists in two forms, an explicit
numba ``@njit`` loop and a vectorized numpy fallback using ``np.roll``.
The numba form is selected at import time unless the environment variable
``CSNEWTON_DISABLE_NUMBA`` is set (or numba is unavailable).

All kernels accept float64 or complex128 arrays; the complex path carries
the analytic extension needed by the complex-step operators, so the cubic
terms use u*u (not |u|^2).
"""

import os

import numpy as np

_DISABLE = os.environ.get("CSNEWTON_DISABLE_NUMBA", "").lower() in ("1", "true", "yes")

try:
    if _DISABLE:
        raise ImportError
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

    def njit(*args, **kwargs):  # no-op decorator fallback
        if args and callable(args[0]):
            return args[0]
        return lambda fn: fn


def steady_residual_numpy(z, n, omega):
    """Residual of -w v + (v_+ - 2v + v_-) + (x^2 + y^2) v, split (x, y)."""
    x, y = z[:n], z[n:]
    q = x * x + y * y
    rx = -omega * x + (np.roll(x, -1) - 2.0 * x + np.roll(x, 1)) + q * x
    ry = -omega * y + (np.roll(y, -1) - 2.0 * y + np.roll(y, 1)) + q * y
    return np.concatenate((rx, ry))


@njit(cache=True)
def steady_residual_numba(z, n, omega):
    out = np.empty_like(z)
    for j in range(n):
        jp = j + 1 if j + 1 < n else 0
        jm = j - 1 if j >= 1 else n - 1
        q = z[j] * z[j] + z[n + j] * z[n + j]
        out[j] = -omega * z[j] + (z[jp] - 2.0 * z[j] + z[jm]) + q * z[j]
        out[n + j] = -omega * z[n + j] + (z[n + jp] - 2.0 * z[n + j] + z[n + jm]) + q * z[n + j]
    return out


def evolution_rhs_numpy(z, n):
    """Real-split lattice flow: dR = -[Lap I + q I], dI = Lap R + q R."""
    r, s = z[:n], z[n:]
    q = r * r + s * s
    lap_r = np.roll(r, -1) - 2.0 * r + np.roll(r, 1)
    lap_s = np.roll(s, -1) - 2.0 * s + np.roll(s, 1)
    return np.concatenate((-(lap_s + q * s), lap_r + q * r))


@njit(cache=True)
def evolution_rhs_numba(z, n):
    out = np.empty_like(z)
    for j in range(n):
        jp = j + 1 if j + 1 < n else 0
        jm = j - 1 if j >= 1 else n - 1
        r, s = z[j], z[n + j]
        q = r * r + s * s
        lap_r = z[jp] - 2.0 * r + z[jm]
        lap_s = z[n + jp] - 2.0 * s + z[n + jm]
        out[j] = -(lap_s + q * s)
        out[n + j] = lap_r + q * r
    return out


def norm_numpy(r, s):
    return float(np.sum(r * r + s * s))


@njit(cache=True)
def norm_numba(r, s):
    total = 0.0
    for j in range(r.size):
        total += r[j] * r[j] + s[j] * s[j]
    return total


def hamiltonian_numpy(r, s):
    dr = r - np.roll(r, 1)
    ds = s - np.roll(s, 1)
    q = r * r + s * s
    return float(-np.sum(dr * dr + ds * ds - 0.5 * q * q))


@njit(cache=True)
def hamiltonian_numba(r, s):
    n = r.size
    total = 0.0
    for j in range(n):
        jm = j - 1 if j >= 1 else n - 1
        dr = r[j] - r[jm]
        ds = s[j] - s[jm]
        q = r[j] * r[j] + s[j] * s[j]
        total += dr * dr + ds * ds - 0.5 * q * q
    return -total


if HAVE_NUMBA:
    steady_residual = steady_residual_numba
    evolution_rhs = evolution_rhs_numba
    lattice_norm = norm_numba
    lattice_hamiltonian = hamiltonian_numba
else:
    steady_residual = steady_residual_numpy
    evolution_rhs = evolution_rhs_numpy
    lattice_norm = norm_numpy
    lattice_hamiltonian = hamiltonian_numpy
