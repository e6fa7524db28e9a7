"""Complex-step derivative operators.

For a real-analytic function evaluated a small imaginary distance off the
real axis, Im f(x + ih)/h equals f'(x) up to an O(h^2) remainder and is
free of subtractive cancellation, so it stays accurate for h as small as
1e-300.  The same trick applied to a vector map F along a direction v,
Im F(x + ihv)/h, approximates the Jacobian-vector product DF(x)v with a
single evaluation of F.
"""

import cmath

import numpy as np

from .errors import NonFiniteEvaluation

# Deep in the cancellation-free regime; every experiment overrides it.
DEFAULT_STEP = 1e-10


def cs_derivative(f, x, h=DEFAULT_STEP):
    """Complex-step approximation of f'(x), accurate to O(h^2).

    ``f`` must accept a complex scalar and be analytic near x.
    """
    if not h > 0:
        raise ValueError(f"complex step must be positive, got {h}")
    w = f(complex(x, h))
    if not cmath.isfinite(w):
        raise NonFiniteEvaluation(f"f({x} + {h}j) is not finite")
    return w.imag / h


def cs_matvec(F, x, v, h=DEFAULT_STEP):
    """Approximate the Jacobian-vector product DF(x)·v by Im F(x + ihv)/h.

    Uses one evaluation of F regardless of the dimension.  The operator is
    nonlinear in v; its deviation from the true product is O(h^2 ||v||^3).
    """
    if not h > 0:
        raise ValueError(f"complex step must be positive, got {h}")
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    w = np.asarray(F(x + 1j * (h * v)))
    if not np.all(np.isfinite(w)):
        raise NonFiniteEvaluation("F(x + ihv) has non-finite entries")
    return w.imag / h


def cs_jacobian(F, x, h=DEFAULT_STEP):
    """Assemble the n×n complex-step Jacobian of F at x, column by column.

    Column j is exactly cs_matvec(F, x, e_j, h), so it costs n evaluations
    of F and agrees bitwise with the matrix-free operator on basis vectors.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    jac = np.empty((n, n))
    basis = np.eye(n)
    for j in range(n):
        try:
            jac[:, j] = cs_matvec(F, x, basis[j], h)
        except NonFiniteEvaluation as exc:
            raise NonFiniteEvaluation(str(exc), column=j) from None
    return jac
