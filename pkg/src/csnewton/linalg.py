"""Dense LU factorization with partial pivoting and triangular solves."""

from dataclasses import dataclass

import numpy as np

from .errors import SingularMatrix

# Relative pivot threshold distinguishing singularity from roundoff.
PIVOT_TOL = 1e-14


@dataclass(frozen=True)
class LuFactors:
    """Packed L\\U entries, pivot rows, and the permutation sign."""

    lu: np.ndarray
    piv: np.ndarray
    sign: float


def lu_factor(a):
    """Partial-pivoting LU of a square matrix.

    Raises SingularMatrix with the index of the first pivot whose magnitude
    falls below PIVOT_TOL * max|A|.
    """
    lu = np.array(a, dtype=float)
    if lu.ndim != 2 or lu.shape[0] != lu.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {lu.shape}")
    n = lu.shape[0]
    amax = np.max(np.abs(lu)) if n else 0.0
    threshold = PIVOT_TOL * amax
    piv = np.arange(n)
    sign = 1.0
    for k in range(n):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        if abs(lu[p, k]) <= threshold:
            raise SingularMatrix(k)
        if p != k:
            lu[[k, p]] = lu[[p, k]]
            piv[k] = p
            sign = -sign
        lu[k + 1:, k] /= lu[k, k]
        lu[k + 1:, k + 1:] -= np.outer(lu[k + 1:, k], lu[k, k + 1:])
    return LuFactors(lu=lu, piv=piv, sign=sign)


def lu_solve(factors, b):
    """Solve A x = b from the factors of lu_factor."""
    lu, piv = factors.lu, factors.piv
    n = lu.shape[0]
    x = np.array(b, dtype=float)
    if x.shape != (n,):
        raise ValueError(f"right-hand side has shape {x.shape}, expected ({n},)")
    for k in range(n):
        p = piv[k]
        if p != k:
            x[k], x[p] = x[p], x[k]
    for k in range(1, n):
        x[k] -= lu[k, :k] @ x[:k]
    for k in range(n - 1, -1, -1):
        x[k] = (x[k] - lu[k, k + 1:] @ x[k + 1:]) / lu[k, k]
    return x


def lu_det(factors):
    """Determinant from the packed factors (pivot product times parity)."""
    return factors.sign * float(np.prod(np.diag(factors.lu)))
