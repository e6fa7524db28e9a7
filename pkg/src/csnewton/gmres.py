"""Restarted GMRES over a black-box matrix-vector oracle.

Arnoldi with one pass of modified Gram-Schmidt; the least-squares problem
is updated incrementally with Givens rotations.  Setting ``augment_dim``
enriches each cycle with approximations of previous cycles' error vectors
(the flexible-basis formulation), which reduces to classical restarted
GMRES when the augmentation depth is zero.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import StagnationError

# Lucky-breakdown and stagnation detection thresholds.
BREAKDOWN_TOL = 1e-14
STAGNATION_TOL = 1e-14


@dataclass
class GmresConfig:
    rel_tol: float
    abs_tol: float = 0.0
    restart_len: int = 30
    max_outer: int = 100
    augment_dim: int = 0


@dataclass
class GmresReport:
    converged: bool
    total_iterations: int
    final_residual_norm: float
    residual_history: list = field(default_factory=list)


def gmres_solve(matvec, b, x0=None, cfg=None):
    """Solve A x = b where A is only available as ``matvec``.

    Returns (x, GmresReport).  Convergence target is
    max(rel_tol * ||b||, abs_tol) on the 2-norm residual; the residual is
    recomputed from the oracle at every restart.  Raises StagnationError
    (carrying the best iterate) when two consecutive cycles fail to reduce
    the residual.
    """
    if cfg is None:
        cfg = GmresConfig(rel_tol=1e-12)
    b = np.asarray(b, dtype=float)
    n = b.size
    x = np.zeros(n) if x0 is None else np.array(x0, dtype=float)

    target = max(cfg.rel_tol * np.linalg.norm(b), cfg.abs_tol)
    r = b - matvec(x) if np.any(x) else b.copy()
    rnorm = np.linalg.norm(r)
    history = [rnorm]
    if rnorm <= target:
        return x, GmresReport(True, 0, rnorm, history)

    m = min(max(cfg.restart_len, 1), n)
    outer_dirs = []          # normalized corrections from previous cycles
    total_iters = 0
    best_x, best_rnorm = x.copy(), rnorm
    flat_cycles = 0

    for _ in range(cfg.max_outer):
        k_aug = min(cfg.augment_dim, len(outer_dirs))
        dims = min(m + k_aug, n)
        n_reg = dims - k_aug

        V = np.zeros((n, dims + 1))
        Z = np.zeros((n, dims))
        H = np.zeros((dims + 1, dims))
        cs = np.zeros(dims)
        sn = np.zeros(dims)
        g = np.zeros(dims + 1)
        g[0] = rnorm
        V[:, 0] = r / rnorm

        breakdown = False
        j_last = 0
        for j in range(dims):
            z = V[:, j] if j < n_reg else outer_dirs[j - n_reg]
            Z[:, j] = z
            w = matvec(z)
            total_iters += 1
            wnorm0 = np.linalg.norm(w)
            for i in range(j + 1):
                H[i, j] = V[:, i] @ w
                w -= H[i, j] * V[:, i]
            hnorm = np.linalg.norm(w)
            H[j + 1, j] = hnorm
            if hnorm > BREAKDOWN_TOL * max(wnorm0, 1e-300):
                V[:, j + 1] = w / hnorm
            else:
                breakdown = True
            # fold the new column through the accumulated rotations
            for i in range(j):
                t = cs[i] * H[i, j] + sn[i] * H[i + 1, j]
                H[i + 1, j] = -sn[i] * H[i, j] + cs[i] * H[i + 1, j]
                H[i, j] = t
            nu = np.hypot(H[j, j], H[j + 1, j])
            cs[j] = H[j, j] / nu
            sn[j] = H[j + 1, j] / nu
            H[j, j] = nu
            H[j + 1, j] = 0.0
            g[j + 1] = -sn[j] * g[j]
            g[j] = cs[j] * g[j]
            history.append(abs(g[j + 1]))
            j_last = j
            if abs(g[j + 1]) <= target or breakdown:
                break

        k = j_last + 1
        y = np.zeros(k)
        for i in range(k - 1, -1, -1):
            y[i] = (g[i] - H[i, i + 1:k] @ y[i + 1:k]) / H[i, i]
        dx = Z[:, :k] @ y
        x = x + dx

        prev_rnorm = rnorm
        r = b - matvec(x)
        rnorm = np.linalg.norm(r)
        if rnorm < best_rnorm:
            best_x, best_rnorm = x.copy(), rnorm
        if rnorm <= target:
            return x, GmresReport(True, total_iters, rnorm, history)
        if breakdown and rnorm >= (1.0 - 1e-10) * prev_rnorm:
            # The Krylov space was exhausted and restarting gains nothing:
            # for a linear oracle this is the happy exit (solution already
            # found up to roundoff).  Mildly nonlinear oracles keep making
            # progress across restarts and fall through to another cycle.
            return best_x, GmresReport(best_rnorm <= target, total_iters,
                                       best_rnorm, history)

        dxnorm = np.linalg.norm(dx)
        if dxnorm > 0:
            outer_dirs.append(dx / dxnorm)
            if cfg.augment_dim:
                outer_dirs = outer_dirs[-cfg.augment_dim:]
            else:
                outer_dirs = []

        if prev_rnorm - rnorm < STAGNATION_TOL * prev_rnorm:
            flat_cycles += 1
            if flat_cycles >= 2:
                raise StagnationError(
                    best_x,
                    GmresReport(False, total_iters, best_rnorm, history),
                )
        else:
            flat_cycles = 0

    return best_x, GmresReport(False, total_iters, best_rnorm, history)
