"""Timing comparison of the numba lattice kernels against the numpy fallback.

Run with:  python3 benchmarks/bench_kernels.py [--n-sites 200] [--repeats 200]

Both implementations are imported explicitly, so the comparison works no
matter which one the library selected at import time (set
CSNEWTON_DISABLE_NUMBA=1 to check the fallback path end to end).
"""

import argparse
import timeit

import numpy as np

from csnewton import _kernels as K


def bench(label, fn, repeats):
    # warm up once so numba compilation is not timed
    fn()
    per_call = min(timeit.repeat(fn, number=repeats, repeat=5)) / repeats
    print(f"  {label:24s} {per_call * 1e6:10.2f} us/call")
    return per_call


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n-sites", type=int, default=200)
    parser.add_argument("--repeats", type=int, default=200)
    args = parser.parse_args()

    n = args.n_sites
    rng = np.random.default_rng(0)
    z_real = rng.standard_normal(2 * n)
    z_cplx = z_real + 1j * 1e-8 * rng.standard_normal(2 * n)
    r, s = z_real[:n].copy(), z_real[n:].copy()

    print(f"lattice kernels, N = {n}, best of 5 x {args.repeats} calls "
          f"(numba available: {K.HAVE_NUMBA})")

    pairs = [
        ("steady residual (real)",
         lambda: K.steady_residual_numpy(z_real, n, 0.1),
         lambda: K.steady_residual_numba(z_real, n, 0.1)),
        ("steady residual (cplx)",
         lambda: K.steady_residual_numpy(z_cplx, n, 0.1),
         lambda: K.steady_residual_numba(z_cplx, n, 0.1)),
        ("evolution rhs",
         lambda: K.evolution_rhs_numpy(z_real, n),
         lambda: K.evolution_rhs_numba(z_real, n)),
        ("norm",
         lambda: K.norm_numpy(r, s),
         lambda: K.norm_numba(r, s)),
        ("hamiltonian",
         lambda: K.hamiltonian_numpy(r, s),
         lambda: K.hamiltonian_numba(r, s)),
    ]
    for name, numpy_fn, numba_fn in pairs:
        print(name)
        t_numpy = bench("numpy (np.roll)", numpy_fn, args.repeats)
        t_numba = bench("numba (@njit loop)", numba_fn, args.repeats)
        print(f"  {'speedup':24s} {t_numpy / t_numba:10.2f}x")


if __name__ == "__main__":
    main()
