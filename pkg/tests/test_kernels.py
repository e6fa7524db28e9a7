import subprocess
import sys

import numpy as np
import pytest

from csnewton import _kernels as K


@pytest.fixture
def rng():
    return np.random.default_rng(99)


def test_steady_residual_implementations_agree_real(rng):
    z = rng.standard_normal(40)
    a = K.steady_residual_numpy(z, 20, 0.1)
    b = K.steady_residual_numba(z, 20, 0.1)
    assert np.allclose(a, b, rtol=1e-15, atol=1e-15)


def test_steady_residual_implementations_agree_complex(rng):
    z = rng.standard_normal(40) + 1j * 1e-8 * rng.standard_normal(40)
    a = K.steady_residual_numpy(z, 20, 0.1)
    b = K.steady_residual_numba(z, 20, 0.1)
    assert np.allclose(a, b, rtol=1e-12, atol=0.0)


def test_evolution_rhs_implementations_agree(rng):
    for dtype in (float, complex):
        z = rng.standard_normal(30).astype(dtype)
        a = K.evolution_rhs_numpy(z, 15)
        b = K.evolution_rhs_numba(z, 15)
        assert np.allclose(a, b, rtol=1e-15, atol=1e-15)


def test_norm_implementations_agree(rng):
    r, s = rng.standard_normal(50), rng.standard_normal(50)
    assert K.norm_numba(r, s) == pytest.approx(K.norm_numpy(r, s), rel=1e-14)


def test_hamiltonian_implementations_agree(rng):
    r, s = rng.standard_normal(50), rng.standard_normal(50)
    assert K.hamiltonian_numba(r, s) == pytest.approx(
        K.hamiltonian_numpy(r, s), rel=1e-12)


def test_periodic_wrap_single_site():
    # N = 1: each site is its own neighbor twice, so the laplacian vanishes
    z = np.array([0.7, -0.2])
    out = K.steady_residual_numpy(z, 1, 0.1)
    q = 0.7 ** 2 + 0.2 ** 2
    assert out[0] == pytest.approx((-0.1 + q) * 0.7)
    assert out[1] == pytest.approx((-0.1 + q) * (-0.2))


def test_periodic_wrap_edge_sites(rng):
    # rotating the lattice commutes with the residual
    n = 12
    z = rng.standard_normal(2 * n)
    rolled = np.concatenate((np.roll(z[:n], 3), np.roll(z[n:], 3)))
    base = K.steady_residual_numpy(z, n, 0.1)
    rot = K.steady_residual_numpy(rolled, n, 0.1)
    assert np.allclose(rot, np.concatenate((np.roll(base[:n], 3),
                                            np.roll(base[n:], 3))), atol=1e-13)


def test_env_flag_selects_numpy_fallback():
    code = (
        "import os; os.environ['CSNEWTON_DISABLE_NUMBA'] = '1'\n"
        "from csnewton import _kernels as K\n"
        "assert not K.HAVE_NUMBA\n"
        "assert K.steady_residual is K.steady_residual_numpy\n"
        "assert K.evolution_rhs is K.evolution_rhs_numpy\n"
        "import numpy as np\n"
        "z = np.linspace(-1, 1, 16)\n"
        "print(K.steady_residual(z, 8, 0.1).sum())\n"
    )
    proc = subprocess.run([sys.executable, "-c", code],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr


def test_numba_enabled_by_default():
    if not K.HAVE_NUMBA:
        pytest.skip("numba disabled in this environment")
    assert K.steady_residual is K.steady_residual_numba
    assert K.lattice_norm is K.norm_numba
