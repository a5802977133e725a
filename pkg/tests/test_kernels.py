import os
import subprocess
import sys

import numpy as np
import pytest

from owid import kernels
from owid.kernels import _numba, _numpy
from owid.optimize import hemisphere_grid, octant_grid
from owid.states import XStateParams, x_state_matrix

BACKENDS = [pytest.param(_numpy, id="numpy"), pytest.param(_numba, id="numba")]

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]])
SZ = np.diag([1.0 + 0j, -1.0])


def random_hermitian(rng, n, dim=4):
    a = rng.normal(size=(n, dim, dim)) + 1j * rng.normal(size=(n, dim, dim))
    return 0.5 * (a + np.conj(np.swapaxes(a, 1, 2)))


def random_density(rng, n):
    g = rng.normal(size=(n, 4, 4)) + 1j * rng.normal(size=(n, 4, 4))
    r = g @ np.conj(np.swapaxes(g, 1, 2))
    return r / np.trace(r, axis1=1, axis2=2)[:, None, None]


def brute_post_measurement(rho, n):
    ns = n[0] * SX + n[1] * SY + n[2] * SZ
    out = np.zeros((4, 4), dtype=complex)
    for sign in (1, -1):
        proj = np.kron(np.eye(2), (np.eye(2) + sign * ns) / 2)
        out += proj @ rho @ proj
    return out


def entropy_bits(m):
    w = np.clip(np.linalg.eigvalsh(m), 0, None)
    w = w[w > 0]
    return float(-(w * np.log2(w)).sum())


@pytest.mark.parametrize("impl", BACKENDS)
def test_eigvalsh_matches_lapack(impl, rng):
    mats = random_hermitian(rng, 200)
    np.testing.assert_allclose(impl.eigvalsh_batch(mats), np.linalg.eigvalsh(mats), atol=1e-12)


@pytest.mark.parametrize("impl", BACKENDS)
def test_eigvalsh_degenerate_and_diagonal(impl):
    mats = np.array([np.zeros((4, 4)), np.eye(4) / 4, np.diag([3.0, -1.0, 2.0, 0.0])], dtype=complex)
    np.testing.assert_allclose(impl.eigvalsh_batch(mats), np.linalg.eigvalsh(mats), atol=1e-15)


@pytest.mark.parametrize("impl", BACKENDS)
def test_jacobi_eigenvectors(impl, rng):
    for m in random_hermitian(rng, 20):
        w, v, ok = impl.jacobi_eigh(m)
        assert ok
        np.testing.assert_allclose(v @ np.diag(w) @ v.conj().T, m, atol=1e-12)
        np.testing.assert_allclose(v.conj().T @ v, np.eye(4), atol=1e-12)
        assert np.all(np.diff(w) >= 0)


@pytest.mark.parametrize("impl", BACKENDS)
def test_post_measurement_matches_kron(impl, rng):
    rho = random_density(rng, 1)[0]
    dirs = hemisphere_grid(8, 8)
    got = impl.post_measurement_batch(rho, dirs)
    for n, g in zip(dirs, got):
        np.testing.assert_allclose(g, brute_post_measurement(rho, n), atol=1e-14)


@pytest.mark.parametrize("impl", BACKENDS)
def test_measured_entropies(impl, rng):
    rho = random_density(rng, 1)[0]
    dirs = hemisphere_grid(10, 12)
    expected = [entropy_bits(brute_post_measurement(rho, n)) for n in dirs]
    np.testing.assert_allclose(impl.measured_entropies(rho, dirs), expected, atol=1e-12)


@pytest.mark.parametrize("impl", BACKENDS)
def test_conditional_entropies(impl, rng):
    rho = random_density(rng, 1)[0]
    dirs = hemisphere_grid(6, 8)
    expected = []
    for n in dirs:
        ns = n[0] * SX + n[1] * SY + n[2] * SZ
        total = 0.0
        for sign in (1, -1):
            proj = np.kron(np.eye(2), (np.eye(2) + sign * ns) / 2)
            sub = proj @ rho @ proj
            prob = np.trace(sub).real
            if prob > 1e-15:
                total += prob * entropy_bits(sub / prob)
        expected.append(total)
    np.testing.assert_allclose(impl.conditional_entropies(rho, dirs), expected, atol=1e-12)


def f_ref(phi, theta):
    terms = np.array([1 + phi + theta, 1 + phi - theta, 1 - phi + theta, 1 - phi - theta]) / 4
    terms = terms[terms > 0]
    return float(-(terms * np.log2(terms)).sum())


@pytest.mark.parametrize("impl", BACKENDS)
def test_reduced_values(impl, rng):
    s = rng.uniform(-0.4, 0.4, 30)
    c = rng.uniform(-0.4, 0.4, (30, 3))
    z = rng.normal(size=(30, 3))
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    got = impl.reduced_values(s, c, z)
    expected = [f_ref(abs(si * zi[2]), np.sqrt(((ci * zi) ** 2).sum())) for si, ci, zi in zip(s, c, z)]
    np.testing.assert_allclose(got, expected, atol=1e-13)


@pytest.mark.parametrize("impl", BACKENDS)
def test_reduced_grid_min(impl, rng):
    s = rng.uniform(-0.4, 0.4, 5)
    c = rng.uniform(-0.4, 0.4, (5, 3))
    grid = octant_grid(12, 16)
    idx, val = impl.reduced_grid_min(s, c, grid)
    for k in range(5):
        vals = impl.reduced_values(np.full(len(grid), s[k]), np.tile(c[k], (len(grid), 1)), grid)
        assert idx[k] == np.argmin(vals)
        assert val[k] == pytest.approx(vals.min(), abs=1e-15)


def test_backends_agree(rng):
    rho = x_state_matrix(XStateParams(0.3, 0.3, -0.4, 0.56))
    dirs = hemisphere_grid(20, 24)
    np.testing.assert_allclose(_numba.measured_entropies(rho, dirs), _numpy.measured_entropies(rho, dirs), atol=1e-13)


def test_env_flag_selects_numpy():
    code = "import owid.kernels as k; print(k.BACKEND)"
    env = {**os.environ, "OWID_DISABLE_NUMBA": "1"}
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
    env["OWID_DISABLE_NUMBA"] = "0"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numba"


def test_numpy_backend_end_to_end():
    code = (
        "from owid import owid_oracle, x_state_density, XStateParams, owid_x_state;"
        "p = XStateParams(0.3, 0.3, -0.4, 0.56);"
        "print(abs(owid_oracle(x_state_density(p)).value - owid_x_state(p)))"
    )
    env = {**os.environ, "OWID_DISABLE_NUMBA": "1"}
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert float(out.stdout) <= 1e-9


def test_default_backend():
    assert kernels.BACKEND in ("numba", "numpy")
