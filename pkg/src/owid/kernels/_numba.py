"""numba-compiled kernels. Signatures mirror :mod:`owid.kernels._numpy`."""

import math

import numpy as np
from numba import njit, prange

JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 60
LOG_CLAMP = 1e-12


@njit(cache=True)
def _jacobi_inplace(a, v, want_vectors):
    n = a.shape[0]
    scale = 0.0
    for i in range(n):
        for j in range(n):
            scale += a[i, j].real ** 2 + a[i, j].imag ** 2
    scale = max(1.0, math.sqrt(scale))
    for _ in range(JACOBI_MAX_SWEEPS):
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off += a[p, q].real ** 2 + a[p, q].imag ** 2
        if math.sqrt(2.0 * off) <= JACOBI_TOL * scale:
            return True
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = a[p, q]
                ab = abs(b)
                if ab == 0.0:
                    continue
                e = b / ab
                ec = e.conjugate()
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * ab)
                sgn = 1.0 if tau >= 0.0 else -1.0
                t = sgn / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * ec * akq
                    a[k, q] = s * e * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * e * aqk
                    a[q, k] = s * ec * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = app - t * ab
                a[q, q] = aqq + t * ab
                if want_vectors:
                    for k in range(n):
                        vkp = v[k, p]
                        vkq = v[k, q]
                        v[k, p] = c * vkp - s * ec * vkq
                        v[k, q] = s * e * vkp + c * vkq
    return False


@njit(cache=True)
def jacobi_eigh(m):
    """Eigenvalues (ascending), eigenvectors (columns) and a convergence flag."""
    n = m.shape[0]
    a = m.astype(np.complex128).copy()
    v = np.eye(n, dtype=np.complex128)
    ok = _jacobi_inplace(a, v, True)
    w = np.empty(n)
    for i in range(n):
        w[i] = a[i, i].real
    order = np.argsort(w)
    return w[order], v[:, order], ok


@njit(cache=True)
def _eigvalsh_one(m, out):
    n = m.shape[0]
    a = m.copy()
    v = np.empty((1, 1), dtype=np.complex128)
    _jacobi_inplace(a, v, False)
    for i in range(n):
        out[i] = a[i, i].real
    out.sort()


@njit(cache=True, parallel=True)
def eigvalsh_batch(mats):
    nb, n = mats.shape[0], mats.shape[1]
    out = np.empty((nb, n))
    for i in prange(nb):
        _eigvalsh_one(mats[i].astype(np.complex128), out[i])
    return out


@njit(cache=True)
def _xlog2x(x):
    if x <= 0.0:
        return 0.0
    return x * math.log2(x)


@njit(cache=True)
def _projector(nx, ny, nz, sign):
    pr = np.empty((2, 2), dtype=np.complex128)
    pr[0, 0] = 0.5 * (1.0 + sign * nz)
    pr[1, 1] = 0.5 * (1.0 - sign * nz)
    pr[0, 1] = 0.5 * sign * complex(nx, -ny)
    pr[1, 0] = 0.5 * sign * complex(nx, ny)
    return pr


@njit(cache=True)
def _post_measurement(rho, nx, ny, nz, out):
    # sum over k of (I x P_k) rho (I x P_k); basis index = 2*a + b
    for i in range(4):
        for j in range(4):
            out[i, j] = 0.0
    for sgn in (1.0, -1.0):
        pr = _projector(nx, ny, nz, sgn)
        for a in range(2):
            for b in range(2):
                for a2 in range(2):
                    for b2 in range(2):
                        acc = 0.0j
                        for beta in range(2):
                            for beta2 in range(2):
                                acc += pr[b, beta] * rho[2 * a + beta, 2 * a2 + beta2] * pr[beta2, b2]
                        out[2 * a + b, 2 * a2 + b2] += acc


@njit(cache=True, parallel=True)
def measured_entropies(rho, dirs):
    k = dirs.shape[0]
    out = np.empty(k)
    for i in prange(k):
        post = np.empty((4, 4), dtype=np.complex128)
        _post_measurement(rho, dirs[i, 0], dirs[i, 1], dirs[i, 2], post)
        w = np.empty(4)
        _eigvalsh_one(post, w)
        acc = 0.0
        for j in range(4):
            acc -= _xlog2x(w[j])
        out[i] = acc
    return out


@njit(cache=True, parallel=True)
def post_measurement_batch(rho, dirs):
    k = dirs.shape[0]
    out = np.empty((k, 4, 4), dtype=np.complex128)
    for i in prange(k):
        _post_measurement(rho, dirs[i, 0], dirs[i, 1], dirs[i, 2], out[i])
    return out


@njit(cache=True, parallel=True)
def conditional_entropies(rho, dirs):
    """Sum_k p_k S(rho_a|k) for a measurement on qubit b along each direction."""
    k = dirs.shape[0]
    out = np.empty(k)
    for i in prange(k):
        acc = 0.0
        for sgn in (1.0, -1.0):
            pr = _projector(dirs[i, 0], dirs[i, 1], dirs[i, 2], sgn)
            blk = np.zeros((2, 2), dtype=np.complex128)
            for a in range(2):
                for a2 in range(2):
                    z = 0.0j
                    for b in range(2):
                        for b2 in range(2):
                            z += rho[2 * a + b, 2 * a2 + b2] * pr[b2, b]
                    blk[a, a2] = z
            w = np.empty(2)
            _eigvalsh_one(blk, w)
            pk = w[0] + w[1]
            acc += -_xlog2x(max(w[0], 0.0)) - _xlog2x(max(w[1], 0.0)) + _xlog2x(pk)
        out[i] = acc
    return out


@njit(cache=True)
def f_phi_theta_scalar(phi, theta):
    acc = 0.0
    for x in (1.0 + phi - theta, 1.0 + phi + theta, 1.0 - phi - theta, 1.0 - phi + theta):
        if x < 0.0 and x >= -LOG_CLAMP:
            x = 0.0
        if x < 0.0:
            return np.nan
        acc += _xlog2x(x)
    return 2.0 - 0.25 * acc


@njit(cache=True)
def _reduced_one(s, c1, c2, c3, z1, z2, z3):
    theta = math.sqrt(c1 * c1 * z1 * z1 + c2 * c2 * z2 * z2 + c3 * c3 * z3 * z3)
    return f_phi_theta_scalar(abs(s * z3), theta)


@njit(cache=True, parallel=True)
def reduced_values(s, c, dirs):
    m = dirs.shape[0]
    out = np.empty(m)
    for i in prange(m):
        out[i] = _reduced_one(s[i], c[i, 0], c[i, 1], c[i, 2], dirs[i, 0], dirs[i, 1], dirs[i, 2])
    return out


@njit(cache=True, parallel=True)
def reduced_grid_min(s, c, dirs):
    nb = s.shape[0]
    k = dirs.shape[0]
    idx = np.empty(nb, dtype=np.int64)
    val = np.empty(nb)
    for i in prange(nb):
        best = np.inf
        bj = 0
        for j in range(k):
            v = _reduced_one(s[i], c[i, 0], c[i, 1], c[i, 2], dirs[j, 0], dirs[j, 1], dirs[j, 2])
            if v < best:
                best = v
                bj = j
        idx[i] = bj
        val[i] = best
    return idx, val
