"""Pure-numpy kernels, vectorized across the batch axis.

Every function here matches its counterpart in :mod:`owid.kernels._numba`
in signature and (to rounding) in output.
"""

import numpy as np

JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 60
LOG_CLAMP = 1e-12
_CHUNK = 1 << 16


def _jacobi_lockstep(a, v=None):
    """Cyclic Jacobi on a stack of Hermitian matrices, modified in place."""
    n = a.shape[-1]
    scale = np.maximum(1.0, np.sqrt((np.abs(a) ** 2).sum(axis=(-2, -1))))
    iu = np.triu_indices(n, 1)
    converged = np.zeros(a.shape[0], dtype=bool)
    for _ in range(JACOBI_MAX_SWEEPS):
        off = np.sqrt(2.0 * (np.abs(a[:, iu[0], iu[1]]) ** 2).sum(axis=-1))
        converged = off <= JACOBI_TOL * scale
        if converged.all():
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = a[:, p, q]
                ab = np.abs(b)
                live = ab > 0.0
                e = np.where(live, b / np.where(live, ab, 1.0), 1.0)
                app = a[:, p, p].real.copy()
                aqq = a[:, q, q].real.copy()
                tau = (aqq - app) / (2.0 * np.where(live, ab, 1.0))
                sgn = np.where(tau >= 0.0, 1.0, -1.0)
                with np.errstate(over="ignore"):
                    t = np.where(live, sgn / (np.abs(tau) + np.sqrt(1.0 + tau * tau)), 0.0)
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                se = (s * e)[:, None]
                sec = (s * e.conj())[:, None]
                cc = c[:, None]
                colp = a[:, :, p].copy()
                colq = a[:, :, q]
                a[:, :, p] = cc * colp - sec * colq
                a[:, :, q] = se * colp + cc * colq
                rowp = a[:, p, :].copy()
                rowq = a[:, q, :]
                a[:, p, :] = cc * rowp - se * rowq
                a[:, q, :] = sec * rowp + cc * rowq
                a[:, p, q] = 0.0
                a[:, q, p] = 0.0
                a[:, p, p] = app - t * ab
                a[:, q, q] = aqq + t * ab
                if v is not None:
                    vp = v[:, :, p].copy()
                    vq = v[:, :, q]
                    v[:, :, p] = cc * vp - sec * vq
                    v[:, :, q] = se * vp + cc * vq
    return converged


def jacobi_eigh(m):
    a = np.array(m, dtype=np.complex128)[None].copy()
    v = np.eye(a.shape[-1], dtype=np.complex128)[None].copy()
    ok = _jacobi_lockstep(a, v)
    w = np.diagonal(a[0]).real.copy()
    order = np.argsort(w)
    return w[order], v[0][:, order], bool(ok[0])


def eigvalsh_batch(mats):
    mats = np.asarray(mats, dtype=np.complex128)
    out = np.empty(mats.shape[:2])
    for lo in range(0, mats.shape[0], _CHUNK):
        a = mats[lo:lo + _CHUNK].copy()
        _jacobi_lockstep(a)
        out[lo:lo + _CHUNK] = np.sort(np.diagonal(a, axis1=1, axis2=2).real, axis=1)
    return out


def _xlog2x(x):
    x = np.asarray(x, dtype=float)
    pos = x > 0.0
    return np.where(pos, x * np.log2(np.where(pos, x, 1.0)), 0.0)


def _projectors(dirs):
    nx, ny, nz = dirs[:, 0], dirs[:, 1], dirs[:, 2]
    plus = np.empty((dirs.shape[0], 2, 2), dtype=np.complex128)
    plus[:, 0, 0] = 0.5 * (1.0 + nz)
    plus[:, 1, 1] = 0.5 * (1.0 - nz)
    plus[:, 0, 1] = 0.5 * (nx - 1j * ny)
    plus[:, 1, 0] = 0.5 * (nx + 1j * ny)
    minus = np.eye(2)[None] - plus
    return plus, minus


def post_measurement_batch(rho, dirs):
    dirs = np.asarray(dirs, dtype=float)
    r = np.asarray(rho, dtype=np.complex128).reshape(2, 2, 2, 2)
    out = np.zeros((dirs.shape[0], 4, 4), dtype=np.complex128)
    for pr in _projectors(dirs):
        # (I x P) rho (I x P) with rho indexed [a, b, a', b']
        blk = np.einsum("kbc,acdf,kfe->kabde", pr, r, pr, optimize=True)
        out += blk.reshape(-1, 4, 4)
    return out


def measured_entropies(rho, dirs):
    dirs = np.asarray(dirs, dtype=float)
    out = np.empty(dirs.shape[0])
    for lo in range(0, dirs.shape[0], _CHUNK):
        w = eigvalsh_batch(post_measurement_batch(rho, dirs[lo:lo + _CHUNK]))
        out[lo:lo + _CHUNK] = -_xlog2x(w).sum(axis=1)
    return out


def conditional_entropies(rho, dirs):
    dirs = np.asarray(dirs, dtype=float)
    r = np.asarray(rho, dtype=np.complex128).reshape(2, 2, 2, 2)
    out = np.zeros(dirs.shape[0])
    for pr in _projectors(dirs):
        # unnormalized conditional state of qubit a: tr_b[(I x P) rho]
        blk = np.einsum("abcd,kdb->kac", r, pr, optimize=True)
        w = eigvalsh_batch(blk)
        pk = w.sum(axis=1)
        out += -_xlog2x(np.maximum(w, 0.0)).sum(axis=1) + _xlog2x(pk)
    return out


def f_phi_theta(phi, theta):
    phi = np.asarray(phi, dtype=float)
    theta = np.asarray(theta, dtype=float)
    args = np.stack([1.0 + phi - theta, 1.0 + phi + theta, 1.0 - phi - theta, 1.0 - phi + theta])
    bad = (args < -LOG_CLAMP).any(axis=0)
    args = np.where(args < 0.0, 0.0, args)
    val = 2.0 - 0.25 * _xlog2x(args).sum(axis=0)
    return np.where(bad, np.nan, val)


def reduced_values(s, c, dirs):
    s = np.asarray(s, dtype=float)
    c = np.asarray(c, dtype=float)
    dirs = np.asarray(dirs, dtype=float)
    theta = np.sqrt(((c * dirs) ** 2).sum(axis=1))
    return f_phi_theta(np.abs(s * dirs[:, 2]), theta)


def reduced_grid_min(s, c, dirs):
    s = np.asarray(s, dtype=float)
    c = np.asarray(c, dtype=float)
    dirs = np.asarray(dirs, dtype=float)
    nb, k = s.shape[0], dirs.shape[0]
    idx = np.empty(nb, dtype=np.int64)
    val = np.empty(nb)
    step = max(1, (1 << 22) // max(k, 1))
    d2 = dirs ** 2
    for lo in range(0, nb, step):
        sl = slice(lo, lo + step)
        theta = np.sqrt((c[sl] ** 2) @ d2.T)
        phi = np.abs(s[sl, None] * dirs[None, :, 2])
        vals = f_phi_theta(phi, theta)
        vals = np.where(np.isnan(vals), np.inf, vals)
        j = np.argmin(vals, axis=1)
        idx[sl] = j
        val[sl] = vals[np.arange(j.shape[0]), j]
    return idx, val
