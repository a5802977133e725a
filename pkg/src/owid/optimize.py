"""Direction grids and batched Nelder-Mead refinement on the unit sphere.

Refinement works in tangent-plane coordinates around a base direction,
``n(a, b) = normalize(n0 + a e1 + b e2)``, which is smooth at the poles
where polar/azimuth angles are not.
"""

import numpy as np

_ZERO = 1e-15


def _clean(dirs):
    dirs = np.where(np.abs(dirs) < _ZERO, 0.0, dirs)
    return dirs / np.linalg.norm(dirs, axis=1, keepdims=True)


def _spherical(polar, azimuth):
    return np.stack([np.sin(polar) * np.cos(azimuth), np.sin(polar) * np.sin(azimuth), np.cos(polar)], axis=-1)


def hemisphere_grid(polar_steps, azimuth_steps):
    """Upper-hemisphere directions in lexicographic (polar, azimuth) order.

    Polar angles run over [0, pi/2] inclusive, azimuths over [0, 2 pi).
    The pole appears once. Every coordinate axis is on the grid whenever
    ``azimuth_steps`` is a multiple of 4.
    """
    polar = np.linspace(0.0, np.pi / 2, polar_steps + 1)[1:]
    azimuth = np.arange(azimuth_steps) * (2 * np.pi / azimuth_steps)
    pp, aa = np.meshgrid(polar, azimuth, indexing="ij")
    body = _spherical(pp.ravel(), aa.ravel())
    return _clean(np.vstack([[0.0, 0.0, 1.0], body]))


def octant_grid(polar_steps, azimuth_steps):
    """Positive-octant directions; azimuth spacing matches ``hemisphere_grid``."""
    quarter = max(azimuth_steps // 4, 1)
    polar = np.linspace(0.0, np.pi / 2, polar_steps + 1)[1:]
    azimuth = np.linspace(0.0, np.pi / 2, quarter + 1)
    pp, aa = np.meshgrid(polar, azimuth, indexing="ij")
    body = _spherical(pp.ravel(), aa.ravel())
    return _clean(np.vstack([[0.0, 0.0, 1.0], body]))


def tangent_frames(n0):
    n0 = np.atleast_2d(np.asarray(n0, dtype=float))
    helper = np.zeros_like(n0)
    helper[np.arange(n0.shape[0]), np.argmin(np.abs(n0), axis=1)] = 1.0
    e1 = helper - (helper * n0).sum(axis=1, keepdims=True) * n0
    e1 /= np.linalg.norm(e1, axis=1, keepdims=True)
    e2 = np.cross(n0, e1)
    return e1, e2


def from_tangent(n0, e1, e2, ab):
    v = n0 + ab[:, :1] * e1 + ab[:, 1:] * e2
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def nelder_mead_batch(fun, x0, step, max_iter, tol):
    """Minimize ``len(x0)`` independent 2-D problems with Nelder-Mead in lockstep.

    ``fun(points, idx)`` evaluates problem ``idx[m]`` at ``points[m]`` and
    returns an array of values; NaN is treated as +inf. A problem stops once
    the spread of values over its simplex is at most ``tol``.

    Returns ``(x_best, f_best, converged, iterations)``.
    """
    x0 = np.asarray(x0, dtype=float)
    nprob = x0.shape[0]

    def ev(points, idx):
        v = np.asarray(fun(points, idx), dtype=float)
        return np.where(np.isnan(v), np.inf, v)

    simplex = np.stack([x0, x0 + [step, 0.0], x0 + [0.0, step]], axis=1)
    fv = ev(simplex.reshape(-1, 2), np.repeat(np.arange(nprob), 3)).reshape(nprob, 3)
    iters = np.zeros(nprob, dtype=np.int64)

    def order():
        o = np.argsort(fv, axis=1, kind="stable")
        return np.take_along_axis(simplex, o[..., None], axis=1), np.take_along_axis(fv, o, axis=1)

    for _ in range(max_iter):
        simplex, fv = order()
        act = np.flatnonzero(fv[:, 2] - fv[:, 0] > tol)
        if act.size == 0:
            break
        iters[act] += 1
        S, F = simplex[act].copy(), fv[act].copy()
        cen = 0.5 * (S[:, 0] + S[:, 1])
        xw = S[:, 2]
        xr = 2.0 * cen - xw
        fr = ev(xr, act)
        new_x, new_f = xr.copy(), fr.copy()

        expand = fr < F[:, 0]
        if expand.any():
            xe = cen[expand] + 2.0 * (xr[expand] - cen[expand])
            fe = ev(xe, act[expand])
            take = fe < fr[expand]
            sel = np.flatnonzero(expand)[take]
            new_x[sel], new_f[sel] = xe[take], fe[take]

        contract = fr >= F[:, 1]
        shrink = np.zeros(act.size, dtype=bool)
        if contract.any():
            outside = contract & (fr < F[:, 2])
            xc = np.where(outside[:, None], cen + 0.5 * (xr - cen), cen + 0.5 * (xw - cen))
            ci = np.flatnonzero(contract)
            fc = ev(xc[ci], act[ci])
            ok = np.where(outside[ci], fc <= fr[ci], fc < F[ci, 2])
            new_x[ci[ok]], new_f[ci[ok]] = xc[ci[ok]], fc[ok]
            shrink[ci[~ok]] = True

        keep = ~shrink
        S[keep, 2], F[keep, 2] = new_x[keep], new_f[keep]
        if shrink.any():
            si = np.flatnonzero(shrink)
            pts = S[si, :1] + 0.5 * (S[si, 1:] - S[si, :1])
            fs = ev(pts.reshape(-1, 2), np.repeat(act[si], 2)).reshape(-1, 2)
            S[si, 1:], F[si, 1:] = pts, fs
        simplex[act], fv[act] = S, F

    simplex, fv = order()
    converged = fv[:, 2] - fv[:, 0] <= tol
    return simplex[:, 0], fv[:, 0], converged, iters


def refine_on_sphere(fun, n0, step, max_iter, tol):
    """Nelder-Mead around each base direction, then one restart from the result.

    ``fun(dirs, idx)`` evaluates problem ``idx[m]`` at unit vector ``dirs[m]``.
    Returns ``(directions, values, converged)``.
    """
    n = np.atleast_2d(np.asarray(n0, dtype=float))
    best = None
    for scale in (1.0, 0.1):
        e1, e2 = tangent_frames(n)

        def on_plane(ab, idx, n=n, e1=e1, e2=e2):
            return fun(from_tangent(n[idx], e1[idx], e2[idx], ab), idx)

        ab, fval, conv, _ = nelder_mead_batch(on_plane, np.zeros((n.shape[0], 2)), step * scale, max_iter, tol)
        n = from_tangent(n, e1, e2, ab)
        best = (n, fval, conv)
    return best
