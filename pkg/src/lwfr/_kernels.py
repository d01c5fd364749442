"""Fused loops for the 2-D hot path.

The 2-D single-step sweep is memory-bandwidth bound on chains of
elementwise numpy expressions (probe-state combinations, flux stencils,
the nodal update).  These numba kernels fuse each chain into one pass
over the arrays.  Loop order is fixed, so results are deterministic;
no fastmath, so the arithmetic matches the plain numpy evaluation to
rounding order.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def _lc2(o, a0, c0, a1, c1):
    for i in range(o.size):
        o[i] = c0 * a0[i] + c1 * a1[i]


@njit(cache=True)
def _lc3(o, a0, c0, a1, c1, a2, c2):
    for i in range(o.size):
        o[i] = c0 * a0[i] + c1 * a1[i] + c2 * a2[i]


@njit(cache=True)
def _lc4(o, a0, c0, a1, c1, a2, c2, a3, c3):
    for i in range(o.size):
        o[i] = c0 * a0[i] + c1 * a1[i] + c2 * a2[i] + c3 * a3[i]


@njit(cache=True)
def _lc5(o, a0, c0, a1, c1, a2, c2, a3, c3, a4, c4):
    for i in range(o.size):
        o[i] = (c0 * a0[i] + c1 * a1[i] + c2 * a2[i] + c3 * a3[i]
                + c4 * a4[i])


@njit(cache=True)
def _lc6(o, a0, c0, a1, c1, a2, c2, a3, c3, a4, c4, a5, c5):
    for i in range(o.size):
        o[i] = (c0 * a0[i] + c1 * a1[i] + c2 * a2[i] + c3 * a3[i]
                + c4 * a4[i] + c5 * a5[i])


def lincomb(coeffs, arrays):
    """sum_k coeffs[k] * arrays[k] in a single fused pass (2..6 terms)."""
    flats = [np.ascontiguousarray(a).reshape(-1) for a in arrays]
    out = np.empty_like(arrays[0])
    o = out.reshape(-1)
    args = []
    for a, c in zip(flats, coeffs):
        args.append(a)
        args.append(float(c))
    k = len(arrays)
    if k == 2:
        _lc2(o, *args)
    elif k == 3:
        _lc3(o, *args)
    elif k == 4:
        _lc4(o, *args)
    elif k == 5:
        _lc5(o, *args)
    elif k == 6:
        _lc6(o, *args)
    else:
        acc = coeffs[0] * arrays[0]
        for c, a in zip(coeffs[1:], arrays[1:]):
            acc += c * a
        return acc
    return out


@njit(cache=True)
def _bmm_scaled(D, a, s):
    """out[b, i, m] = s * sum_k D[i, k] * a[b, k, m]."""
    n, nd, m = a.shape
    out = np.empty_like(a)
    for b in range(n):
        for i in range(nd):
            for j in range(m):
                acc = 0.0
                for k in range(nd):
                    acc += D[i, k] * a[b, k, j]
                out[b, i, j] = s * acc
    return out


def contract_x(D, a, s):
    """s * D applied along the x-node axis of (ncx, ncy, nd, nd, nv)."""
    ncx, ncy, nd, _, nv = a.shape
    flat = np.ascontiguousarray(a).reshape(ncx * ncy, nd, nd * nv)
    return _bmm_scaled(D, flat, s).reshape(a.shape)


def contract_y(D, a, s):
    """s * D applied along the y-node axis of (ncx, ncy, nd, nd, nv)."""
    ncx, ncy, nd, _, nv = a.shape
    flat = np.ascontiguousarray(a).reshape(ncx * ncy * nd, nd, nv)
    return _bmm_scaled(D, flat, s).reshape(a.shape)


@njit(cache=True)
def _update2d(u, F, G, D1, bL, bR, fw, fe, gs, gn, fx, fy):
    ncx, ncy, nd, _, nv = u.shape
    out = np.empty_like(u)
    for x in range(ncx):
        for y in range(ncy):
            for i in range(nd):
                for j in range(nd):
                    for v in range(nv):
                        ax = bL[i] * fw[x, y, j, v] + bR[i] * fe[x, y, j, v]
                        for k in range(nd):
                            ax += D1[i, k] * F[x, y, k, j, v]
                        ay = bL[j] * gs[x, y, i, v] + bR[j] * gn[x, y, i, v]
                        for k in range(nd):
                            ay += D1[j, k] * G[x, y, i, k, v]
                        out[x, y, i, j, v] = u[x, y, i, j, v] - fx * ax - fy * ay
    return out


def update_2d(u, F, G, D1, bL, bR, fnum_w, fnum_e, gnum_s, gnum_n, fx, fy):
    """Fused nodal update u - fx*(D1 F + bL fw + bR fe) - fy*(G D1^T + ...)."""
    c = np.ascontiguousarray
    return _update2d(c(u), c(F), c(G), D1, bL, bR, c(fnum_w), c(fnum_e),
                     c(gnum_s), c(gnum_n), float(fx), float(fy))


@njit(cache=True)
def _euler_pair(u, gamma):
    n = u.shape[0]
    f = np.empty_like(u)
    g = np.empty_like(u)
    for i in range(n):
        rho = u[i, 0]
        mx = u[i, 1]
        my = u[i, 2]
        E = u[i, 3]
        vx = mx / rho
        vy = my / rho
        p = (gamma - 1.0) * (E - 0.5 * (mx * vx + my * vy))
        Ep = E + p
        f[i, 0] = mx
        f[i, 1] = p + mx * vx
        f[i, 2] = mx * vy
        f[i, 3] = Ep * vx
        g[i, 0] = my
        g[i, 1] = mx * vy
        g[i, 2] = p + my * vy
        g[i, 3] = Ep * vy
    return f, g


def euler_flux_pair(u, gamma):
    """Both 2-D Euler flux components in one pass over the state array."""
    flat = np.ascontiguousarray(u).reshape(-1, u.shape[-1])
    f, g = _euler_pair(flat, gamma)
    return f.reshape(u.shape), g.reshape(u.shape)


@njit(cache=True)
def _euler_x(u, gamma):
    n = u.shape[0]
    f = np.empty_like(u)
    for i in range(n):
        rho = u[i, 0]
        mx = u[i, 1]
        my = u[i, 2]
        E = u[i, 3]
        vx = mx / rho
        vy = my / rho
        p = (gamma - 1.0) * (E - 0.5 * (mx * vx + my * vy))
        f[i, 0] = mx
        f[i, 1] = p + mx * vx
        f[i, 2] = mx * vy
        f[i, 3] = (E + p) * vx
    return f


@njit(cache=True)
def _euler_y(u, gamma):
    n = u.shape[0]
    g = np.empty_like(u)
    for i in range(n):
        rho = u[i, 0]
        mx = u[i, 1]
        my = u[i, 2]
        E = u[i, 3]
        vx = mx / rho
        vy = my / rho
        p = (gamma - 1.0) * (E - 0.5 * (mx * vx + my * vy))
        g[i, 0] = my
        g[i, 1] = mx * vy
        g[i, 2] = p + my * vy
        g[i, 3] = (E + p) * vy
    return g


def euler_flux_x(u, gamma):
    """x-component of the 2-D Euler flux, fused; same arithmetic order as
    the pair kernel."""
    flat = np.ascontiguousarray(u).reshape(-1, u.shape[-1])
    return _euler_x(flat, gamma).reshape(u.shape)


def euler_flux_y(u, gamma):
    """y-component of the 2-D Euler flux, fused."""
    flat = np.ascontiguousarray(u).reshape(-1, u.shape[-1])
    return _euler_y(flat, gamma).reshape(u.shape)
