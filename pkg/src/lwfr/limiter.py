"""Post-step limiting.

TVD/TVB minmod limiting of the element polynomial against neighbouring
cell averages (conservative or characteristic variables) and a scaling
limiter that pulls nodal values toward the cell mean until density and
pressure (or scalar bounds) are admissible at every check point.
"""

from dataclasses import dataclass

import numpy as np

from .errors import PositivityError

NONE = "none"
TVB = "tvb"


@dataclass
class LimiterConfig:
    kind: str = NONE
    M: float = 0.0
    characteristic: bool = False
    positivity: bool = False
    eps: float = 1e-13


def minmod(a, b, c):
    """Componentwise minmod of three arrays."""
    sa, sb, sc = np.sign(a), np.sign(b), np.sign(c)
    agree = (sa == sb) & (sb == sc)
    mag = np.minimum(np.abs(a), np.minimum(np.abs(b), np.abs(c)))
    return np.where(agree, sa * mag, 0.0)


def tvb_minmod(a, b, c, M, dx):
    """minmod relaxed near smooth extrema: a passes through when
    |a| <= M dx^2."""
    out = minmod(a, b, c)
    return np.where(np.abs(a) <= M * dx * dx, a, out)


def _char_transform(law, ubar, diffs, direction):
    """Project difference vectors onto characteristic variables at the
    cell-average state; returns (projected diffs, R) or None on failure."""
    try:
        if law.dim == 1:
            R, _, L = law.eigen(ubar)
        elif direction == "x":
            R, _, L = law.eigen_x(ubar)
        else:
            R, _, L = law.eigen_y(ubar)
    except (AttributeError, np.linalg.LinAlgError, PositivityError):
        return None
    if not (np.all(np.isfinite(R)) and np.all(np.isfinite(L))):
        return None
    proj = [np.einsum("...ij,...j->...i", L, d) for d in diffs]
    return proj, R


def _limit_slopes(back, fwd, db, df, M, dx):
    bm = tvb_minmod(back, db, df, M, dx)
    fm = tvb_minmod(fwd, db, df, M, dx)
    changed = (bm != back) | (fm != fwd)
    return bm, fm, changed


def tvd_limit_1d(u, ubar, ubar_left, ubar_right, ops, config, dx, law=None):
    """Limit all elements of a 1-D field.

    u            -- (ncell, nd, nv) nodal values
    ubar*        -- (ncell, nv) cell averages (own and neighbours)
    Returns the possibly modified field (a new array when any cell changes).
    """
    if config.kind == NONE:
        return u
    ul_face = np.einsum("j,cjv->cv", ops.V_L, u)
    ur_face = np.einsum("j,cjv->cv", ops.V_R, u)
    back = ubar - ul_face
    fwd = ur_face - ubar
    db = ubar - ubar_left
    df = ubar_right - ubar

    R = None
    if config.characteristic and law is not None and law.has_eigen:
        res = _char_transform(law, ubar, [back, fwd, db, df], "x")
        if res is not None:
            (back, fwd, db, df), R = res

    bm, fm, changed = _limit_slopes(back, fwd, db, df, config.M, dx)
    cell_changed = changed.any(axis=-1)
    if not cell_changed.any():
        return u
    slope = 0.5 * (bm + fm)
    if R is not None:
        slope = np.einsum("...ij,...j->...i", R, slope)
    xi = 2.0 * ops.nodes - 1.0
    rebuilt = ubar[:, None, :] + slope[:, None, :] * xi[None, :, None]
    return np.where(cell_changed[:, None, None], rebuilt, u)


def tvd_limit_2d(u, ubar, nbr, ops, config, dx, dy, law=None):
    """Dimension-split limiting of a 2-D tensor-product field.

    u    -- (ncx, ncy, nd, nd, nv)
    ubar -- (ncx, ncy, nv) cell averages
    nbr  -- dict with neighbour average fields "W","E","S","N"
    """
    if config.kind == NONE:
        return u
    w = ops.weights / ops.weights.sum()
    face_w = np.einsum("i,j,xyijv->xyv", ops.V_L, w, u)
    face_e = np.einsum("i,j,xyijv->xyv", ops.V_R, w, u)
    face_s = np.einsum("i,j,xyijv->xyv", w, ops.V_L, u)
    face_n = np.einsum("i,j,xyijv->xyv", w, ops.V_R, u)

    back_x = ubar - face_w
    fwd_x = face_e - ubar
    db_x = ubar - nbr["W"]
    df_x = nbr["E"] - ubar
    back_y = ubar - face_s
    fwd_y = face_n - ubar
    db_y = ubar - nbr["S"]
    df_y = nbr["N"] - ubar

    Rx = Ry = None
    if config.characteristic and law is not None and law.has_eigen:
        res = _char_transform(law, ubar, [back_x, fwd_x, db_x, df_x], "x")
        if res is not None:
            (back_x, fwd_x, db_x, df_x), Rx = res
        res = _char_transform(law, ubar, [back_y, fwd_y, db_y, df_y], "y")
        if res is not None:
            (back_y, fwd_y, db_y, df_y), Ry = res

    bmx, fmx, chx = _limit_slopes(back_x, fwd_x, db_x, df_x, config.M, dx)
    bmy, fmy, chy = _limit_slopes(back_y, fwd_y, db_y, df_y, config.M, dy)
    cell_changed = chx.any(axis=-1) | chy.any(axis=-1)
    if not cell_changed.any():
        return u
    sx = 0.5 * (bmx + fmx)
    sy = 0.5 * (bmy + fmy)
    if Rx is not None:
        sx = np.einsum("...ij,...j->...i", Rx, sx)
    if Ry is not None:
        sy = np.einsum("...ij,...j->...i", Ry, sy)
    xi = 2.0 * ops.nodes - 1.0
    rebuilt = (
        ubar[:, :, None, None, :]
        + sx[:, :, None, None, :] * xi[None, None, :, None, None]
        + sy[:, :, None, None, :] * xi[None, None, None, :, None]
    )
    return np.where(cell_changed[:, :, None, None, None], rebuilt, u)


# ---------------------------------------------------------------------------
# positivity / bound preservation


def _admissible(law, states, eps, bounds):
    """Boolean mask over leading cell axis: every check state admissible."""
    if bounds is not None:
        lo, hi = bounds
        s = states[..., 0]
        return (s.min(axis=-1) >= lo - eps) & (s.max(axis=-1) <= hi + eps)
    rho = states[..., 0]
    if law.dim == 1:
        mom2 = states[..., 1] ** 2
        E = states[..., 2]
    else:
        mom2 = states[..., 1] ** 2 + states[..., 2] ** 2
        E = states[..., 3]
    with np.errstate(divide="ignore", invalid="ignore"):
        p = (law.gamma - 1.0) * (E - 0.5 * mom2 / rho)
    ok = (rho >= eps) & (p >= eps)
    return ok.all(axis=-1)


def _bisect_theta(ubar, pts, law, eps, bounds, max_iter=40):
    """Largest theta in [0,1] keeping ubar + theta*(pts-ubar) admissible
    at every check point; vectorized bisection over cells."""
    ncell = pts.shape[0]
    dev = pts - ubar[:, None, :]
    if not _admissible(law, ubar[:, None, :], eps, bounds).all():
        bad = np.nonzero(~_admissible(law, ubar[:, None, :], eps, bounds))[0]
        raise PositivityError(f"cell average non-physical in cells {bad[:5].tolist()}")
    theta = np.ones(ncell)
    ok_full = _admissible(law, pts, eps, bounds)
    todo = ~ok_full
    if not todo.any():
        return theta
    lo = np.zeros(todo.sum())
    hi = np.ones(todo.sum())
    sub_bar = ubar[todo][:, None, :]
    sub_dev = dev[todo]
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        ok = _admissible(law, sub_bar + mid[:, None, None] * sub_dev, eps, bounds)
        lo = np.where(ok, mid, lo)
        hi = np.where(ok, hi, mid)
    theta[todo] = lo
    return theta


def positivity_scale_1d(u, ops, law, eps=1e-13, bounds=None):
    """Scale each element toward its mean until density/pressure (or the
    scalar bounds) hold at the solution points and both faces."""
    ncell, nd, nv = u.shape
    ubar = np.einsum("j,cjv->cv", ops.weights / ops.weights.sum(), u)
    faces = np.stack(
        [np.einsum("j,cjv->cv", ops.V_L, u), np.einsum("j,cjv->cv", ops.V_R, u)],
        axis=1,
    )
    pts = np.concatenate([u, faces], axis=1)
    theta = _bisect_theta(ubar, pts, law, eps, bounds)
    return ubar[:, None, :] + theta[:, None, None] * (u - ubar[:, None, :])


def positivity_scale_2d(u, ops, law, eps=1e-13, bounds=None):
    ncx, ncy, nd, _, nv = u.shape
    w = ops.weights / ops.weights.sum()
    ubar = np.einsum("i,j,xyijv->xyv", w, w, u)
    flat = u.reshape(ncx * ncy, nd * nd, nv)
    faces = [
        np.einsum("i,xyijv->xyjv", ops.V_L, u),
        np.einsum("i,xyijv->xyjv", ops.V_R, u),
        np.einsum("j,xyijv->xyiv", ops.V_L, u),
        np.einsum("j,xyijv->xyiv", ops.V_R, u),
    ]
    pts = np.concatenate(
        [flat] + [f.reshape(ncx * ncy, nd, nv) for f in faces], axis=1
    )
    theta = _bisect_theta(ubar.reshape(ncx * ncy, nv), pts, law, eps, bounds)
    theta = theta.reshape(ncx, ncy, 1, 1, 1)
    ub = ubar[:, :, None, None, :]
    return ub + theta * (u - ub)
