"""Single-step Lax-Wendroff engine.

Computes time-averaged nodal fluxes and solutions with the Jacobian-free
finite-difference ladders (orders 2..5), the face values for the AE and
EA variants, the continuous-flux derivative and the nodal update, in one
and two dimensions.  All arrays carry the variable index last and the
routines are vectorized over all elements at once.
"""

from dataclasses import dataclass, field

import numpy as np

from ._kernels import contract_x, contract_y, lincomb, update_2d
from .errors import ConfigurationError

AE = "ae"
EA = "ea"

# 1/(m+1)! weights for the time average, m = 0..4
_AVG = [1.0, 1.0 / 2.0, 1.0 / 6.0, 1.0 / 24.0, 1.0 / 120.0]


@dataclass
class ElementWorkspace1D:
    """Per-sweep element data for the 1-D scheme."""

    u: np.ndarray            # (ncell, nd, nv) nodal solution at t_n
    u_m: list                # scaled time derivatives u^(1..N)
    U: np.ndarray            # time-average solution at nodes
    F: np.ndarray            # time-average flux at nodes
    u_face: tuple            # (left, right) traces of u at t_n, (ncell, nv)
    U_face: tuple            # traces of the time-average solution
    F_face: tuple            # time-average flux at faces (AE or EA)


def _extrap(V, u):
    return np.einsum("j,cjv->cv", V, u)


def _nodal_ladder_1d(flux, u, scale, D, n_deg):
    """u^(m), f^(m) ladders of the approximate LW procedure at the nodes.

    ``flux`` maps a nodal state array to the nodal flux; ``scale`` is
    -dt/dx with broadcast shape.  Returns (u_m, f_m) lists, 1-based.
    """

    def ddx(a):
        return scale * np.einsum("ij,cjv->civ", D, a)

    f = flux(u)
    u1 = ddx(f)
    if n_deg == 1:
        f1 = 0.5 * (flux(u + u1) - flux(u - u1))
        return [u1], [f1]
    if n_deg == 2:
        f1 = 0.5 * (flux(u + u1) - flux(u - u1))
        u2 = ddx(f1)
        f2 = flux(u + u1 + 0.5 * u2) - 2.0 * f + flux(u - u1 + 0.5 * u2)
        return [u1, u2], [f1, f2]
    if n_deg == 3:
        f1 = (
            -flux(u + 2 * u1) + 8 * flux(u + u1) - 8 * flux(u - u1) + flux(u - 2 * u1)
        ) / 12.0
        u2 = ddx(f1)
        f2 = flux(u + u1 + 0.5 * u2) - 2.0 * f + flux(u - u1 + 0.5 * u2)
        u3 = ddx(f2)
        f3 = 0.5 * (
            flux(u + 2 * u1 + 2 * u2 + (4.0 / 3.0) * u3)
            - 2 * flux(u + u1 + 0.5 * u2 + u3 / 6.0)
            + 2 * flux(u - u1 + 0.5 * u2 - u3 / 6.0)
            - flux(u - 2 * u1 + 2 * u2 - (4.0 / 3.0) * u3)
        )
        return [u1, u2, u3], [f1, f2, f3]
    if n_deg == 4:
        f1 = (
            -flux(u + 2 * u1) + 8 * flux(u + u1) - 8 * flux(u - u1) + flux(u - 2 * u1)
        ) / 12.0
        u2 = ddx(f1)
        f2 = (
            -flux(u + 2 * u1 + 2 * u2)
            + 16 * flux(u + u1 + 0.5 * u2)
            - 30 * f
            + 16 * flux(u - u1 + 0.5 * u2)
            - flux(u - 2 * u1 + 2 * u2)
        ) / 12.0
        u3 = ddx(f2)
        f3 = 0.5 * (
            flux(u + 2 * u1 + 2 * u2 + (4.0 / 3.0) * u3)
            - 2 * flux(u + u1 + 0.5 * u2 + u3 / 6.0)
            + 2 * flux(u - u1 + 0.5 * u2 - u3 / 6.0)
            - flux(u - 2 * u1 + 2 * u2 - (4.0 / 3.0) * u3)
        )
        u4 = ddx(f3)
        f4 = (
            flux(u + 2 * u1 + 2 * u2 + (4.0 / 3.0) * u3 + (2.0 / 3.0) * u4)
            - 4 * flux(u + u1 + 0.5 * u2 + u3 / 6.0 + u4 / 24.0)
            + 6 * f
            - 4 * flux(u - u1 + 0.5 * u2 - u3 / 6.0 + u4 / 24.0)
            + flux(u - 2 * u1 + 2 * u2 - (4.0 / 3.0) * u3 + (2.0 / 3.0) * u4)
        )
        return [u1, u2, u3, u4], [f1, f2, f3, f4]
    raise ConfigurationError(f"LW ladders implemented for degrees 1..4, got {n_deg}")


def _face_ladder(face_flux, V, u, u_m):
    """EA construction: extrapolate the solution and its time derivatives
    to one face and run the nodal time-derivative stencils there, term by
    term.  With endpoint nodes the extrapolation is a node selection and
    the result matches the extrapolated nodal time average exactly.

    ``face_flux`` maps a face state (ncell, nv) to the face flux.
    """
    n_deg = len(u_m)
    e = [_extrap(V, a) for a in u_m]
    u = _extrap(V, u)
    f = face_flux(u)
    flux = face_flux
    if n_deg == 1:
        u1 = e[0]
        f1 = 0.5 * (flux(u + u1) - flux(u - u1))
        return _time_average(f, [f1])
    if n_deg == 2:
        u1, u2 = e
        f1 = 0.5 * (flux(u + u1) - flux(u - u1))
        f2 = flux(u + u1 + 0.5 * u2) - 2.0 * f + flux(u - u1 + 0.5 * u2)
        return _time_average(f, [f1, f2])
    if n_deg == 3:
        u1, u2, u3 = e
        f1 = (
            -flux(u + 2 * u1) + 8 * flux(u + u1) - 8 * flux(u - u1) + flux(u - 2 * u1)
        ) / 12.0
        f2 = flux(u + u1 + 0.5 * u2) - 2.0 * f + flux(u - u1 + 0.5 * u2)
        f3 = 0.5 * (
            flux(u + 2 * u1 + 2 * u2 + (4.0 / 3.0) * u3)
            - 2 * flux(u + u1 + 0.5 * u2 + u3 / 6.0)
            + 2 * flux(u - u1 + 0.5 * u2 - u3 / 6.0)
            - flux(u - 2 * u1 + 2 * u2 - (4.0 / 3.0) * u3)
        )
        return _time_average(f, [f1, f2, f3])
    if n_deg == 4:
        u1, u2, u3, u4 = e
        f1 = (
            -flux(u + 2 * u1) + 8 * flux(u + u1) - 8 * flux(u - u1) + flux(u - 2 * u1)
        ) / 12.0
        f2 = (
            -flux(u + 2 * u1 + 2 * u2)
            + 16 * flux(u + u1 + 0.5 * u2)
            - 30 * f
            + 16 * flux(u - u1 + 0.5 * u2)
            - flux(u - 2 * u1 + 2 * u2)
        ) / 12.0
        f3 = 0.5 * (
            flux(u + 2 * u1 + 2 * u2 + (4.0 / 3.0) * u3)
            - 2 * flux(u + u1 + 0.5 * u2 + u3 / 6.0)
            + 2 * flux(u - u1 + 0.5 * u2 - u3 / 6.0)
            - flux(u - 2 * u1 + 2 * u2 - (4.0 / 3.0) * u3)
        )
        f4 = (
            flux(u + 2 * u1 + 2 * u2 + (4.0 / 3.0) * u3 + (2.0 / 3.0) * u4)
            - 4 * flux(u + u1 + 0.5 * u2 + u3 / 6.0 + u4 / 24.0)
            + 6 * f
            - 4 * flux(u - u1 + 0.5 * u2 - u3 / 6.0 + u4 / 24.0)
            + flux(u - 2 * u1 + 2 * u2 - (4.0 / 3.0) * u3 + (2.0 / 3.0) * u4)
        )
        return _time_average(f, [f1, f2, f3, f4])
    raise ConfigurationError(f"EA ladders implemented for degrees 1..4, got {n_deg}")


def _time_average(u, u_m):
    out = u.copy()
    for m, um in enumerate(u_m, start=1):
        out += _AVG[m] * um
    return out


def approx_lw_element_1d(law, ops, u, dt, dx, x_nodes, x_faces, face_mode=AE):
    """Approximate Lax-Wendroff procedure for all elements of a 1-D mesh.

    u        -- (ncell, nd, nv) nodal solution
    dx       -- scalar or (ncell,) cell widths
    x_nodes  -- (ncell, nd) physical node coordinates
    x_faces  -- (ncell+1,) face coordinates (for position-dependent fluxes)
    """
    n_deg = ops.degree
    if not 1 <= n_deg <= 4:
        raise ConfigurationError(f"degree must be in 1..4, got {n_deg}")
    dx = np.asarray(dx, dtype=float)
    scale = -dt / dx
    if scale.ndim:
        scale = scale[:, None, None]

    def flux(a):
        return law.flux(x_nodes, a)

    u_m, f_m = _nodal_ladder_1d(flux, u, scale, ops.D, n_deg)
    F = _time_average(law.flux(x_nodes, u), f_m)
    U = _time_average(u, u_m)

    u_face = (_extrap(ops.V_L, u), _extrap(ops.V_R, u))
    U_face = (_extrap(ops.V_L, U), _extrap(ops.V_R, U))
    if face_mode == AE:
        F_face = (_extrap(ops.V_L, F), _extrap(ops.V_R, F))
    elif face_mode == EA:
        xl = x_faces[:-1]
        xr = x_faces[1:]
        F_face = (
            _face_ladder(lambda s: law.flux(xl, s), ops.V_L, u, u_m),
            _face_ladder(lambda s: law.flux(xr, s), ops.V_R, u, u_m),
        )
    else:
        raise ConfigurationError(f"unknown face mode {face_mode!r}")
    return ElementWorkspace1D(u=u, u_m=u_m, U=U, F=F, u_face=u_face,
                              U_face=U_face, F_face=F_face)


def flux_derivative_1d(ops, F, fnum_left, fnum_right):
    """d(F_h)/dxi at the nodes: fnum_left*b_L + D1*F + fnum_right*b_R."""
    out = np.einsum("ij,cjv->civ", ops.D1, F)
    out += fnum_left[:, None, :] * ops.b_L[None, :, None]
    out += fnum_right[:, None, :] * ops.b_R[None, :, None]
    return out


def lw_update_element_1d(u_old, deriv, dt, dx):
    dx = np.asarray(dx, dtype=float)
    fac = dt / dx
    if fac.ndim:
        fac = fac[:, None, None]
    return u_old - fac * deriv


# ---------------------------------------------------------------------------
# two dimensions


@dataclass
class ElementWorkspace2D:
    """Per-sweep element data for the 2-D tensor-product scheme.

    Node arrays are (ncx, ncy, nd, nd, nv) with the x-node index first.
    Face arrays are (ncx, ncy, nd, nv), indexed by the face-line point.
    """

    u: np.ndarray
    u_m: list
    U: np.ndarray
    F: np.ndarray
    G: np.ndarray
    u_face: dict = field(default_factory=dict)   # keys "W","E","S","N"
    U_face: dict = field(default_factory=dict)
    F_face: dict = field(default_factory=dict)   # x-flux on W/E, y-flux on S/N


def _ex_x(V, a):
    return np.einsum("i,xyijv->xyjv", V, a)


def _ex_y(V, a):
    return np.einsum("j,xyijv->xyiv", V, a)


# stencil weights shared by the ladders: first-derivative (2nd/4th order),
# second derivative (2nd/4th order), third and fourth central differences
_C1 = (0.5, -0.5)
_C1_4 = (-1.0 / 12.0, 8.0 / 12.0, -8.0 / 12.0, 1.0 / 12.0)
_C2 = (1.0, -2.0, 1.0)
_C2_4 = (-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0)
_C3 = (0.5, -1.0, 1.0, -0.5)
_C4 = (1.0, -4.0, 6.0, -4.0, 1.0)

# probe-state offsets: at unit distance u + u1 + u2/2 + u3/6 + u4/24, at
# double distance u + 2 u1 + 2 u2 + (4/3) u3 + (2/3) u4
_P1 = (1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0)
_P2 = (2.0, 2.0, 4.0 / 3.0, 2.0 / 3.0)


def _probe_pair(u, u_m):
    """Unit-distance probe states (plus, minus); odd terms flip sign."""
    n = len(u_m)
    cp = [1.0] + [_P1[m] for m in range(n)]
    cm = [1.0] + [_P1[m] * (-1.0 if m % 2 == 0 else 1.0) for m in range(n)]
    arrs = [u] + u_m
    return lincomb(cp, arrs), lincomb(cm, arrs)


def _probe_pair2(u, u_m):
    """Double-distance probe states (plus, minus)."""
    n = len(u_m)
    cp = [1.0] + [_P2[m] for m in range(n)]
    cm = [1.0] + [_P2[m] * (-1.0 if m % 2 == 0 else 1.0) for m in range(n)]
    arrs = [u] + u_m
    return lincomb(cp, arrs), lincomb(cm, arrs)


def _nodal_ladder_2d(pair, u, sx, sy, D, n_deg):
    """2-D analog of the nodal ladder: the same stencils applied to both
    flux components, with u^(m) = sx*D f^(m-1) + sy*g^(m-1) D^T.

    ``pair`` maps a nodal state to both flux components at once.  Returns
    (f, g, u_m, f_m, g_m) with the unperturbed fluxes included.
    """

    def ddx(a):
        return contract_x(D, a, sx)

    def ddy(a):
        return contract_y(D, a, sy)

    f, g = pair(u)
    u1 = ddx(f) + ddy(g)
    if n_deg == 1:
        fp, gp = pair(u + u1)
        fm, gm = pair(u - u1)
        return f, g, [u1], [lincomb(_C1, (fp, fm))], [lincomb(_C1, (gp, gm))]
    if n_deg == 2:
        fp, gp = pair(u + u1)
        fm, gm = pair(u - u1)
        f1, g1 = lincomb(_C1, (fp, fm)), lincomb(_C1, (gp, gm))
        u2 = ddx(f1) + ddy(g1)
        sp, sm = _probe_pair(u, [u1, u2])
        fp, gp = pair(sp)
        fm, gm = pair(sm)
        f2 = lincomb(_C2, (fp, f, fm))
        g2 = lincomb(_C2, (gp, g, gm))
        return f, g, [u1, u2], [f1, f2], [g1, g2]
    # degrees 3 and 4 share the fourth-order first-derivative stencil
    fp, gp = pair(u + u1)
    fm, gm = pair(u - u1)
    fp2, gp2 = pair(u + 2 * u1)
    fm2, gm2 = pair(u - 2 * u1)
    f1 = lincomb(_C1_4, (fp2, fp, fm, fm2))
    g1 = lincomb(_C1_4, (gp2, gp, gm, gm2))
    u2 = ddx(f1) + ddy(g1)
    if n_deg == 3:
        sp, sm = _probe_pair(u, [u1, u2])
        fp, gp = pair(sp)
        fm, gm = pair(sm)
        f2 = lincomb(_C2, (fp, f, fm))
        g2 = lincomb(_C2, (gp, g, gm))
        u3 = ddx(f2) + ddy(g2)
        sp, sm = _probe_pair(u, [u1, u2, u3])
        sp2, sm2 = _probe_pair2(u, [u1, u2, u3])
        fp, gp = pair(sp)
        fm, gm = pair(sm)
        fp2, gp2 = pair(sp2)
        fm2, gm2 = pair(sm2)
        f3 = lincomb(_C3, (fp2, fp, fm, fm2))
        g3 = lincomb(_C3, (gp2, gp, gm, gm2))
        return f, g, [u1, u2, u3], [f1, f2, f3], [g1, g2, g3]
    if n_deg == 4:
        sp, sm = _probe_pair(u, [u1, u2])
        sp2, sm2 = _probe_pair2(u, [u1, u2])
        fp, gp = pair(sp)
        fm, gm = pair(sm)
        fp2, gp2 = pair(sp2)
        fm2, gm2 = pair(sm2)
        f2 = lincomb(_C2_4, (fp2, fp, f, fm, fm2))
        g2 = lincomb(_C2_4, (gp2, gp, g, gm, gm2))
        u3 = ddx(f2) + ddy(g2)
        sp, sm = _probe_pair(u, [u1, u2, u3])
        sp2, sm2 = _probe_pair2(u, [u1, u2, u3])
        fp, gp = pair(sp)
        fm, gm = pair(sm)
        fp2, gp2 = pair(sp2)
        fm2, gm2 = pair(sm2)
        f3 = lincomb(_C3, (fp2, fp, fm, fm2))
        g3 = lincomb(_C3, (gp2, gp, gm, gm2))
        u4 = ddx(f3) + ddy(g3)
        sp, sm = _probe_pair(u, [u1, u2, u3, u4])
        sp2, sm2 = _probe_pair2(u, [u1, u2, u3, u4])
        fp, gp = pair(sp)
        fm, gm = pair(sm)
        fp2, gp2 = pair(sp2)
        fm2, gm2 = pair(sm2)
        f4 = lincomb(_C4, (fp2, fp, f, fm, fm2))
        g4 = lincomb(_C4, (gp2, gp, g, gm, gm2))
        return f, g, [u1, u2, u3, u4], [f1, f2, f3, f4], [g1, g2, g3, g4]
    raise ConfigurationError(f"LW ladders implemented for degrees 1..4, got {n_deg}")


def _face_ladder_2d(face_flux, u, u_m):
    """EA ladder on one face of every element: the nodal stencils applied
    to the face-extrapolated solution and time derivatives.  ``u`` and
    ``u_m`` are already extrapolated to the face line; with endpoint
    nodes the result matches the extrapolated nodal time average exactly.
    """
    n_deg = len(u_m)
    f = face_flux(u)
    if n_deg == 1:
        u1 = u_m[0]
        fp = face_flux(u + u1)
        fm = face_flux(u - u1)
        f1 = lincomb(_C1, (fp, fm))
        return lincomb(_AVG[:2], (f, f1))
    if n_deg == 2:
        u1, u2 = u_m
        fp = face_flux(u + u1)
        fm = face_flux(u - u1)
        f1 = lincomb(_C1, (fp, fm))
        sp, sm = _probe_pair(u, [u1, u2])
        f2 = lincomb(_C2, (face_flux(sp), f, face_flux(sm)))
        return lincomb(_AVG[:3], (f, f1, f2))
    if n_deg == 3:
        u1, u2, u3 = u_m
        f1 = lincomb(_C1_4, (face_flux(u + 2 * u1), face_flux(u + u1),
                             face_flux(u - u1), face_flux(u - 2 * u1)))
        sp, sm = _probe_pair(u, [u1, u2])
        f2 = lincomb(_C2, (face_flux(sp), f, face_flux(sm)))
        sp, sm = _probe_pair(u, u_m)
        sp2, sm2 = _probe_pair2(u, u_m)
        f3 = lincomb(_C3, (face_flux(sp2), face_flux(sp),
                           face_flux(sm), face_flux(sm2)))
        return lincomb(_AVG[:4], (f, f1, f2, f3))
    if n_deg == 4:
        u1, u2, u3, u4 = u_m
        f1 = lincomb(_C1_4, (face_flux(u + 2 * u1), face_flux(u + u1),
                             face_flux(u - u1), face_flux(u - 2 * u1)))
        sp, sm = _probe_pair(u, [u1, u2])
        sp2, sm2 = _probe_pair2(u, [u1, u2])
        f2 = lincomb(_C2_4, (face_flux(sp2), face_flux(sp), f,
                             face_flux(sm), face_flux(sm2)))
        sp, sm = _probe_pair(u, [u1, u2, u3])
        sp2, sm2 = _probe_pair2(u, [u1, u2, u3])
        f3 = lincomb(_C3, (face_flux(sp2), face_flux(sp),
                           face_flux(sm), face_flux(sm2)))
        sp, sm = _probe_pair(u, u_m)
        sp2, sm2 = _probe_pair2(u, u_m)
        f4 = lincomb(_C4, (face_flux(sp2), face_flux(sp), f,
                           face_flux(sm), face_flux(sm2)))
        return lincomb(_AVG[:5], (f, f1, f2, f3, f4))
    raise ConfigurationError(f"EA ladders implemented for degrees 1..4, got {n_deg}")


def approx_lw_element_2d(law, ops, u, dt, dx, dy, geom, face_mode=AE):
    """2-D approximate Lax-Wendroff sweep over all elements.

    ``geom`` provides node/face coordinate arrays:
      X, Y                 -- (ncx, ncy, nd, nd) node coordinates
      x_west/x_east        -- (ncx, ncy, nd) coordinates on the x-faces
      y_west/...           -- matching transverse coordinates per face
    For position-independent laws these may be None.
    """
    n_deg = ops.degree
    sx = -dt / dx
    sy = -dt / dy
    X = geom.get("X") if geom else None
    Y = geom.get("Y") if geom else None

    def pair(a):
        return law.flux_pair(X, Y, a)

    f0, g0, u_m, f_m, g_m = _nodal_ladder_2d(pair, u, sx, sy, ops.D, n_deg)
    avg = _AVG[: n_deg + 1]
    F = lincomb(avg, [f0] + f_m)
    G = lincomb(avg, [g0] + g_m)
    U = lincomb(avg, [u] + u_m)

    ws = ElementWorkspace2D(u=u, u_m=u_m, U=U, F=F, G=G)
    extraps = {
        "W": lambda a: _ex_x(ops.V_L, a),
        "E": lambda a: _ex_x(ops.V_R, a),
        "S": lambda a: _ex_y(ops.V_L, a),
        "N": lambda a: _ex_y(ops.V_R, a),
    }
    for side, ex in extraps.items():
        ws.u_face[side] = ex(u)
        ws.U_face[side] = ex(U)
    if face_mode == AE:
        ws.F_face["W"] = extraps["W"](F)
        ws.F_face["E"] = extraps["E"](F)
        ws.F_face["S"] = extraps["S"](G)
        ws.F_face["N"] = extraps["N"](G)
    elif face_mode == EA:
        for side in "WESN":
            fx = geom.get(f"x_{side}") if geom else None
            fy = geom.get(f"y_{side}") if geom else None
            comp = law.flux_x if side in "WE" else law.flux_y
            e_m = [extraps[side](a) for a in u_m]
            ws.F_face[side] = _face_ladder_2d(
                lambda a, fx=fx, fy=fy, comp=comp: comp(fx, fy, a),
                ws.u_face[side], e_m,
            )
    else:
        raise ConfigurationError(f"unknown face mode {face_mode!r}")
    return ws


def lw_update_element_2d(ws, ops, fnum_w, fnum_e, gnum_s, gnum_n, dt, dx, dy):
    """Nodal update from the matrix form of the 2-D scheme."""
    return update_2d(ws.u, ws.F, ws.G, ops.D1, ops.b_L, ops.b_R,
                     fnum_w, fnum_e, gnum_s, gnum_n, dt / dx, dt / dy)
