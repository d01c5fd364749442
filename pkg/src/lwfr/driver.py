"""Meshes, boundary conditions, time loops, error norms and file output.

The solver advances nodal data one element-local sweep at a time: build
per-element workspaces (time-average flux and solution), assemble face
trace data, evaluate the numerical flux, update, then limit.  A
method-of-lines Runge-Kutta path reuses the same spatial operators with
instantaneous fluxes.
"""

import json
import time as _time
from dataclasses import dataclass, field, replace

import numpy as np

from . import lw_core, numflux, rk_reference
from .basis import build_operators, build_solution_points, lagrange_eval
from .equations import Euler1D, Euler2D
from .errors import ConfigurationError
from .limiter import (LimiterConfig, positivity_scale_1d, positivity_scale_2d,
                      tvd_limit_1d, tvd_limit_2d)

LWFR = "lwfr"
RKFR = "rkfr"

PERIODIC = "periodic"
DIRICHLET = "dirichlet"
OUTFLOW = "outflow"
REFLECTING = "reflecting"
MIXED = "mixed"

# critical CFL numbers from the Fourier analysis (regenerated by the
# stability module; a test asserts agreement), indexed by degree-1
CFL_1D = {
    ("radau", "d1"): (0.226, 0.117, 0.072, 0.049),
    ("radau", "d2"): (0.333, 0.170, 0.103, 0.069),
    ("g2", "d1"): (0.465, 0.204, 0.116, 0.060),
    ("g2", "d2"): (1.000, 0.333, 0.170, 0.103),
}
CFL_2D = {
    ("radau", "d2"): (0.259, 0.166, 0.101, 0.067),
    ("g2", "d2"): (0.511, 0.348, 0.178, 0.108),
}


def _cfl_2d(correction, dissipation, degree):
    base = CFL_2D[(correction, "d2")][degree - 1]
    if dissipation == "d2":
        return base
    # the analysis covers the upwind (d2) form only; scale by the 1-D
    # ratio of the two dissipation models
    r = CFL_1D[(correction, "d1")][degree - 1] / CFL_1D[(correction, "d2")][degree - 1]
    return base * r


@dataclass
class Mesh1D:
    xmin: float
    xmax: float
    ncell: int

    @property
    def dx(self):
        return (self.xmax - self.xmin) / self.ncell

    @property
    def x_faces(self):
        return np.linspace(self.xmin, self.xmax, self.ncell + 1)

    @property
    def centers(self):
        return self.x_faces[:-1] + 0.5 * self.dx

    def nodes(self, ops):
        return self.x_faces[:-1, None] + self.dx * ops.nodes[None, :]


@dataclass
class Mesh2D:
    xmin: float
    xmax: float
    ymin: float
    ymax: float
    ncx: int
    ncy: int

    @property
    def dx(self):
        return (self.xmax - self.xmin) / self.ncx

    @property
    def dy(self):
        return (self.ymax - self.ymin) / self.ncy

    @property
    def x_faces(self):
        return np.linspace(self.xmin, self.xmax, self.ncx + 1)

    @property
    def y_faces(self):
        return np.linspace(self.ymin, self.ymax, self.ncy + 1)

    def node_coords(self, ops):
        """X, Y of shape (ncx, ncy, nd, nd); x varies with the third index."""
        xn = self.x_faces[:-1, None] + self.dx * ops.nodes[None, :]   # (ncx, nd)
        yn = self.y_faces[:-1, None] + self.dy * ops.nodes[None, :]   # (ncy, nd)
        X = np.broadcast_to(xn[:, None, :, None], (self.ncx, self.ncy, len(ops.nodes), len(ops.nodes)))
        Y = np.broadcast_to(yn[None, :, None, :], (self.ncx, self.ncy, len(ops.nodes), len(ops.nodes)))
        return np.ascontiguousarray(X), np.ascontiguousarray(Y)

    def geometry(self, ops):
        nd = len(ops.nodes)
        X, Y = self.node_coords(ops)
        xn = self.x_faces[:-1, None] + self.dx * ops.nodes[None, :]
        yn = self.y_faces[:-1, None] + self.dy * ops.nodes[None, :]
        shp = (self.ncx, self.ncy, nd)
        g = {"X": X, "Y": Y}
        g["x_W"] = np.broadcast_to(self.x_faces[:-1, None, None], shp)
        g["x_E"] = np.broadcast_to(self.x_faces[1:, None, None], shp)
        g["y_W"] = g["y_E"] = np.broadcast_to(yn[None, :, :], shp)
        g["y_S"] = np.broadcast_to(self.y_faces[None, :-1, None], shp)
        g["y_N"] = np.broadcast_to(self.y_faces[None, 1:, None], shp)
        g["x_S"] = g["x_N"] = np.broadcast_to(xn[:, None, :], shp)
        return g


@dataclass
class BC:
    kind: str = PERIODIC
    g: object = None          # boundary state function of time (and space in 2-D)
    segments: list = None     # MIXED: list of (lo, hi, BC) along the side


@dataclass
class RunConfig:
    law: object
    ic: object
    mesh: object
    degree: int
    tfinal: float
    points: str = "gl"
    correction: str = "radau"
    dissipation: str = "d2"
    face_mode: str = lw_core.EA
    flux: str = numflux.RUSANOV
    scheme: str = LWFR
    rk_scheme: str = None
    limiter: LimiterConfig = field(default_factory=LimiterConfig)
    bc: object = None         # 1-D: (left BC, right BC); 2-D: dict side -> BC
    exact: object = None
    cfl_safety: float = 0.95
    cfl_override: float = None
    dt_max: float = None
    positivity_bounds: tuple = None
    name: str = ""

    def __post_init__(self):
        if self.bc is None:
            if isinstance(self.mesh, Mesh1D):
                self.bc = (BC(PERIODIC), BC(PERIODIC))
            else:
                self.bc = {s: BC(PERIODIC) for s in ("W", "E", "S", "N")}
        if self.correction == "dfr" and self.points != "gl":
            raise ConfigurationError("DFR construction requires GL points")


@dataclass
class RunResult:
    config: RunConfig
    u: np.ndarray
    t: float
    steps: int
    seconds: float
    cfl: float
    errors: dict = None            # variable -> (l2, linf)
    conservation_drift: float = 0.0


def variable_names(law):
    if isinstance(law, Euler1D):
        return ["rho", "mom", "energy"]
    if isinstance(law, Euler2D):
        return ["rho", "momx", "momy", "energy"]
    return ["u"]


def cfl_number(config):
    if config.cfl_override is not None:
        return config.cfl_override
    correction = "radau" if config.correction == "dfr" else config.correction
    if config.scheme == RKFR:
        # standard method-of-lines bound for degree-N elements
        return 1.0 / (2 * config.degree + 1)
    if isinstance(config.mesh, Mesh1D):
        return CFL_1D[(correction, config.dissipation)][config.degree - 1]
    return _cfl_2d(correction, config.dissipation, config.degree)


# ---------------------------------------------------------------------------
# helpers


def _avg_weights(ops):
    return ops.weights / ops.weights.sum()


def cell_averages_1d(ops, u):
    return np.einsum("j,cjv->cv", _avg_weights(ops), u)


def cell_averages_2d(ops, u):
    w = _avg_weights(ops)
    return np.einsum("i,j,xyijv->xyv", w, w, u)


def _mirror_mats(law, direction):
    """Sign vectors applied to a state / normal-flux pair under reflection
    of the wall-normal velocity."""
    nv = law.n_vars
    s_state = np.ones(nv)
    s_flux = -np.ones(nv)
    if isinstance(law, Euler1D):
        s_state[1] = -1.0
        s_flux[1] = 1.0
    elif isinstance(law, Euler2D):
        k = 1 if direction == "x" else 2
        s_state[k] = -1.0
        s_flux[k] = 1.0
    else:
        s_state[:] = 1.0
        s_flux[:] = -1.0
    return s_state, s_flux


_TIME_QUAD = {}


def time_quadrature(npts):
    """Gauss nodes/weights on [0,1] used to time-average boundary data."""
    if npts not in _TIME_QUAD:
        pts = build_solution_points("gl", npts - 1)
        _TIME_QUAD[npts] = (pts.nodes, pts.weights)
    return _TIME_QUAD[npts]


def _quad_average(fn, t, dt, npts):
    """(1/dt) * integral of fn over [t, t+dt] by Gauss quadrature; for
    dt == 0 evaluates fn(t)."""
    if dt == 0.0:
        return fn(t)
    tau, w = time_quadrature(npts)
    acc = None
    for ti, wi in zip(tau, w):
        val = wi * np.asarray(fn(t + ti * dt), dtype=float)
        acc = val if acc is None else acc + val
    return acc


# ---------------------------------------------------------------------------
# 1-D solver


def _face_flux_1d(cfg, law, ops, mesh, ubar, Ul_cell, Ur_cell, Fl_cell, Fr_cell,
                  t, dt, lam=None):
    """Numerical flux at every face (ncell+1, nv), with boundary handling."""
    nc = mesh.ncell
    nv = law.n_vars
    nf = nc + 1
    Fl = np.empty((nf, nv))
    Fr = np.empty((nf, nv))
    Ul = np.empty((nf, nv))
    Ur = np.empty((nf, nv))
    bl = np.empty((nf, nv))
    br = np.empty((nf, nv))
    Fl[1:], Fr[:-1] = Fr_cell, Fl_cell
    Ul[1:], Ur[:-1] = Ur_cell, Ul_cell
    bl[1:], br[:-1] = ubar, ubar

    left, right = cfg.bc
    if left.kind == PERIODIC or right.kind == PERIODIC:
        if left.kind != right.kind:
            raise ConfigurationError("periodic BC must be used on both sides")
        Fl[0], Ul[0], bl[0] = Fr_cell[-1], Ur_cell[-1], ubar[-1]
        Fr[-1], Ur[-1], br[-1] = Fl_cell[0], Ul_cell[0], ubar[0]
    else:
        # default ghost = interior copy (zero-gradient); reflecting mirrors
        Fl[0], Ul[0], bl[0] = Fr[0], Ur[0], br[0]
        Fr[-1], Ur[-1], br[-1] = Fl[-1], Ul[-1], bl[-1]
        if left.kind == REFLECTING:
            ss, sf = _mirror_mats(law, "x")
            Fl[0], Ul[0], bl[0] = sf * Fr[0], ss * Ur[0], ss * br[0]
        if right.kind == REFLECTING:
            ss, sf = _mirror_mats(law, "x")
            Fr[-1], Ur[-1], br[-1] = sf * Fl[-1], ss * Ul[-1], ss * bl[-1]

    fd = numflux.FaceData(Ul=Ul, Ur=Ur, Fl=Fl, Fr=Fr, ubar_l=bl, ubar_r=br,
                          x=mesh.x_faces, lam=lam)
    fnum = numflux.get_flux(cfg.flux)(law, fd)

    # Dirichlet inflow: time-average of the boundary-state flux
    if left.kind == DIRICHLET:
        fnum[0] = _quad_average(
            lambda tt: law.flux(np.array([mesh.xmin]), np.atleast_2d(left.g(tt)))[0],
            t, dt, cfg.degree + 1,
        )
    if right.kind == DIRICHLET:
        fnum[-1] = _quad_average(
            lambda tt: law.flux(np.array([mesh.xmax]), np.atleast_2d(right.g(tt)))[0],
            t, dt, cfg.degree + 1,
        )
    return fnum


def _global_lam(cfg, law, mesh, ubar):
    if cfg.flux != numflux.GLOBAL_LF:
        return None
    if isinstance(mesh, Mesh1D):
        return float(law.max_speed(mesh.centers, ubar).max())
    xc = mesh.x_faces[:-1, None] + 0.5 * mesh.dx
    yc = mesh.y_faces[None, :-1] + 0.5 * mesh.dy
    return float(
        np.maximum(law.max_speed_x(xc, yc, ubar), law.max_speed_y(xc, yc, ubar)).max()
    )


def _lw_step_1d(cfg, law, ops, mesh, xn, u, t, dt):
    ws = lw_core.approx_lw_element_1d(
        law, ops, u, dt, mesh.dx, xn, mesh.x_faces, cfg.face_mode
    )
    ubar = cell_averages_1d(ops, u)
    if cfg.dissipation == "d1":
        Ul_cell, Ur_cell = ws.u_face
    else:
        Ul_cell, Ur_cell = ws.U_face
    lam = _global_lam(cfg, law, mesh, ubar)
    fnum = _face_flux_1d(cfg, law, ops, mesh, ubar, Ul_cell, Ur_cell,
                         ws.F_face[0], ws.F_face[1], t, dt, lam=lam)
    deriv = lw_core.flux_derivative_1d(ops, ws.F, fnum[:-1], fnum[1:])
    return lw_core.lw_update_element_1d(u, deriv, dt, mesh.dx)


def _rk_residual_1d(cfg, law, ops, mesh, xn, u, t):
    F = law.flux(xn, u)
    ul = np.einsum("j,cjv->cv", ops.V_L, u)
    ur = np.einsum("j,cjv->cv", ops.V_R, u)
    Fl_cell = law.flux(mesh.x_faces[:-1], ul)
    Fr_cell = law.flux(mesh.x_faces[1:], ur)
    ubar = cell_averages_1d(ops, u)
    lam = _global_lam(cfg, law, mesh, ubar)
    fnum = _face_flux_1d(cfg, law, ops, mesh, ubar, ul, ur, Fl_cell, Fr_cell,
                         t, 0.0, lam=lam)
    deriv = lw_core.flux_derivative_1d(ops, F, fnum[:-1], fnum[1:])
    return -deriv / mesh.dx


def _apply_limiters_1d(cfg, law, ops, mesh, u):
    lim = cfg.limiter
    if lim.kind == "none" and not lim.positivity:
        return u
    if lim.kind != "none":
        ubar = cell_averages_1d(ops, u)
        left, right = cfg.bc
        if left.kind == PERIODIC:
            ub_l = np.roll(ubar, 1, axis=0)
            ub_r = np.roll(ubar, -1, axis=0)
        else:
            ub_l = np.concatenate([ubar[:1], ubar[:-1]], axis=0)
            ub_r = np.concatenate([ubar[1:], ubar[-1:]], axis=0)
            if left.kind == REFLECTING:
                ss, _ = _mirror_mats(law, "x")
                ub_l[0] = ss * ubar[0]
            if right.kind == REFLECTING:
                ss, _ = _mirror_mats(law, "x")
                ub_r[-1] = ss * ubar[-1]
        u = tvd_limit_1d(u, ubar, ub_l, ub_r, ops, lim, mesh.dx, law=law)
    if lim.positivity:
        u = positivity_scale_1d(u, ops, law, eps=lim.eps,
                                bounds=cfg.positivity_bounds)
    return u


def _compute_dt_1d(cfg, law, ops, mesh, u, cfl):
    ubar = cell_averages_1d(ops, u)
    smax = float(law.max_speed(mesh.centers, ubar).max())
    if smax <= 0.0:
        if cfg.dt_max is None:
            raise ConfigurationError("zero wave speed everywhere; set dt_max")
        return cfg.dt_max
    dt = cfg.cfl_safety * cfl * mesh.dx / smax
    if cfg.dt_max is not None:
        dt = min(dt, cfg.dt_max)
    return dt


# ---------------------------------------------------------------------------
# 2-D solver


def _side_ghost_2d(cfg, law, ops, mesh, side, interior, t, dt, degree):
    """Ghost (U, F, ubar) for one outer boundary side.

    ``interior`` holds the interior-side trace triple in the same layout
    (n_along, nd, nv) with ubar (n_along, nv).  Dirichlet data g(x, y, t)
    is time averaged, and its ghost cell average is the quadrature mean
    of the ghost trace along the face line.
    """
    bc = cfg.bc[side]
    U_in, F_in, b_in, coords = interior
    if bc.kind == OUTFLOW:
        return U_in.copy(), F_in.copy(), b_in.copy()
    direction = "x" if side in ("W", "E") else "y"
    if bc.kind == REFLECTING:
        ss, sf = _mirror_mats(law, direction)
        return ss * U_in, sf * F_in, ss * b_in
    if bc.kind == DIRICHLET:
        x, y = coords
        flux = law.flux_x if direction == "x" else law.flux_y

        def state(tt):
            return np.asarray(bc.g(x, y, tt), dtype=float)

        U_g = _quad_average(state, t, dt, degree + 1)
        F_g = _quad_average(lambda tt: flux(x, y, state(tt)), t, dt, degree + 1)
        b_g = 0.5 * np.einsum("k,...kv->...v", ops.weights, U_g)
        return U_g, F_g, b_g
    if bc.kind == MIXED:
        U_g = np.empty_like(U_in)
        F_g = np.empty_like(F_in)
        b_g = np.empty_like(b_in)
        x, y = coords
        along = x if side in ("S", "N") else y
        pos = along[:, 0] if along.ndim > 1 else along
        for lo, hi, sub in bc.segments:
            m = (pos >= lo) & (pos < hi)
            if not m.any():
                continue
            sub_cfg = replace(cfg, bc={**cfg.bc, side: sub})
            sub_int = (U_in[m], F_in[m], b_in[m], (x[m], y[m]))
            U_g[m], F_g[m], b_g[m] = _side_ghost_2d(
                sub_cfg, law, ops, mesh, side, sub_int, t, dt, degree
            )
        return U_g, F_g, b_g
    raise ConfigurationError(f"unsupported boundary kind {bc.kind!r} on {side}")


def _face_flux_2d(cfg, law, ops, mesh, geom, ubar, Uf, Ff, t, dt, lam=None):
    """Numerical fluxes on x-faces and y-faces.

    Uf/Ff are dicts of per-element face traces keyed W/E/S/N.  Returns
    (fnum_x (ncx+1, ncy, nd, nv), fnum_y (ncx, ncy+1, nd, nv)).
    """
    ncx, ncy = mesh.ncx, mesh.ncy
    nd = len(ops.nodes)
    nv = law.n_vars
    flux_fn = numflux.get_flux(cfg.flux)
    out = {}

    for direction in ("x", "y"):
        if direction == "x":
            nf = ncx + 1
            shape = (nf, ncy, nd, nv)
            ax = 0
            lo_side, hi_side = "W", "E"
        else:
            nf = ncy + 1
            shape = (ncx, nf, nd, nv)
            ax = 1
            lo_side, hi_side = "S", "N"
        Fl = np.empty(shape)
        Fr = np.empty(shape)
        Ul = np.empty(shape)
        Ur = np.empty(shape)
        bl = np.empty(shape[:-2] + (nv,))
        br = np.empty(shape[:-2] + (nv,))

        def put(arr, idx, val):
            sl = [slice(None)] * arr.ndim
            sl[ax] = idx
            arr[tuple(sl)] = val

        def get(arr, idx):
            sl = [slice(None)] * arr.ndim
            sl[ax] = idx
            return arr[tuple(sl)]

        put(Fl, slice(1, None), Ff[hi_side])
        put(Fr, slice(0, -1), Ff[lo_side])
        put(Ul, slice(1, None), Uf[hi_side])
        put(Ur, slice(0, -1), Uf[lo_side])
        put(bl, slice(1, None), ubar)
        put(br, slice(0, -1), ubar)

        bc_lo = cfg.bc[lo_side]
        bc_hi = cfg.bc[hi_side]
        if bc_lo.kind == PERIODIC or bc_hi.kind == PERIODIC:
            if bc_lo.kind != bc_hi.kind:
                raise ConfigurationError("periodic BC must be used on both sides")
            put(Fl, 0, get(Ff[hi_side], -1))
            put(Ul, 0, get(Uf[hi_side], -1))
            put(bl, 0, get(ubar, -1))
            put(Fr, -1, get(Ff[lo_side], 0))
            put(Ur, -1, get(Uf[lo_side], 0))
            put(br, -1, get(ubar, 0))
        else:
            lo_coords = (geom[f"x_{lo_side}"], geom[f"y_{lo_side}"])
            hi_coords = (geom[f"x_{hi_side}"], geom[f"y_{hi_side}"])
            lo_int = (get(Uf[lo_side], 0), get(Ff[lo_side], 0), get(ubar, 0),
                      tuple(get(c, 0) for c in lo_coords))
            hi_int = (get(Uf[hi_side], -1), get(Ff[hi_side], -1), get(ubar, -1),
                      tuple(get(c, -1) for c in hi_coords))
            Ug, Fg, bg = _side_ghost_2d(cfg, law, ops, mesh, lo_side, lo_int,
                                        t, dt, cfg.degree)
            put(Fl, 0, Fg)
            put(Ul, 0, Ug)
            put(bl, 0, bg)
            Ug, Fg, bg = _side_ghost_2d(cfg, law, ops, mesh, hi_side, hi_int,
                                        t, dt, cfg.degree)
            put(Fr, -1, Fg)
            put(Ur, -1, Ug)
            put(br, -1, bg)

        # face coordinates, extended by one face row for the speed lookup
        if direction == "x":
            yn = geom["y_W"]
            x = np.broadcast_to(mesh.x_faces[:, None, None], (nf, ncy, nd))
            y = np.concatenate([yn, yn[-1:]], axis=0)
        else:
            xn = geom["x_S"]
            y = np.broadcast_to(mesh.y_faces[None, :, None], (ncx, nf, nd))
            x = np.concatenate([xn, xn[:, -1:]], axis=1)

        fd = numflux.FaceData(
            Ul=Ul, Ur=Ur, Fl=Fl, Fr=Fr,
            ubar_l=np.broadcast_to(bl[..., None, :], shape),
            ubar_r=np.broadcast_to(br[..., None, :], shape),
            x=x, y=y, lam=lam,
        )
        out[direction] = flux_fn(law, fd, direction=direction)
    return out["x"], out["y"]


def _lw_step_2d(cfg, law, ops, mesh, geom, u, t, dt):
    ws = lw_core.approx_lw_element_2d(
        law, ops, u, dt, mesh.dx, mesh.dy, geom, cfg.face_mode
    )
    ubar = cell_averages_2d(ops, u)
    Uf = ws.u_face if cfg.dissipation == "d1" else ws.U_face
    lam = _global_lam(cfg, law, mesh, ubar)
    fx, fy = _face_flux_2d(cfg, law, ops, mesh, geom, ubar, Uf, ws.F_face,
                           t, dt, lam=lam)
    return lw_core.lw_update_element_2d(
        ws, ops, fx[:-1], fx[1:], fy[:, :-1], fy[:, 1:], dt, mesh.dx, mesh.dy
    )


def _rk_residual_2d(cfg, law, ops, mesh, geom, u, t):
    X, Y = geom["X"], geom["Y"]
    F = law.flux_x(X, Y, u)
    G = law.flux_y(X, Y, u)
    Uf = {
        "W": np.einsum("i,xyijv->xyjv", ops.V_L, u),
        "E": np.einsum("i,xyijv->xyjv", ops.V_R, u),
        "S": np.einsum("j,xyijv->xyiv", ops.V_L, u),
        "N": np.einsum("j,xyijv->xyiv", ops.V_R, u),
    }
    Ff = {}
    for side in ("W", "E"):
        Ff[side] = law.flux_x(geom[f"x_{side}"], geom[f"y_{side}"], Uf[side])
    for side in ("S", "N"):
        Ff[side] = law.flux_y(geom[f"x_{side}"], geom[f"y_{side}"], Uf[side])
    ubar = cell_averages_2d(ops, u)
    lam = _global_lam(cfg, law, mesh, ubar)
    fx, fy = _face_flux_2d(cfg, law, ops, mesh, geom, ubar, Uf, Ff, t, 0.0,
                           lam=lam)
    ws = lw_core.ElementWorkspace2D(u=u, u_m=[], U=u, F=F, G=G)
    stepped = lw_core.lw_update_element_2d(
        ws, ops, fx[:-1], fx[1:], fy[:, :-1], fy[:, 1:], 1.0, mesh.dx, mesh.dy
    )
    return stepped - u


def _apply_limiters_2d(cfg, law, ops, mesh, u):
    lim = cfg.limiter
    if lim.kind == "none" and not lim.positivity:
        return u
    if lim.kind != "none":
        ubar = cell_averages_2d(ops, u)
        nbr = {}
        for side, axis, shift in (("W", 0, 1), ("E", 0, -1), ("S", 1, 1), ("N", 1, -1)):
            bc = cfg.bc[side]
            if bc.kind == PERIODIC:
                nbr[side] = np.roll(ubar, shift, axis=axis)
            else:
                nb = np.roll(ubar, shift, axis=axis)
                edge = 0 if shift == 1 else -1
                sl = [slice(None)] * nb.ndim
                sl[axis] = edge
                src = [slice(None)] * nb.ndim
                src[axis] = edge
                nb[tuple(sl)] = ubar[tuple(src)]
                if bc.kind == REFLECTING:
                    ss, _ = _mirror_mats(law, "x" if axis == 0 else "y")
                    nb[tuple(sl)] = ss * ubar[tuple(src)]
                elif bc.kind == MIXED:
                    # mirror only the columns on reflecting segments
                    centers = (mesh.x_faces[:-1] + 0.5 * mesh.dx if axis == 1
                               else mesh.y_faces[:-1] + 0.5 * mesh.dy)
                    ss, _ = _mirror_mats(law, "x" if axis == 0 else "y")
                    for lo, hi, sub in bc.segments:
                        if sub.kind != REFLECTING:
                            continue
                        m = (centers >= lo) & (centers < hi)
                        if axis == 0:
                            nb[tuple(sl)][m] = ss * ubar[tuple(src)][m]
                        else:
                            nb[tuple(sl)][m] = ss * ubar[tuple(src)][m]
                nbr[side] = nb
        u = tvd_limit_2d(u, ubar, nbr, ops, lim, mesh.dx, mesh.dy, law=law)
    if lim.positivity:
        u = positivity_scale_2d(u, ops, law, eps=lim.eps,
                                bounds=cfg.positivity_bounds)
    return u


def _compute_dt_2d(cfg, law, ops, mesh, u, cfl):
    ubar = cell_averages_2d(ops, u)
    xc = mesh.x_faces[:-1, None] + 0.5 * mesh.dx
    yc = mesh.y_faces[None, :-1] + 0.5 * mesh.dy
    sx = law.max_speed_x(xc, yc, ubar)
    sy = law.max_speed_y(xc, yc, ubar)
    denom = float((sx / mesh.dx + sy / mesh.dy).max())
    if denom <= 0.0:
        if cfg.dt_max is None:
            raise ConfigurationError("zero wave speed everywhere; set dt_max")
        return cfg.dt_max
    dt = cfg.cfl_safety * cfl / denom
    if cfg.dt_max is not None:
        dt = min(dt, cfg.dt_max)
    return dt


# ---------------------------------------------------------------------------
# norms, conservation, main loop


def _quad_eval(ops, nq=None):
    """Interpolation matrix from solution points to a denser Gauss rule."""
    nq = nq if nq is not None else ops.degree + 3
    q = build_solution_points("gl", nq - 1)
    P = np.array([lagrange_eval(ops.nodes, x) for x in q.nodes])
    return q.nodes, q.weights, P


def error_norms_1d(u, exact, mesh, ops, t):
    xi, w, P = _quad_eval(ops)
    uq = np.einsum("qj,cjv->cqv", P, u)
    xq = mesh.x_faces[:-1, None] + mesh.dx * xi[None, :]
    diff = uq - np.asarray(exact(xq, t), dtype=float)
    measure = mesh.xmax - mesh.xmin
    l2 = np.sqrt(np.einsum("q,cqv->v", w, diff**2) * mesh.dx / measure)
    linf = np.abs(diff).max(axis=(0, 1))
    return l2, linf


def error_norms_2d(u, exact, mesh, ops, t):
    xi, w, P = _quad_eval(ops)
    uq = np.einsum("pi,qj,xyijv->xypqv", P, P, u)
    xq = mesh.x_faces[:-1, None] + mesh.dx * xi[None, :]
    yq = mesh.y_faces[:-1, None] + mesh.dy * xi[None, :]
    X = xq[:, None, :, None]
    Y = yq[None, :, None, :]
    diff = uq - np.asarray(exact(X, Y, t), dtype=float)
    measure = (mesh.xmax - mesh.xmin) * (mesh.ymax - mesh.ymin)
    l2 = np.sqrt(
        np.einsum("p,q,xypqv->v", w, w, diff**2) * mesh.dx * mesh.dy / measure
    )
    linf = np.abs(diff).max(axis=(0, 1, 2, 3))
    return l2, linf


def total_mass(ops, mesh, u):
    if isinstance(mesh, Mesh1D):
        return np.einsum("j,cjv->v", ops.weights, u) * mesh.dx
    return np.einsum("i,j,xyijv->v", ops.weights, ops.weights, u) * mesh.dx * mesh.dy


def solve(config):
    """Run the configured problem to its final time."""
    cfg = config
    law = cfg.law
    ops = build_operators(cfg.points, cfg.degree, cfg.correction)
    cfl = cfl_number(cfg)
    mesh = cfg.mesh
    one_d = isinstance(mesh, Mesh1D)

    if one_d:
        xn = mesh.nodes(ops)
        u = np.asarray(cfg.ic(xn), dtype=float)
    else:
        geom = mesh.geometry(ops)
        u = np.asarray(cfg.ic(geom["X"], geom["Y"]), dtype=float)
    u = u.copy()

    if cfg.scheme == RKFR:
        rk = cfg.rk_scheme or rk_reference.default_scheme(cfg.degree)
    elif cfg.scheme != LWFR:
        raise ConfigurationError(f"unknown scheme {cfg.scheme!r}")

    # initial data may violate the limiter's bounds only marginally
    if one_d:
        u = _apply_limiters_1d(cfg, law, ops, mesh, u)
    else:
        u = _apply_limiters_2d(cfg, law, ops, mesh, u)

    mass0 = total_mass(ops, mesh, u)
    t = 0.0
    steps = 0
    wall0 = _time.perf_counter()
    while t < cfg.tfinal - 1e-12:
        if one_d:
            dt = _compute_dt_1d(cfg, law, ops, mesh, u, cfl)
        else:
            dt = _compute_dt_2d(cfg, law, ops, mesh, u, cfl)
        dt = min(dt, cfg.tfinal - t)
        if cfg.scheme == LWFR:
            if one_d:
                u = _lw_step_1d(cfg, law, ops, mesh, xn, u, t, dt)
                u = _apply_limiters_1d(cfg, law, ops, mesh, u)
            else:
                u = _lw_step_2d(cfg, law, ops, mesh, geom, u, t, dt)
                u = _apply_limiters_2d(cfg, law, ops, mesh, u)
        else:
            if one_d:
                def residual(v, tt):
                    return _rk_residual_1d(cfg, law, ops, mesh, xn, v, tt)

                def post(v):
                    return _apply_limiters_1d(cfg, law, ops, mesh, v)
            else:
                def residual(v, tt):
                    return _rk_residual_2d(cfg, law, ops, mesh, geom, v, tt)

                def post(v):
                    return _apply_limiters_2d(cfg, law, ops, mesh, v)

            u = rk_reference.rk_step(rk, u, t, dt, residual, post_stage=post)
        if not np.all(np.isfinite(u)):
            raise RuntimeError(
                f"non-finite solution at t={t + dt:.6g} after {steps + 1} steps"
            )
        t += dt
        steps += 1
    seconds = _time.perf_counter() - wall0

    mass1 = total_mass(ops, mesh, u)
    drift = float(np.max(np.abs(mass1 - mass0) / np.maximum(np.abs(mass0), 1.0)))

    errors = None
    if cfg.exact is not None:
        if one_d:
            l2, linf = error_norms_1d(u, cfg.exact, mesh, ops, t)
        else:
            l2, linf = error_norms_2d(u, cfg.exact, mesh, ops, t)
        errors = {
            name: (float(l2[i]), float(linf[i]))
            for i, name in enumerate(variable_names(law))
        }
    return RunResult(config=cfg, u=u, t=t, steps=steps, seconds=seconds,
                     cfl=cfl, errors=errors, conservation_drift=drift)


# ---------------------------------------------------------------------------
# convergence studies and output files


@dataclass
class ErrorReport:
    grids: list
    rows: list      # dicts: grid, variable, l2, linf, eoc, steps, seconds

    def eoc(self, variable="u", norm="l2"):
        """EOC values between successive grids for one variable."""
        es = [r[norm] for r in self.rows if r["variable"] == variable]
        return [float(np.log2(es[i - 1] / es[i])) for i in range(1, len(es))]


def _with_grid(config, n):
    mesh = config.mesh
    if isinstance(mesh, Mesh1D):
        mesh = replace(mesh, ncell=n)
    else:
        mesh = replace(mesh, ncx=n, ncy=n)
    return replace(config, mesh=mesh)


def convergence_study(config, grids):
    if config.exact is None:
        raise ConfigurationError("convergence study needs an exact solution")
    rows = []
    prev = {}
    for n in grids:
        res = solve(_with_grid(config, n))
        for var, (l2, linf) in res.errors.items():
            eoc = float(np.log2(prev[var] / l2)) if var in prev and l2 > 0 else float("nan")
            rows.append({
                "grid": n, "variable": var, "l2": l2, "linf": linf,
                "eoc": eoc, "steps": res.steps, "seconds": res.seconds,
            })
            prev[var] = l2
    return ErrorReport(grids=list(grids), rows=rows)


def _fmt(x):
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def write_errors_csv(path, report):
    with open(path, "w") as f:
        f.write("grid,variable,l2,linf,eoc,steps,seconds\n")
        for r in report.rows:
            f.write(",".join(_fmt(r[k]) for k in
                             ("grid", "variable", "l2", "linf", "eoc",
                              "steps", "seconds")) + "\n")


def write_solution_csv(path, result):
    cfg = result.config
    ops = build_operators(cfg.points, cfg.degree, cfg.correction)
    names = variable_names(cfg.law)
    with open(path, "w") as f:
        if isinstance(cfg.mesh, Mesh1D):
            f.write("x," + ",".join(names) + "\n")
            xn = cfg.mesh.nodes(ops).ravel()
            vals = result.u.reshape(-1, len(names))
            for x, row in zip(xn, vals):
                f.write(_fmt(float(x)) + "," + ",".join(_fmt(float(v)) for v in row) + "\n")
        else:
            f.write("x,y," + ",".join(names) + "\n")
            X, Y = cfg.mesh.node_coords(ops)
            xs = X.ravel()
            ys = Y.ravel()
            vals = result.u.reshape(-1, len(names))
            for x, y, row in zip(xs, ys, vals):
                f.write(_fmt(float(x)) + "," + _fmt(float(y)) + "," +
                        ",".join(_fmt(float(v)) for v in row) + "\n")


def write_meta_json(path, result):
    cfg = result.config
    mesh = cfg.mesh
    meta = {
        "name": cfg.name,
        "law": cfg.law.name,
        "degree": cfg.degree,
        "points": cfg.points,
        "correction": cfg.correction,
        "dissipation": cfg.dissipation,
        "face_mode": cfg.face_mode,
        "flux": cfg.flux,
        "scheme": cfg.scheme,
        "tfinal": cfg.tfinal,
        "cfl": result.cfl,
        "cfl_safety": cfg.cfl_safety,
        "steps": result.steps,
        "seconds": result.seconds,
        "conservation_drift": result.conservation_drift,
        "limiter": {
            "kind": cfg.limiter.kind,
            "M": cfg.limiter.M,
            "characteristic": cfg.limiter.characteristic,
            "positivity": cfg.limiter.positivity,
        },
        "mesh": (
            {"dim": 1, "xmin": mesh.xmin, "xmax": mesh.xmax, "ncell": mesh.ncell}
            if isinstance(mesh, Mesh1D)
            else {"dim": 2, "xmin": mesh.xmin, "xmax": mesh.xmax,
                  "ymin": mesh.ymin, "ymax": mesh.ymax,
                  "ncx": mesh.ncx, "ncy": mesh.ncy}
        ),
    }
    if result.errors is not None:
        meta["errors"] = {k: {"l2": v[0], "linf": v[1]}
                          for k, v in result.errors.items()}
    with open(path, "w") as f:
        json.dump(meta, f, indent=2)
        f.write("\n")
