"""Ready-made problem setups.

Each entry builds a RunConfig with the standard initial data, boundary
conditions and (where known) the exact solution; callers can override
degree, grid size, flux choice and the other solver knobs.
"""

import numpy as np
from dataclasses import replace

from . import equations as eq
from . import numflux
from .driver import (BC, DIRICHLET, MIXED, Mesh1D, Mesh2D, OUTFLOW, PERIODIC,
                     REFLECTING, RunConfig)
from .errors import ConfigurationError
from .limiter import LimiterConfig


def _periodic_pair():
    return (BC(PERIODIC), BC(PERIODIC))


def _newton_implicit(phi, w0, iters=50, tol=1e-14):
    """Solve w = phi(w) pointwise by damped fixed-point/Newton steps using
    numerical differentiation; adequate for smooth scalar profiles."""
    w = np.asarray(w0, dtype=float).copy()
    for _ in range(iters):
        f = w - phi(w)
        h = 1e-7
        df = 1.0 - (phi(w + h) - phi(w - h)) / (2.0 * h)
        df = np.where(np.abs(df) < 1e-12, 1.0, df)
        step = f / df
        w = w - step
        if np.max(np.abs(step)) < tol:
            break
    return w


# ---------------------------------------------------------------------------
# 1-D scalar problems


def linadv1d_sin(**kw):
    law = eq.LinearAdvection1D(1.0)

    def ic(x):
        return np.sin(2.0 * np.pi * x)[..., None]

    def exact(x, t):
        return np.sin(2.0 * np.pi * (x - t))[..., None]

    return _finish(RunConfig(law=law, ic=ic, exact=exact,
                             mesh=Mesh1D(0.0, 1.0, 40), degree=3, tfinal=1.0,
                             name="linadv1d_sin"), kw)


def linadv1d_wavepacket(**kw):
    law = eq.LinearAdvection1D(1.0)

    def profile(x):
        return np.exp(-10.0 * x * x) * np.sin(10.0 * np.pi * x)

    def ic(x):
        return profile(x)[..., None]

    def exact(x, t):
        # period-2 translate of the initial profile
        xs = np.mod(x - t + 1.0, 2.0) - 1.0
        return profile(xs)[..., None]

    return _finish(RunConfig(law=law, ic=ic, exact=exact,
                             mesh=Mesh1D(-1.0, 1.0, 50), degree=3, tfinal=1.0,
                             name="linadv1d_wavepacket"), kw)


def linadv1d_hat(**kw):
    law = eq.LinearAdvection1D(1.0)

    def profile(x):
        return np.where((x > 0.25) & (x < 0.75), 1.0, 0.0)

    def ic(x):
        return profile(x)[..., None]

    def exact(x, t):
        return profile(np.mod(x - t, 1.0))[..., None]

    return _finish(RunConfig(law=law, ic=ic, exact=exact,
                             mesh=Mesh1D(0.0, 1.0, 100), degree=3, tfinal=1.0,
                             limiter=LimiterConfig(kind="tvb", M=100.0),
                             name="linadv1d_hat"), kw)


def linadv1d_composite(**kw):
    """Smooth/square/triangle/ellipse combination profile, advected for
    four periods."""
    law = eq.LinearAdvection1D(1.0)
    a = 0.5
    z = -0.7
    delta = 0.005
    alpha = 10.0
    beta = np.log(2.0) / (36.0 * delta * delta)

    def G(x, c):
        return np.exp(-beta * (x - c) ** 2)

    def F(x, c):
        return np.sqrt(np.maximum(1.0 - alpha * alpha * (x - c) ** 2, 0.0))

    def profile(x):
        u = np.zeros_like(x)
        m = (x >= -0.8) & (x <= -0.6)
        u = np.where(m, (G(x, z - delta) + G(x, z + delta) + 4.0 * G(x, z)) / 6.0, u)
        m = (x >= -0.4) & (x <= -0.2)
        u = np.where(m, 1.0, u)
        m = (x >= 0.0) & (x <= 0.2)
        u = np.where(m, 1.0 - np.abs(10.0 * (x - 0.1)), u)
        m = (x >= 0.4) & (x <= 0.6)
        u = np.where(m, (F(x, a - delta) + F(x, a + delta) + 4.0 * F(x, a)) / 6.0, u)
        return u

    def ic(x):
        return profile(x)[..., None]

    def exact(x, t):
        xs = np.mod(x - t + 1.0, 2.0) - 1.0
        return profile(xs)[..., None]

    return _finish(RunConfig(law=law, ic=ic, exact=exact,
                             mesh=Mesh1D(-1.0, 1.0, 100), degree=3, tfinal=8.0,
                             limiter=LimiterConfig(kind="tvb", M=50.0),
                             name="linadv1d_composite"), kw)


def varadv1d_x(**kw):
    """a(x) = x on [0.1, 2 pi]; the solution decays and compresses toward
    the inflow end."""
    law = eq.VariableAdvection1D(lambda x: x)

    def profile(x):
        return np.sin(12.0 * (x - 0.1))

    def exact(x, t):
        return (np.exp(-t) * profile(x * np.exp(-t)))[..., None]

    def ic(x):
        return exact(x, 0.0)

    bc = (BC(DIRICHLET, g=lambda t: exact(np.array(0.1), t)), BC(OUTFLOW))
    return _finish(RunConfig(law=law, ic=ic, exact=exact, bc=bc,
                             mesh=Mesh1D(0.1, 2.0 * np.pi, 50), degree=3,
                             tfinal=1.0, name="varadv1d_x"), kw)


def varadv1d_x2(**kw):
    """a(x) = x^2 on [0.1, 1] with inflow data on the left."""
    law = eq.VariableAdvection1D(lambda x: x * x)

    def profile(x):
        return np.cos(0.5 * np.pi * x)

    def exact(x, t):
        s = 1.0 + t * x
        return (profile(x / s) / (s * s))[..., None]

    def ic(x):
        return exact(x, 0.0)

    bc = (BC(DIRICHLET, g=lambda t: exact(np.array(0.1), t)), BC(OUTFLOW))
    return _finish(RunConfig(law=law, ic=ic, exact=exact, bc=bc,
                             mesh=Mesh1D(0.1, 1.0, 50), degree=3, tfinal=1.0,
                             name="varadv1d_x2"), kw)


def burgers1d_sin(**kw):
    """u0 = 0.2 sin(x); smooth until t = 5, run to t = 2."""
    law = eq.Burgers1D()

    def ic(x):
        return (0.2 * np.sin(x))[..., None]

    def exact(x, t):
        w = _newton_implicit(lambda w: 0.2 * np.sin(x - w * t), 0.2 * np.sin(x))
        return w[..., None]

    return _finish(RunConfig(law=law, ic=ic, exact=exact,
                             mesh=Mesh1D(0.0, 2.0 * np.pi, 50), degree=3,
                             tfinal=2.0, name="burgers1d_sin"), kw)


def buckley_leverett(**kw):
    """Non-convex scalar flux; box initial data, bound-preserving run."""
    law = eq.BuckleyLeverett1D()

    def ic(x):
        return np.where((x >= -0.5) & (x <= 0.0), 1.0, 0.0)[..., None]

    return _finish(RunConfig(law=law, ic=ic,
                             mesh=Mesh1D(-1.0, 1.0, 50), degree=3, tfinal=0.4,
                             flux=numflux.UPWIND,
                             limiter=LimiterConfig(kind="tvb", M=0.0,
                                                   positivity=True),
                             positivity_bounds=(0.0, 1.0),
                             cfl_override=0.079,
                             name="buckley_leverett"), kw)


# ---------------------------------------------------------------------------
# 1-D Euler


def _euler_ic_from_primitives(law, prim_fn):
    def ic(x):
        rho, v, p = prim_fn(x)
        return law.prim_to_cons(np.broadcast_to(rho, x.shape),
                                np.broadcast_to(v, x.shape),
                                np.broadcast_to(p, x.shape))
    return ic


def euler1d_density_wave(**kw):
    law = eq.Euler1D()

    def exact(x, t):
        rho = 1.0 + 0.5 * np.sin(2.0 * np.pi * (x - t))
        return law.prim_to_cons(rho, np.ones_like(x), np.ones_like(x))

    return _finish(RunConfig(law=law, ic=lambda x: exact(x, 0.0), exact=exact,
                             mesh=Mesh1D(0.0, 1.0, 40), degree=3, tfinal=1.0,
                             name="euler1d_density_wave"), kw)


def _riemann_preset(name, left, right, x0, xmin, xmax, tfinal, n_cells, m_tvb,
                    positivity=False, **kw):
    law = eq.Euler1D()

    def prim(x):
        m = x < x0
        rho = np.where(m, left[0], right[0])
        v = np.where(m, left[1], right[1])
        p = np.where(m, left[2], right[2])
        return rho, v, p

    def exact(x, t):
        if t <= 0.0:
            rho, v, p = prim(x)
        else:
            rho, v, p = eq.exact_riemann(law, left, right, (x - x0) / t)
        return law.prim_to_cons(rho, v, p)

    return _finish(RunConfig(
        law=law, ic=_euler_ic_from_primitives(law, prim), exact=exact,
        mesh=Mesh1D(xmin, xmax, n_cells), degree=3, tfinal=tfinal,
        flux=numflux.HLLC,
        bc=(BC(OUTFLOW), BC(OUTFLOW)),
        limiter=LimiterConfig(kind="tvb", M=m_tvb, characteristic=True,
                              positivity=positivity),
        name=name,
    ), kw)


def euler1d_sod(**kw):
    return _riemann_preset("euler1d_sod", (1.0, 0.0, 1.0), (0.125, 0.0, 0.1),
                           0.5, 0.0, 1.0, 0.2, 100, 10.0, **kw)


def euler1d_lax(**kw):
    return _riemann_preset("euler1d_lax", (0.445, 0.698, 3.528),
                           (0.5, 0.0, 0.571), 0.0, -5.0, 5.0, 1.3, 200, 1.0,
                           **kw)


def euler1d_toro5(**kw):
    return _riemann_preset("euler1d_toro5", (1.0, -19.59745, 1000.0),
                           (1.0, -19.59745, 0.01), 0.8, 0.0, 1.0, 0.012, 100,
                           1.0, positivity=True, **kw)


def euler1d_contact(**kw):
    """Stationary contact; the exact solution equals the initial data."""
    law = eq.Euler1D()

    def exact(x, t):
        rho = np.where(x < 0.5, 1.0, 2.0)
        return law.prim_to_cons(rho, np.zeros_like(x), np.ones_like(x))

    return _finish(RunConfig(law=law, ic=lambda x: exact(x, 0.0), exact=exact,
                             mesh=Mesh1D(0.0, 1.0, 100), degree=4, tfinal=1.0,
                             flux=numflux.HLLC,
                             bc=(BC(OUTFLOW), BC(OUTFLOW)),
                             limiter=LimiterConfig(kind="tvb", M=1.0,
                                                   characteristic=True),
                             name="euler1d_contact"), kw)


def euler1d_shu_osher(**kw):
    """Mach-3 shock running into a sinusoidally perturbed density field."""
    law = eq.Euler1D()

    def prim(x):
        m = x < -4.0
        rho = np.where(m, 3.857143, 1.0 + 0.2 * np.sin(5.0 * x))
        v = np.where(m, 2.629369, 0.0)
        p = np.where(m, 10.333333, 1.0)
        return rho, v, p

    return _finish(RunConfig(law=law, ic=_euler_ic_from_primitives(law, prim),
                             mesh=Mesh1D(-5.0, 5.0, 400), degree=3,
                             tfinal=1.8, flux=numflux.HLLC,
                             bc=(BC(OUTFLOW), BC(OUTFLOW)),
                             limiter=LimiterConfig(kind="tvb", M=300.0,
                                                   characteristic=True),
                             name="euler1d_shu_osher"), kw)


def euler1d_blast(**kw):
    """Two interacting blast waves between solid walls."""
    law = eq.Euler1D()

    def prim(x):
        p = np.where(x < 0.1, 1000.0, np.where(x > 0.9, 100.0, 0.01))
        return np.ones_like(x), np.zeros_like(x), p

    return _finish(RunConfig(law=law, ic=_euler_ic_from_primitives(law, prim),
                             mesh=Mesh1D(0.0, 1.0, 400), degree=3,
                             tfinal=0.038, flux=numflux.HLLC,
                             bc=(BC(REFLECTING), BC(REFLECTING)),
                             limiter=LimiterConfig(kind="tvb", M=300.0,
                                                   characteristic=True,
                                                   positivity=True),
                             name="euler1d_blast"), kw)


# ---------------------------------------------------------------------------
# 2-D problems


def advection2d_sin(**kw):
    law = eq.VariableAdvection2D(lambda x, y: np.ones_like(x),
                                 lambda x, y: np.ones_like(x))

    def exact(x, y, t):
        return (np.sin(2.0 * np.pi * (x - t)) * np.sin(2.0 * np.pi * (y - t)))[..., None]

    return _finish(RunConfig(law=law, ic=lambda x, y: exact(x, y, 0.0),
                             exact=exact,
                             mesh=Mesh2D(0.0, 1.0, 0.0, 1.0, 20, 20),
                             degree=3, tfinal=1.0, name="advection2d_sin"), kw)


def rotation2d(**kw):
    """Solid-body rotation of a Gaussian on the unit square; the bottom
    and right sides are inflow."""
    law = eq.VariableAdvection2D(lambda x, y: -y, lambda x, y: x)

    def profile(x, y):
        return 1.0 + np.exp(-50.0 * ((x - 0.5) ** 2 + y * y))

    def exact(x, y, t):
        ct, st = np.cos(t), np.sin(t)
        return profile(x * ct + y * st, -x * st + y * ct)[..., None]

    def gdata(x, y, t):
        return exact(x, y, t)

    bc = {
        "S": BC(DIRICHLET, g=gdata),
        "E": BC(DIRICHLET, g=gdata),
        "N": BC(OUTFLOW),
        "W": BC(OUTFLOW),
    }
    return _finish(RunConfig(law=law, ic=lambda x, y: exact(x, y, 0.0),
                             exact=exact, bc=bc,
                             mesh=Mesh2D(0.0, 1.0, 0.0, 1.0, 20, 20),
                             degree=3, tfinal=0.5 * np.pi,
                             name="rotation2d"), kw)


def rotation2d_composite(**kw):
    """Hump, cone and slotted disc rotating once about the square centre."""
    law = eq.VariableAdvection2D(lambda x, y: 0.5 - y, lambda x, y: x - 0.5)
    r0 = 0.15

    def profile(x, y):
        u = np.zeros_like(x)
        # cosine hump
        r = np.sqrt((x - 0.25) ** 2 + (y - 0.5) ** 2) / r0
        u = np.where(r <= 1.0, 0.25 * (1.0 + np.cos(np.pi * np.minimum(r, 1.0))), u)
        # cone
        r = np.sqrt((x - 0.5) ** 2 + (y - 0.25) ** 2) / r0
        u = np.where(r <= 1.0, 1.0 - r, u)
        # slotted disc
        r = np.sqrt((x - 0.5) ** 2 + (y - 0.75) ** 2) / r0
        slot = (np.abs(x - 0.5) < 0.025) & (y < 0.85)
        u = np.where((r <= 1.0) & ~slot, 1.0, u)
        return u

    def exact(x, y, t):
        ct, st = np.cos(t), np.sin(t)
        xr = 0.5 + (x - 0.5) * ct + (y - 0.5) * st
        yr = 0.5 - (x - 0.5) * st + (y - 0.5) * ct
        return profile(xr, yr)[..., None]

    return _finish(RunConfig(law=law, ic=lambda x, y: exact(x, y, 0.0),
                             exact=exact,
                             mesh=Mesh2D(0.0, 1.0, 0.0, 1.0, 50, 50),
                             degree=3, tfinal=2.0 * np.pi,
                             limiter=LimiterConfig(kind="tvb", M=100.0,
                                                   positivity=True),
                             positivity_bounds=(0.0, 1.0),
                             name="rotation2d_composite"), kw)


def burgers2d_sin(**kw):
    law = eq.Burgers2D()

    def ic(x, y):
        return (0.25 + 0.5 * np.sin(2.0 * np.pi * (x + y)))[..., None]

    def exact(x, y, t):
        s = x + y
        w0 = 0.25 + 0.5 * np.sin(2.0 * np.pi * s)
        w = _newton_implicit(
            lambda w: 0.25 + 0.5 * np.sin(2.0 * np.pi * (s - 2.0 * w * t)), w0
        )
        return w[..., None]

    return _finish(RunConfig(law=law, ic=ic, exact=exact,
                             mesh=Mesh2D(0.0, 1.0, 0.0, 1.0, 20, 20),
                             degree=3, tfinal=0.1, name="burgers2d_sin"), kw)


def euler2d_vortex(**kw):
    """Isentropic vortex advected diagonally across a periodic box."""
    law = eq.Euler2D()
    gamma = law.gamma
    beta = 5.0
    Mach = 0.5
    alpha = np.pi / 4.0
    vx0 = Mach * np.cos(alpha)
    vy0 = Mach * np.sin(alpha)
    L = 20.0

    def state(x, y):
        r2 = x * x + y * y
        e = np.exp(0.5 * (1.0 - r2))
        T = 1.0 - (gamma - 1.0) * beta * beta / (8.0 * gamma * np.pi ** 2) * np.exp(1.0 - r2)
        rho = T ** (1.0 / (gamma - 1.0))
        vx = vx0 - beta * y / (2.0 * np.pi) * e
        vy = vy0 + beta * x / (2.0 * np.pi) * e
        p = rho ** gamma
        return law.prim_to_cons(rho, vx, vy, p)

    def exact(x, y, t):
        xs = np.mod(x - vx0 * t + 10.0, L) - 10.0
        ys = np.mod(y - vy0 * t + 10.0, L) - 10.0
        return state(xs, ys)

    return _finish(RunConfig(law=law, ic=lambda x, y: exact(x, y, 0.0),
                             exact=exact,
                             mesh=Mesh2D(-10.0, 10.0, -10.0, 10.0, 20, 20),
                             degree=3, tfinal=20.0 * np.sqrt(2.0) / Mach,
                             name="euler2d_vortex"), kw)


def euler2d_dmr(**kw):
    """Double Mach reflection of a Mach-10 shock off a 30-degree ramp,
    posed in the frame where the wall is the x-axis."""
    law = eq.Euler2D()
    x0 = 1.0 / 6.0
    tan60 = np.tan(np.pi / 3.0)
    post = (8.0, 8.25 * np.cos(np.pi / 6.0), -8.25 * np.sin(np.pi / 6.0), 116.5)
    pre = (1.4, 0.0, 0.0, 1.0)

    def state_at(x, y, t):
        # shock front along x = x0 + (y + 20 t) / tan(60)
        xs = x0 + (y + 20.0 * t) / tan60
        m = x < xs
        rho = np.where(m, post[0], pre[0])
        vx = np.where(m, post[1], pre[1])
        vy = np.where(m, post[2], pre[2])
        p = np.where(m, post[3], pre[3])
        return law.prim_to_cons(rho, vx, vy, p)

    bc = {
        "W": BC(DIRICHLET, g=lambda x, y, t: state_at(x, y, t)),
        "E": BC(OUTFLOW),
        "S": BC(MIXED, segments=[(0.0, x0, BC(OUTFLOW)),
                                 (x0, 4.0, BC(REFLECTING))]),
        "N": BC(DIRICHLET, g=lambda x, y, t: state_at(x, y, t)),
    }
    return _finish(RunConfig(law=law, ic=lambda x, y: state_at(x, y, 0.0),
                             bc=bc,
                             mesh=Mesh2D(0.0, 4.0, 0.0, 1.0, 240, 60),
                             degree=3, tfinal=0.2, flux=numflux.RUSANOV,
                             limiter=LimiterConfig(kind="tvb", M=100.0,
                                                   positivity=True),
                             name="euler2d_dmr"), kw)


# ---------------------------------------------------------------------------


PRESETS = {
    "linadv1d_sin": linadv1d_sin,
    "linadv1d_wavepacket": linadv1d_wavepacket,
    "linadv1d_hat": linadv1d_hat,
    "linadv1d_composite": linadv1d_composite,
    "varadv1d_x": varadv1d_x,
    "varadv1d_x2": varadv1d_x2,
    "burgers1d_sin": burgers1d_sin,
    "buckley_leverett": buckley_leverett,
    "euler1d_density_wave": euler1d_density_wave,
    "euler1d_sod": euler1d_sod,
    "euler1d_lax": euler1d_lax,
    "euler1d_toro5": euler1d_toro5,
    "euler1d_contact": euler1d_contact,
    "euler1d_shu_osher": euler1d_shu_osher,
    "euler1d_blast": euler1d_blast,
    "advection2d_sin": advection2d_sin,
    "rotation2d": rotation2d,
    "rotation2d_composite": rotation2d_composite,
    "burgers2d_sin": burgers2d_sin,
    "euler2d_vortex": euler2d_vortex,
    "euler2d_dmr": euler2d_dmr,
}

# RunConfig fields that overrides may touch directly
_CONFIG_KEYS = {
    "degree", "tfinal", "points", "correction", "dissipation", "face_mode",
    "flux", "scheme", "rk_scheme", "limiter", "bc", "cfl_safety",
    "cfl_override", "dt_max", "positivity_bounds", "exact",
}


def _finish(config, overrides):
    mesh_kw = {}
    cfg_kw = {}
    lim_kw = {}
    for key, val in overrides.items():
        if key in ("ncell", "ncx", "ncy"):
            mesh_kw[key] = val
        elif key in _CONFIG_KEYS:
            cfg_kw[key] = val
        elif key in ("limiter_kind", "M", "characteristic", "positivity"):
            lim_kw["kind" if key == "limiter_kind" else key] = val
        else:
            raise ConfigurationError(f"unknown preset override {key!r}")
    mesh = config.mesh
    if mesh_kw:
        if isinstance(mesh, Mesh1D):
            mesh = replace(mesh, ncell=mesh_kw.get("ncell", mesh.ncell))
        else:
            n = mesh_kw.get("ncell")
            mesh = replace(mesh,
                           ncx=mesh_kw.get("ncx", n or mesh.ncx),
                           ncy=mesh_kw.get("ncy", n or mesh.ncy))
    if lim_kw:
        cfg_kw["limiter"] = replace(config.limiter, **lim_kw)
    return replace(config, mesh=mesh, **cfg_kw)


def preset(name, **overrides):
    try:
        factory = PRESETS[name]
    except KeyError:
        raise ConfigurationError(f"unknown preset {name!r}") from None
    return factory(**overrides)
