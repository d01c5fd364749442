"""Conservation-law descriptors.

Each law exposes the physical flux, a local wave-speed bound (spectral
radius of the flux Jacobian) and, where available, the eigen-structure
and primitive/conservative maps.  States are arrays with the variable
index last, so every method is vectorized over arbitrary leading axes;
scalar laws use a trailing axis of length one.
"""

import numpy as np

from ._kernels import euler_flux_pair, euler_flux_x, euler_flux_y
from .errors import CapabilityError, PositivityError


class ConservationLaw:
    """Base descriptor; 1-D laws implement flux/max_speed, 2-D laws the
    per-direction variants."""

    name = "base"
    n_vars = 1
    dim = 1
    has_eigen = False

    def flux(self, x, u):
        raise NotImplementedError

    def max_speed(self, x, u):
        raise NotImplementedError


# ---------------------------------------------------------------------------
# scalar laws, 1-D


class LinearAdvection1D(ConservationLaw):
    name = "linear_advection"

    def __init__(self, speed=1.0):
        self.speed = speed

    def flux(self, x, u):
        return self.speed * u

    def max_speed(self, x, u):
        return abs(self.speed) * np.ones(u.shape[:-1])


class VariableAdvection1D(ConservationLaw):
    """f(x,u) = a(x) u with a position-dependent speed."""

    name = "variable_advection"

    def __init__(self, a):
        self.a = a

    def flux(self, x, u):
        return np.asarray(self.a(x))[..., None] * u

    def max_speed(self, x, u):
        return np.broadcast_to(np.abs(self.a(x)), u.shape[:-1])


class Burgers1D(ConservationLaw):
    name = "burgers"

    def flux(self, x, u):
        return 0.5 * u * u

    def max_speed(self, x, u):
        return np.abs(u[..., 0])


class BuckleyLeverett1D(ConservationLaw):
    """f(u) = 4u^2 / (4u^2 + (1-u)^2); convex-concave with a sonic point."""

    name = "buckley_leverett"

    def flux(self, x, u):
        s = u
        return 4 * s**2 / (4 * s**2 + (1 - s) ** 2)

    def dflux(self, u):
        num = 4 * u**2
        den = 4 * u**2 + (1 - u) ** 2
        dnum = 8 * u
        dden = 8 * u - 2 * (1 - u)
        return (dnum * den - num * dden) / den**2

    def max_speed(self, x, u):
        return np.abs(self.dflux(u[..., 0]))


# ---------------------------------------------------------------------------
# Euler equations, 1-D


class Euler1D(ConservationLaw):
    name = "euler1d"
    n_vars = 3
    has_eigen = True

    def __init__(self, gamma=1.4):
        self.gamma = gamma

    def primitives(self, u, check=True):
        rho = u[..., 0]
        v = u[..., 1] / rho
        p = (self.gamma - 1.0) * (u[..., 2] - 0.5 * rho * v * v)
        if check and (np.any(rho <= 0) or np.any(p <= 0)):
            bad = (rho <= 0) | (p <= 0)
            raise PositivityError(
                "non-physical state", rho=np.min(rho[bad]), p=np.min(p[bad])
            )
        return rho, v, p

    def prim_to_cons(self, rho, v, p):
        rho = np.asarray(rho, dtype=float)
        E = p / (self.gamma - 1.0) + 0.5 * rho * v**2
        return np.stack(np.broadcast_arrays(rho, rho * v, E), axis=-1)

    def flux(self, x, u):
        # no check: the flux is rational in u and the time-derivative
        # stencils may probe slightly non-physical intermediate states
        rho, v, p = self.primitives(u, check=False)
        return np.stack([u[..., 1], p + rho * v * v, (u[..., 2] + p) * v], axis=-1)

    def sound_speed(self, u):
        rho, _, p = self.primitives(u)
        return np.sqrt(self.gamma * p / rho)

    def max_speed(self, x, u):
        rho, v, p = self.primitives(u)
        return np.abs(v) + np.sqrt(self.gamma * p / rho)

    def roe_average(self, ul, ur):
        """Conservative state whose velocity and enthalpy are the
        sqrt(rho)-weighted Roe averages of the two inputs."""
        g = self.gamma
        rl, vl, pl = self.primitives(ul)
        rr, vr, pr = self.primitives(ur)
        sl, sr = np.sqrt(rl), np.sqrt(rr)
        v = (sl * vl + sr * vr) / (sl + sr)
        Hl = (ul[..., 2] + pl) / rl
        Hr = (ur[..., 2] + pr) / rr
        H = (sl * Hl + sr * Hr) / (sl + sr)
        rho = sl * sr
        E = rho * (H + (g - 1.0) * 0.5 * v**2) / g
        return np.stack(np.broadcast_arrays(rho, rho * v, E), axis=-1)

    def eigen(self, u):
        """(R, lam, L) at the given state; R columns are the right
        eigenvectors for waves v-c, v, v+c and L = R^{-1}."""
        rho, v, p = self.primitives(u)
        c = np.sqrt(self.gamma * p / rho)
        H = (u[..., 2] + p) / rho
        one = np.ones_like(v)
        R = np.stack(
            [
                np.stack([one, one, one], axis=-1),
                np.stack([v - c, v, v + c], axis=-1),
                np.stack([H - v * c, 0.5 * v * v, H + v * c], axis=-1),
            ],
            axis=-2,
        )
        lam = np.stack([v - c, v, v + c], axis=-1)
        L = np.linalg.inv(R)
        return R, lam, L


# ---------------------------------------------------------------------------
# 2-D laws


class ConservationLaw2D(ConservationLaw):
    dim = 2

    def flux_x(self, x, y, u):
        raise NotImplementedError

    def flux_y(self, x, y, u):
        raise NotImplementedError

    def flux_pair(self, x, y, u):
        """Both flux components at once; laws override this when sharing
        intermediate quantities between the components is cheaper."""
        return self.flux_x(x, y, u), self.flux_y(x, y, u)

    def max_speed_x(self, x, y, u):
        raise NotImplementedError

    def max_speed_y(self, x, y, u):
        raise NotImplementedError


class VariableAdvection2D(ConservationLaw2D):
    """u_t + (a1(x,y) u)_x + (a2(x,y) u)_y = 0; covers constant velocity
    as a special case."""

    name = "advection2d"

    def __init__(self, a1, a2):
        self.a1 = a1
        self.a2 = a2

    def flux_x(self, x, y, u):
        return np.asarray(self.a1(x, y))[..., None] * u

    def flux_y(self, x, y, u):
        return np.asarray(self.a2(x, y))[..., None] * u

    def max_speed_x(self, x, y, u):
        return np.broadcast_to(np.abs(self.a1(x, y)), u.shape[:-1])

    def max_speed_y(self, x, y, u):
        return np.broadcast_to(np.abs(self.a2(x, y)), u.shape[:-1])


class Burgers2D(ConservationLaw2D):
    name = "burgers2d"

    def flux_x(self, x, y, u):
        return 0.5 * u * u

    flux_y = flux_x

    def max_speed_x(self, x, y, u):
        return np.abs(u[..., 0])

    max_speed_y = max_speed_x


class Euler2D(ConservationLaw2D):
    """Compressible Euler in 2-D with variables (rho, rho u, rho v, E)."""

    name = "euler2d"
    n_vars = 4
    has_eigen = True

    def __init__(self, gamma=1.4):
        self.gamma = gamma

    def primitives(self, u, check=True):
        rho = u[..., 0]
        vx = u[..., 1] / rho
        vy = u[..., 2] / rho
        p = (self.gamma - 1.0) * (u[..., 3] - 0.5 * rho * (vx**2 + vy**2))
        if check and (np.any(rho <= 0) or np.any(p <= 0)):
            bad = (rho <= 0) | (p <= 0)
            raise PositivityError(
                "non-physical state", rho=np.min(rho[bad]), p=np.min(p[bad])
            )
        return rho, vx, vy, p

    def prim_to_cons(self, rho, vx, vy, p):
        rho = np.asarray(rho, dtype=float)
        E = p / (self.gamma - 1.0) + 0.5 * rho * (vx**2 + vy**2)
        return np.stack(np.broadcast_arrays(rho, rho * vx, rho * vy, E), axis=-1)

    def flux_x(self, x, y, u):
        # unchecked (like the 1-D flux): the time-derivative stencils may
        # probe non-physical intermediate states
        return euler_flux_x(u, self.gamma)

    def flux_y(self, x, y, u):
        return euler_flux_y(u, self.gamma)

    def flux_pair(self, x, y, u):
        return euler_flux_pair(u, self.gamma)

    def max_speed_x(self, x, y, u):
        rho, vx, vy, p = self.primitives(u)
        return np.abs(vx) + np.sqrt(self.gamma * p / rho)

    def max_speed_y(self, x, y, u):
        rho, vx, vy, p = self.primitives(u)
        return np.abs(vy) + np.sqrt(self.gamma * p / rho)

    def _eigen(self, u, normal):
        rho, vx, vy, p = self.primitives(u)
        c = np.sqrt(self.gamma * p / rho)
        H = (u[..., 3] + p) / rho
        q2 = 0.5 * (vx**2 + vy**2)
        one = np.ones_like(c)
        zero = np.zeros_like(c)
        if normal == "x":
            vn, vt = vx, vy
            cols = [
                [one, one, zero, one],
                [vn - c, vn, zero, vn + c],
                [vt, vt, one, vt],
                [H - vn * c, q2, vt, H + vn * c],
            ]
        else:
            vn, vt = vy, vx
            cols = [
                [one, one, zero, one],
                [vt, vt, one, vt],
                [vn - c, vn, zero, vn + c],
                [H - vn * c, q2, vt, H + vn * c],
            ]
        R = np.stack([np.stack(row, axis=-1) for row in cols], axis=-2)
        lam = np.stack([vn - c, vn, vn, vn + c], axis=-1)
        L = np.linalg.inv(R)
        return R, lam, L

    def eigen_x(self, u):
        return self._eigen(u, "x")

    def eigen_y(self, u):
        return self._eigen(u, "y")


def eigen(law, u):
    if not law.has_eigen:
        raise CapabilityError(f"{law.name} has no eigen-decomposition")
    return law.eigen(u)


def roe_average(law, ul, ur):
    if not isinstance(law, Euler1D):
        raise CapabilityError("Roe average implemented for 1-D Euler only")
    return law.roe_average(ul, ur)


# ---------------------------------------------------------------------------
# exact Riemann solver for 1-D Euler (error oracle for Sod/Lax style data)


def exact_riemann(law, left, right, xi, tol=1e-12, max_iter=100):
    """Sample the exact solution of the Riemann problem at xi = x/t.

    ``left``/``right`` are primitive triples (rho, v, p).  Star-region
    pressure is found by Newton iteration started from the two-rarefaction
    approximation.  Returns primitive (rho, v, p) arrays shaped like xi.
    """
    g = law.gamma
    rl, vl, pl = left
    rr, vr, pr = right
    cl = np.sqrt(g * pl / rl)
    cr = np.sqrt(g * pr / rr)

    gp1 = g + 1.0
    gm1 = g - 1.0

    def f_side(p, rho_k, p_k, c_k):
        if p > p_k:  # shock
            A = 2.0 / (gp1 * rho_k)
            B = gm1 / gp1 * p_k
            f = (p - p_k) * np.sqrt(A / (p + B))
            df = np.sqrt(A / (B + p)) * (1.0 - (p - p_k) / (2.0 * (B + p)))
        else:  # rarefaction
            f = 2.0 * c_k / gm1 * ((p / p_k) ** (gm1 / (2 * g)) - 1.0)
            df = 1.0 / (rho_k * c_k) * (p / p_k) ** (-gp1 / (2 * g))
        return f, df

    # two-rarefaction initial guess
    p0 = (
        (cl + cr - 0.5 * gm1 * (vr - vl))
        / (cl / pl ** (gm1 / (2 * g)) + cr / pr ** (gm1 / (2 * g)))
    ) ** (2 * g / gm1)
    p_star = max(p0, tol)
    for _ in range(max_iter):
        fl, dfl = f_side(p_star, rl, pl, cl)
        fr, dfr = f_side(p_star, rr, pr, cr)
        f = fl + fr + (vr - vl)
        dp = f / (dfl + dfr)
        p_new = p_star - dp
        if p_new <= 0:
            p_new = 0.5 * p_star
        if abs(p_new - p_star) < tol * (1.0 + p_star):
            p_star = p_new
            break
        p_star = p_new
    fl, _ = f_side(p_star, rl, pl, cl)
    fr, _ = f_side(p_star, rr, pr, cr)
    v_star = 0.5 * (vl + vr) + 0.5 * (fr - fl)

    xi = np.asarray(xi, dtype=float)
    rho = np.empty_like(xi)
    v = np.empty_like(xi)
    p = np.empty_like(xi)

    def sample(s):
        if s <= v_star:  # left of contact
            if p_star > pl:  # left shock
                S = vl - cl * np.sqrt(gp1 / (2 * g) * p_star / pl + gm1 / (2 * g))
                if s < S:
                    return rl, vl, pl
                r = rl * ((p_star / pl + gm1 / gp1) / (gm1 / gp1 * p_star / pl + 1.0))
                return r, v_star, p_star
            # left rarefaction
            c_star = cl * (p_star / pl) ** (gm1 / (2 * g))
            if s < vl - cl:
                return rl, vl, pl
            if s > v_star - c_star:
                r = rl * (p_star / pl) ** (1.0 / g)
                return r, v_star, p_star
            c = (2.0 * cl + gm1 * (vl - s)) / gp1
            vv = s + c
            r = rl * (c / cl) ** (2.0 / gm1)
            return r, vv, pl * (c / cl) ** (2 * g / gm1)
        # right of contact
        if p_star > pr:  # right shock
            S = vr + cr * np.sqrt(gp1 / (2 * g) * p_star / pr + gm1 / (2 * g))
            if s > S:
                return rr, vr, pr
            r = rr * ((p_star / pr + gm1 / gp1) / (gm1 / gp1 * p_star / pr + 1.0))
            return r, v_star, p_star
        # right rarefaction
        c_star = cr * (p_star / pr) ** (gm1 / (2 * g))
        if s > vr + cr:
            return rr, vr, pr
        if s < v_star + c_star:
            r = rr * (p_star / pr) ** (1.0 / g)
            return r, v_star, p_star
        c = (2.0 * cr - gm1 * (vr - s)) / gp1
        vv = s - c
        r = rr * (c / cr) ** (2.0 / gm1)
        return r, vv, pr * (c / cr) ** (2 * g / gm1)

    flat = xi.ravel()
    out = np.array([sample(s) for s in flat])
    rho = out[:, 0].reshape(xi.shape)
    v = out[:, 1].reshape(xi.shape)
    p = out[:, 2].reshape(xi.shape)
    return rho, v, p
