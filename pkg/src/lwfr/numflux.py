"""Numerical fluxes at element faces.

Every flux is a function of the face trace data: the dissipation states
U_l, U_r (solution at t_n or its time average, chosen by the caller), the
time-average flux traces F_l, F_r, and the adjacent cell averages at t_n,
which supply the wave-speed estimates.  All functions are vectorized over
a leading face axis, with the variable index last.
"""

from dataclasses import dataclass

import numpy as np

from .equations import Euler1D
from .errors import CapabilityError, ConfigurationError

RUSANOV = "rusanov"
GLOBAL_LF = "global_lf"
ROE = "roe"
HLL = "hll"
HLLC = "hllc"
UPWIND = "upwind"
OSHER = "osher"


@dataclass
class FaceData:
    """Trace data at a set of faces.

    Ul/Ur   -- dissipation states (t_n traces for D1, time averages for D2)
    Fl/Fr   -- time-average flux traces
    ubar_l/ubar_r -- adjacent cell averages at t_n
    x, y    -- face coordinates (used by position-dependent laws)
    lam     -- wave speed bound for the global Lax-Friedrichs flux
    """

    Ul: np.ndarray
    Ur: np.ndarray
    Fl: np.ndarray
    Fr: np.ndarray
    ubar_l: np.ndarray = None
    ubar_r: np.ndarray = None
    x: np.ndarray = None
    y: np.ndarray = None
    lam: float = None


def _sigma(law, fd, u, direction):
    if law.dim == 1:
        return law.max_speed(fd.x, u)
    if direction == "x":
        return law.max_speed_x(fd.x, fd.y, u)
    return law.max_speed_y(fd.x, fd.y, u)


def rusanov(law, fd, direction="x"):
    lam = np.maximum(
        _sigma(law, fd, fd.ubar_l, direction), _sigma(law, fd, fd.ubar_r, direction)
    )
    return 0.5 * (fd.Fl + fd.Fr) - 0.5 * lam[..., None] * (fd.Ur - fd.Ul)


def global_lf(law, fd, direction="x"):
    if fd.lam is None:
        raise ConfigurationError("global Lax-Friedrichs flux needs a speed bound")
    return 0.5 * (fd.Fl + fd.Fr) - 0.5 * fd.lam * (fd.Ur - fd.Ul)


def upwind(law, fd, direction="x"):
    """Exact upwinding for (variable) advection: pick the flux trace on
    the side the wind blows from."""
    if law.dim == 1:
        a = law.flux(fd.x, np.ones(fd.Ul.shape))[..., 0]
    elif direction == "x":
        a = law.flux_x(fd.x, fd.y, np.ones(fd.Ul.shape))[..., 0]
    else:
        a = law.flux_y(fd.x, fd.y, np.ones(fd.Ul.shape))[..., 0]
    return np.where(a[..., None] >= 0.0, fd.Fl, fd.Fr)


def osher(law, fd, direction="x"):
    """Engquist-Osher style selection for the Burgers flux, branching on
    the adjacent cell averages."""
    al = fd.ubar_l[..., 0]
    ar = fd.ubar_r[..., 0]
    out = np.zeros_like(fd.Fl)
    pos_l = (al >= 0.0)[..., None]
    pos_r = (ar >= 0.0)[..., None]
    # sonic rarefaction (al < 0 < ar) contributes nothing; transonic shock
    # (al >= 0 >= ar) takes both one-sided parts
    out += np.where(pos_l, fd.Fl, 0.0)
    out += np.where(~pos_r, fd.Fr, 0.0)
    return out


def roe(law, fd, direction="x"):
    if not isinstance(law, Euler1D):
        raise CapabilityError("Roe flux implemented for 1-D Euler only")
    um = law.roe_average(fd.ubar_l, fd.ubar_r)
    R, lam, L = law.eigen(um)
    dU = fd.Ur - fd.Ul
    w = np.einsum("...ij,...j->...i", L, dU)
    diss = np.einsum("...ij,...j->...i", R, np.abs(lam) * w)
    return 0.5 * (fd.Fl + fd.Fr) - 0.5 * diss


def _toro_speeds(law, fd):
    """Slowest/fastest wave estimates from the cell averages, using the
    primitive-variable two-wave pressure estimate."""
    rl, vl, pl = law.primitives(fd.ubar_l)
    rr, vr, pr = law.primitives(fd.ubar_r)
    g = law.gamma
    cl = np.sqrt(g * pl / rl)
    cr = np.sqrt(g * pr / rr)
    rho_bar = 0.5 * (rl + rr)
    c_bar = 0.5 * (cl + cr)
    p_star = 0.5 * (pl + pr) - 0.5 * (vr - vl) * rho_bar * c_bar
    p_star = np.maximum(p_star, 0.0)

    def q(p_k):
        ratio = np.maximum(p_star / p_k, 1.0)
        return np.sqrt(1.0 + (g + 1.0) / (2.0 * g) * (ratio - 1.0))

    S_l = vl - cl * q(pl)
    S_r = vr + cr * q(pr)
    return S_l, S_r


def hll(law, fd, direction="x"):
    if not isinstance(law, Euler1D):
        raise CapabilityError("HLL flux implemented for 1-D Euler only")
    S_l, S_r = _toro_speeds(law, fd)
    sl = S_l[..., None]
    sr = S_r[..., None]
    F_star = (sr * fd.Fl - sl * fd.Fr + sl * sr * (fd.Ur - fd.Ul)) / (sr - sl)
    out = np.where(sl > 0.0, fd.Fl, np.where(sr < 0.0, fd.Fr, F_star))
    return out


def hllc(law, fd, direction="x"):
    """Three-wave solver with a restored contact, built entirely from the
    trace data so it applies to time-averaged quantities as well."""
    if not isinstance(law, Euler1D):
        raise CapabilityError("HLLC flux implemented for 1-D Euler only")
    S_l, S_r = _toro_speeds(law, fd)

    rho_l, m_l, E_l = fd.Ul[..., 0], fd.Ul[..., 1], fd.Ul[..., 2]
    rho_r, m_r, E_r = fd.Ur[..., 0], fd.Ur[..., 1], fd.Ur[..., 2]
    Fl_r, Fl_m, Fl_E = fd.Fl[..., 0], fd.Fl[..., 1], fd.Fl[..., 2]
    Fr_r, Fr_m, Fr_E = fd.Fr[..., 0], fd.Fr[..., 1], fd.Fr[..., 2]

    dl_rho = S_l * rho_l - Fl_r
    dr_rho = S_r * rho_r - Fr_r
    dl_m = S_l * m_l - Fl_m
    dr_m = S_r * m_r - Fr_m
    denom = dr_rho - dl_rho
    scale = np.abs(S_r) + np.abs(S_l) + 1e-300
    degenerate = np.abs(denom) < 1e-12 * scale
    safe = np.where(degenerate, 1.0, denom)
    u_star = (dr_m - dl_m) / safe
    p_star = (dr_m * dl_rho - dl_m * dr_rho) / safe

    def star_state(S, rho, m, E, F_r_, F_m_, F_E_):
        d = S - u_star
        d = np.where(np.abs(d) < 1e-12 * scale, np.sign(d) * 1e-12 * scale + 1e-300, d)
        rho_s = (S * rho - F_r_) / d
        E_s = (p_star * u_star + S * E - F_E_) / d
        return np.stack([rho_s, rho_s * u_star, E_s], axis=-1)

    U_sl = star_state(S_l, rho_l, m_l, E_l, Fl_r, Fl_m, Fl_E)
    U_sr = star_state(S_r, rho_r, m_r, E_r, Fr_r, Fr_m, Fr_E)
    F_sl = fd.Fl + S_l[..., None] * (U_sl - fd.Ul)
    F_sr = fd.Fr + S_r[..., None] * (U_sr - fd.Ur)

    sl = S_l[..., None]
    sr = S_r[..., None]
    us = np.broadcast_to(u_star[..., None], sl.shape)
    out = np.where(
        sl > 0.0,
        fd.Fl,
        np.where(sr < 0.0, fd.Fr, np.where(us >= 0.0, F_sl, F_sr)),
    )
    # fall back to HLL where the contact is ill-defined
    if np.any(degenerate):
        F_hll = (sr * fd.Fl - sl * fd.Fr + sl * sr * (fd.Ur - fd.Ul)) / (sr - sl)
        out = np.where(degenerate[..., None], F_hll, out)
    return out


FLUXES = {
    RUSANOV: rusanov,
    GLOBAL_LF: global_lf,
    ROE: roe,
    HLL: hll,
    HLLC: hllc,
    UPWIND: upwind,
    OSHER: osher,
}


def get_flux(name):
    try:
        return FLUXES[name]
    except KeyError:
        raise ConfigurationError(f"unknown numerical flux {name!r}") from None
