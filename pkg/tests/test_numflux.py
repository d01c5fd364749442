"""Numerical face fluxes: consistency, upwinding, contact restoration."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lwfr import equations as eq
from lwfr import numflux
from lwfr.errors import CapabilityError, ConfigurationError
from lwfr.numflux import FaceData


def euler_face(prim_l, prim_r, law=None):
    law = law or eq.Euler1D()
    Ul = law.prim_to_cons(*map(np.atleast_1d, prim_l))
    Ur = law.prim_to_cons(*map(np.atleast_1d, prim_r))
    return law, FaceData(Ul=Ul, Ur=Ur, Fl=law.flux(None, Ul), Fr=law.flux(None, Ur),
                         ubar_l=Ul, ubar_r=Ur, lam=20.0)


EULER_FLUXES = ["rusanov", "global_lf", "roe", "hll", "hllc"]


@pytest.mark.parametrize("name", EULER_FLUXES)
def test_consistency_euler(name):
    # equal traces on both sides return the physical flux
    law, fd = euler_face((1.3, 0.4, 2.1), (1.3, 0.4, 2.1))
    out = numflux.get_flux(name)(law, fd)
    assert np.max(np.abs(out - fd.Fl)) < 1e-13


@given(st.floats(min_value=-3, max_value=3))
@settings(max_examples=40, deadline=None)
def test_consistency_scalar(u0):
    law = eq.Burgers1D()
    U = np.array([[u0]])
    fd = FaceData(Ul=U, Ur=U, Fl=law.flux(None, U), Fr=law.flux(None, U),
                  ubar_l=U, ubar_r=U, lam=5.0)
    for name in ("rusanov", "global_lf", "osher"):
        out = numflux.get_flux(name)(law, fd)
        assert abs(out[0, 0] - 0.5 * u0 * u0) < 1e-13


def test_rusanov_dissipation_sign():
    # for a right-moving jump the flux lies below the arithmetic mean
    law = eq.Burgers1D()
    Ul = np.array([[2.0]])
    Ur = np.array([[1.0]])
    fd = FaceData(Ul=Ul, Ur=Ur, Fl=law.flux(None, Ul), Fr=law.flux(None, Ur),
                  ubar_l=Ul, ubar_r=Ur)
    out = numflux.rusanov(law, fd)
    mean = 0.5 * (fd.Fl + fd.Fr)
    # Ur < Ul so the dissipation term adds +0.5*lam*(Ul-Ur)
    assert out[0, 0] == pytest.approx(mean[0, 0] + 0.5 * 2.0 * 1.0)


def test_global_lf_uses_supplied_bound_and_requires_it():
    law = eq.Burgers1D()
    Ul = np.array([[1.0]])
    Ur = np.array([[-1.0]])
    fd = FaceData(Ul=Ul, Ur=Ur, Fl=law.flux(None, Ul), Fr=law.flux(None, Ur),
                  ubar_l=Ul, ubar_r=Ur, lam=7.0)
    out = numflux.global_lf(law, fd)
    assert out[0, 0] == pytest.approx(0.5 * (0.5 + 0.5) - 0.5 * 7.0 * (-2.0))
    fd.lam = None
    with pytest.raises(ConfigurationError):
        numflux.global_lf(law, fd)


def test_global_lf_at_least_as_dissipative_as_rusanov():
    # when lam bounds every local speed the global flux dissipates at
    # least as much on each face
    law = eq.Burgers1D()
    rng = np.random.default_rng(0)
    Ul = rng.uniform(-2, 2, (30, 1))
    Ur = rng.uniform(-2, 2, (30, 1))
    fd = FaceData(Ul=Ul, Ur=Ur, Fl=law.flux(None, Ul), Fr=law.flux(None, Ur),
                  ubar_l=Ul, ubar_r=Ur, lam=2.0)
    glf = numflux.global_lf(law, fd)
    rus = numflux.rusanov(law, fd)
    mean = 0.5 * (fd.Fl + fd.Fr)
    assert np.all(np.abs(glf - mean) >= np.abs(rus - mean) - 1e-14)


def test_upwind_picks_wind_side():
    fd = FaceData(Ul=np.ones((2, 1)), Ur=np.ones((2, 1)),
                  Fl=np.array([[1.0], [1.0]]), Fr=np.array([[2.0], [2.0]]),
                  x=np.array([0.5, -0.5]))
    law = eq.VariableAdvection1D(lambda x: x)
    out = numflux.upwind(law, fd)
    assert out[0, 0] == 1.0   # a > 0: left trace
    assert out[1, 0] == 2.0   # a < 0: right trace


def test_osher_branches():
    law = eq.Burgers1D()

    def fd_for(al, ar):
        Ul = np.array([[al]])
        Ur = np.array([[ar]])
        return FaceData(Ul=Ul, Ur=Ur, Fl=np.array([[10.0]]),
                        Fr=np.array([[20.0]]), ubar_l=Ul, ubar_r=Ur)

    assert numflux.osher(law, fd_for(1.0, 2.0))[0, 0] == 10.0          # both right-moving
    assert numflux.osher(law, fd_for(1.0, -1.0))[0, 0] == 30.0         # transonic shock
    assert numflux.osher(law, fd_for(-1.0, 1.0))[0, 0] == 0.0          # sonic rarefaction
    assert numflux.osher(law, fd_for(-1.0, -2.0))[0, 0] == 20.0        # both left-moving


def test_euler_only_fluxes_guard():
    law = eq.Burgers1D()
    U = np.ones((1, 1))
    fd = FaceData(Ul=U, Ur=U, Fl=U, Fr=U, ubar_l=U, ubar_r=U)
    for name in ("roe", "hll", "hllc"):
        with pytest.raises(CapabilityError):
            numflux.get_flux(name)(law, fd)


def test_unknown_flux_name():
    with pytest.raises(ConfigurationError):
        numflux.get_flux("bogus")


def test_hllc_stationary_contact_flux():
    # stationary contact: exact flux is (0, p, 0); HLLC restores it,
    # Rusanov does not
    law, fd = euler_face((1.0, 0.0, 1.0), (2.0, 0.0, 1.0))
    out = numflux.hllc(law, fd)
    assert np.max(np.abs(out - np.array([0.0, 1.0, 0.0]))) < 1e-12
    rus = numflux.rusanov(law, fd)
    assert abs(rus[0, 0]) > 1e-2  # nonzero mass flux smears the contact


def test_hllc_moving_contact_mass_flux():
    # contact moving at speed v: mass flux is rho_upwind * v
    law, fd = euler_face((1.0, 0.5, 1.0), (2.0, 0.5, 1.0))
    out = numflux.hllc(law, fd)
    assert abs(out[0, 0] - 1.0 * 0.5) < 1e-12
    assert abs(out[0, 1] - (1.0 + 1.0 * 0.25)) < 1e-12


@pytest.mark.parametrize("name", ["hll", "hllc"])
def test_supersonic_branches(name):
    flux = numflux.get_flux(name)
    # strongly right-moving flow: flux equals the left trace flux
    law, fd = euler_face((1.0, 5.0, 1.0), (1.0, 5.0, 1.0))
    fd.Fr = fd.Fr + 100.0  # corrupt the unused side to prove selection
    out = flux(law, fd)
    assert np.max(np.abs(out - fd.Fl)) < 1e-13
    # strongly left-moving flow
    law, fd = euler_face((1.0, -5.0, 1.0), (1.0, -5.0, 1.0))
    fd.Fl = fd.Fl - 100.0
    out = flux(law, fd)
    assert np.max(np.abs(out - fd.Fr)) < 1e-13


def test_toro_speeds_bracket_exact_waves():
    # Sod data: estimates must bracket the exact fan (-c_l, shock speed)
    law, fd = euler_face((1.0, 0.0, 1.0), (0.125, 0.0, 0.1))
    S_l, S_r = numflux._toro_speeds(law, fd)
    assert S_l[0] <= -np.sqrt(1.4) + 1e-12
    assert S_r[0] >= 1.75  # exact right shock speed is about 1.7522


def test_roe_captures_stationary_shock():
    # a stationary shock satisfying the jump conditions gives equal
    # fluxes; Roe dissipation then vanishes and preserves it exactly
    law = eq.Euler1D()
    g = law.gamma
    # pre-shock state, Mach 2 flow into a standing shock
    rho_l, v_l, p_l = 1.0, 2.0 * np.sqrt(g), 1.0
    M2 = 4.0
    rho_r = rho_l * (g + 1) * M2 / ((g - 1) * M2 + 2)
    p_r = p_l * (2 * g * M2 - (g - 1)) / (g + 1)
    v_r = rho_l * v_l / rho_r
    law, fd = euler_face((rho_l, v_l, p_l), (rho_r, v_r, p_r))
    assert np.max(np.abs(fd.Fl - fd.Fr)) < 1e-12
    out = numflux.roe(law, fd)
    assert np.max(np.abs(out - fd.Fl)) < 1e-11


def test_hllc_degenerate_faces_fall_back_to_hll():
    # equal states make the contact ill-defined; result must still be the
    # consistent physical flux, not NaN
    law, fd = euler_face((1.0, 0.0, 1.0), (1.0, 0.0, 1.0))
    out = numflux.hllc(law, fd)
    assert np.all(np.isfinite(out))
    assert np.max(np.abs(out - fd.Fl)) < 1e-13
