"""Post-step limiting: minmod properties, mean preservation, positivity."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lwfr import equations as eq
from lwfr import limiter
from lwfr.basis import build_operators
from lwfr.errors import PositivityError
from lwfr.limiter import LimiterConfig

finite = st.floats(min_value=-10, max_value=10, allow_nan=False)


@given(a=finite, b=finite, c=finite)
@settings(max_examples=100, deadline=None)
def test_minmod_properties(a, b, c):
    m = limiter.minmod(np.array(a), np.array(b), np.array(c))
    # bounded in magnitude by each argument, sign agrees or zero
    assert abs(m) <= min(abs(a), abs(b), abs(c)) + 1e-15
    if np.sign(a) == np.sign(b) == np.sign(c) and a != 0:
        assert np.sign(m) == np.sign(a)
    else:
        assert m == 0.0


def test_minmod_componentwise():
    a = np.array([1.0, -1.0, 2.0])
    b = np.array([2.0, -3.0, -1.0])
    c = np.array([0.5, -0.5, 1.0])
    assert np.allclose(limiter.minmod(a, b, c), [0.5, -0.5, 0.0])


def test_tvb_relaxation_threshold():
    # small first arguments pass through untouched; large ones are limited
    a = np.array([0.001, 1.0])
    b = np.array([5.0, 5.0])
    c = np.array([-5.0, -5.0])
    out = limiter.tvb_minmod(a, b, c, M=10.0, dx=0.1)
    assert out[0] == 0.001          # |a| <= M dx^2 = 0.1
    assert out[1] == 0.0            # limited: signs disagree


def test_tvb_reduces_to_tvd_at_m_zero():
    rng = np.random.default_rng(0)
    a, b, c = rng.standard_normal((3, 50))
    assert np.array_equal(limiter.tvb_minmod(a, b, c, 0.0, 0.1),
                          limiter.minmod(a, b, c))


def setup_field_1d(degree=2, ncell=8, nv=1, seed=0, amp=1.0):
    ops = build_operators("gl", degree, "radau")
    rng = np.random.default_rng(seed)
    u = amp * rng.standard_normal((ncell, degree + 1, nv))
    w = ops.weights / ops.weights.sum()
    ubar = np.einsum("j,cjv->cv", w, u)
    return ops, u, ubar, w


def test_tvd_limit_preserves_cell_means():
    ops, u, ubar, w = setup_field_1d(seed=1)
    ul = np.roll(ubar, 1, axis=0)
    ur = np.roll(ubar, -1, axis=0)
    cfg = LimiterConfig(kind=limiter.TVB, M=0.0)
    out = limiter.tvd_limit_1d(u, ubar, ul, ur, ops, cfg, dx=0.1)
    new_bar = np.einsum("j,cjv->cv", w, out)
    assert np.max(np.abs(new_bar - ubar)) < 1e-14
    assert not np.array_equal(out, u)  # random data does get limited


def test_tvd_limit_leaves_linear_data_alone():
    # a globally linear profile is TVD-compatible; nothing changes
    ops = build_operators("gl", 2, "radau")
    ncell = 8
    dx = 1.0 / ncell
    x = (np.arange(ncell)[:, None] + ops.nodes[None, :]) * dx
    u = (2.0 * x + 1.0)[..., None]
    w = ops.weights / ops.weights.sum()
    ubar = np.einsum("j,cjv->cv", w, u)
    ul = ubar - 2.0 * dx
    ur = ubar + 2.0 * dx
    cfg = LimiterConfig(kind=limiter.TVB, M=0.0)
    out = limiter.tvd_limit_1d(u, ubar, ul, ur, ops, cfg, dx=dx)
    assert np.max(np.abs(out - u)) < 1e-12


def test_tvd_limited_faces_are_bounded_by_neighbour_jumps():
    # after limiting, face deviations from the mean never exceed the
    # one-sided average differences in magnitude
    ops, u, ubar, w = setup_field_1d(seed=2, amp=3.0)
    ul = np.roll(ubar, 1, axis=0)
    ur = np.roll(ubar, -1, axis=0)
    cfg = LimiterConfig(kind=limiter.TVB, M=0.0)
    out = limiter.tvd_limit_1d(u, ubar, ul, ur, ops, cfg, dx=0.1)
    fl = np.einsum("j,cjv->cv", ops.V_L, out)
    fr = np.einsum("j,cjv->cv", ops.V_R, out)
    bound = np.minimum(np.abs(ubar - ul), np.abs(ur - ubar))
    assert np.all(np.abs(ubar - fl) <= bound + 1e-12)
    assert np.all(np.abs(fr - ubar) <= bound + 1e-12)


def test_limiter_none_is_identity():
    ops, u, ubar, _ = setup_field_1d()
    cfg = LimiterConfig(kind=limiter.NONE)
    out = limiter.tvd_limit_1d(u, ubar, ubar, ubar, ops, cfg, dx=0.1)
    assert out is u


def test_characteristic_limiting_euler_preserves_means():
    law = eq.Euler1D()
    ops = build_operators("gl", 2, "radau")
    rng = np.random.default_rng(3)
    ncell = 6
    rho = rng.uniform(0.5, 2.0, (ncell, 3))
    v = rng.uniform(-0.5, 0.5, (ncell, 3))
    p = rng.uniform(0.5, 2.0, (ncell, 3))
    u = law.prim_to_cons(rho, v, p)
    w = ops.weights / ops.weights.sum()
    ubar = np.einsum("j,cjv->cv", w, u)
    ul = np.roll(ubar, 1, axis=0)
    ur = np.roll(ubar, -1, axis=0)
    cfg = LimiterConfig(kind=limiter.TVB, M=0.0, characteristic=True)
    out = limiter.tvd_limit_1d(u, ubar, ul, ur, ops, cfg, dx=0.1, law=law)
    new_bar = np.einsum("j,cjv->cv", w, out)
    assert np.max(np.abs(new_bar - ubar)) < 1e-13


def test_tvd_limit_2d_preserves_cell_means():
    ops = build_operators("gl", 2, "radau")
    rng = np.random.default_rng(4)
    u = rng.standard_normal((5, 4, 3, 3, 1))
    w = ops.weights / ops.weights.sum()
    ubar = np.einsum("i,j,xyijv->xyv", w, w, u)
    nbr = {
        "W": np.roll(ubar, 1, axis=0), "E": np.roll(ubar, -1, axis=0),
        "S": np.roll(ubar, 1, axis=1), "N": np.roll(ubar, -1, axis=1),
    }
    cfg = LimiterConfig(kind=limiter.TVB, M=0.0)
    out = limiter.tvd_limit_2d(u, ubar, nbr, ops, cfg, dx=0.1, dy=0.1)
    new_bar = np.einsum("i,j,xyijv->xyv", w, w, out)
    assert np.max(np.abs(new_bar - ubar)) < 1e-14


# ---------------------------------------------------------------------------
# positivity scaling


def test_positivity_scaler_identity_on_admissible_data():
    law = eq.Euler1D()
    ops = build_operators("gl", 2, "radau")
    rho = np.full((4, 3), 1.0)
    v = np.zeros((4, 3))
    p = np.full((4, 3), 1.0)
    u = law.prim_to_cons(rho, v, p)
    out = limiter.positivity_scale_1d(u, ops, law)
    assert np.max(np.abs(out - u)) < 1e-15


def test_positivity_scaler_enforces_floors_and_means():
    law = eq.Euler1D()
    ops = build_operators("gl", 3, "radau")
    rng = np.random.default_rng(5)
    # wild oscillations around a safely positive mean
    rho = 1.0 + 1.5 * rng.standard_normal((6, 4))
    v = rng.standard_normal((6, 4))
    p = 1.0 + 1.5 * rng.standard_normal((6, 4))
    u = np.stack([rho, rho * v,
                  np.abs(p) / 0.4 + 0.5 * rho * v**2 * np.sign(rho)], axis=-1)
    # make every cell average admissible by mixing in a constant state
    base = law.prim_to_cons(np.array(2.0), np.array(0.0), np.array(5.0))
    u = 0.3 * u + base
    eps = 1e-13
    out = limiter.positivity_scale_1d(u, ops, law, eps=eps)
    # check points: solution nodes and both faces
    faces = np.stack([np.einsum("j,cjv->cv", ops.V_L, out),
                      np.einsum("j,cjv->cv", ops.V_R, out)], axis=1)
    pts = np.concatenate([out, faces], axis=1)
    rho_c = pts[..., 0]
    p_c = 0.4 * (pts[..., 2] - 0.5 * pts[..., 1] ** 2 / rho_c)
    assert np.all(rho_c >= eps - 1e-12)
    assert np.all(p_c >= eps - 1e-12)
    w = ops.weights / ops.weights.sum()
    assert np.max(np.abs(np.einsum("j,cjv->cv", w, out)
                         - np.einsum("j,cjv->cv", w, u))) < 1e-13


def test_positivity_scaler_rejects_bad_cell_average():
    law = eq.Euler1D()
    ops = build_operators("gl", 1, "radau")
    u = law.prim_to_cons(np.full((1, 2), -1.0), np.zeros((1, 2)),
                         np.full((1, 2), 1.0))
    with pytest.raises(PositivityError):
        limiter.positivity_scale_1d(u, ops, law)


def test_scalar_bounds_mode():
    law = eq.Burgers1D()
    ops = build_operators("gl", 2, "radau")
    rng = np.random.default_rng(6)
    u = 0.5 + 0.4 * rng.standard_normal((5, 3, 1))
    u = np.clip(u, -0.4, 1.4)
    # keep means inside [0,1]
    w = ops.weights / ops.weights.sum()
    ubar = np.einsum("j,cjv->cv", w, u)
    u = u - ubar[:, None, :] + np.clip(ubar, 0.05, 0.95)[:, None, :]
    out = limiter.positivity_scale_1d(u, ops, law, bounds=(0.0, 1.0))
    faces = np.stack([np.einsum("j,cjv->cv", ops.V_L, out),
                      np.einsum("j,cjv->cv", ops.V_R, out)], axis=1)
    pts = np.concatenate([out, faces], axis=1)[..., 0]
    assert pts.min() >= -1e-11 and pts.max() <= 1.0 + 1e-11


def test_positivity_scale_2d_floors_and_means():
    law = eq.Euler2D()
    ops = build_operators("gl", 2, "radau")
    rng = np.random.default_rng(7)
    shape = (3, 3, 3, 3)
    u = np.stack([1.0 + 2.0 * rng.standard_normal(shape),
                  rng.standard_normal(shape),
                  rng.standard_normal(shape),
                  3.0 + 2.0 * rng.standard_normal(shape)], axis=-1)
    base = law.prim_to_cons(np.array(2.0), np.array(0.0), np.array(0.0),
                            np.array(5.0))
    u = 0.3 * u + base
    out = limiter.positivity_scale_2d(u, ops, law)
    rho = out[..., 0]
    p = 0.4 * (out[..., 3] - 0.5 * (out[..., 1] ** 2 + out[..., 2] ** 2) / rho)
    assert rho.min() > 0 and p.min() > -1e-12
    w = ops.weights / ops.weights.sum()
    mean_new = np.einsum("i,j,xyijv->xyv", w, w, out)
    mean_old = np.einsum("i,j,xyijv->xyv", w, w, u)
    assert np.max(np.abs(mean_new - mean_old)) < 1e-13
