"""Reference-element operators: nodes, weights, differentiation, corrections."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lwfr.basis import (build_operators, build_solution_points,
                        correction_values, differentiation_matrix,
                        lagrange_eval, legendre_all)
from lwfr.errors import ConfigurationError

DEGREES = [1, 2, 3, 4]


@pytest.mark.parametrize("degree", DEGREES)
@pytest.mark.parametrize("kind", ["gl", "gll"])
def test_quadrature_exactness(kind, degree):
    # exact through degree 2N+1 (GL) / 2N-1 (GLL) on the unit interval
    pts = build_solution_points(kind, degree)
    kmax = 2 * degree + 1 if kind == "gl" else 2 * degree - 1
    for k in range(kmax + 1):
        val = np.sum(pts.weights * pts.nodes**k)
        assert abs(val - 1.0 / (k + 1)) < 1e-13


@pytest.mark.parametrize("degree", DEGREES)
@pytest.mark.parametrize("kind", ["gl", "gll"])
def test_nodes_in_unit_interval_and_symmetric(kind, degree):
    pts = build_solution_points(kind, degree)
    assert np.all(pts.nodes >= 0.0) and np.all(pts.nodes <= 1.0)
    assert np.all(np.diff(pts.nodes) > 0)
    # Legendre-family nodes are symmetric about the midpoint
    assert np.allclose(pts.nodes + pts.nodes[::-1], 1.0, atol=1e-14)
    assert np.allclose(pts.weights, pts.weights[::-1], atol=1e-14)
    assert abs(pts.weights.sum() - 1.0) < 1e-14


def test_gll_endpoints():
    for degree in range(1, 5):
        pts = build_solution_points("gll", degree)
        assert pts.nodes[0] == 0.0 and pts.nodes[-1] == 1.0


@pytest.mark.parametrize("degree", DEGREES)
@pytest.mark.parametrize("kind", ["gl", "gll"])
def test_differentiation_exactness(kind, degree):
    # D applied to nodal values of any polynomial up to the space degree
    # returns the exact derivative values
    pts = build_solution_points(kind, degree)
    D = differentiation_matrix(pts)
    rng = np.random.default_rng(7)
    coeffs = rng.standard_normal(degree + 1)
    p = np.polynomial.Polynomial(coeffs)
    assert np.max(np.abs(D @ p(pts.nodes) - p.deriv()(pts.nodes))) < 1e-12


def test_legendre_recurrence_values():
    # closed forms at a few points
    eta = np.array([-1.0, 0.0, 0.5, 1.0])
    L, dL = legendre_all(3, eta)
    assert np.allclose(L[2], 0.5 * (3 * eta**2 - 1), atol=1e-14)
    assert np.allclose(L[3], 0.5 * (5 * eta**3 - 3 * eta), atol=1e-14)
    assert np.allclose(dL[3], 0.5 * (15 * eta**2 - 3), atol=1e-14)


@pytest.mark.parametrize("correction", ["radau", "g2"])
@pytest.mark.parametrize("degree", DEGREES)
def test_correction_endpoint_values(correction, degree):
    # g_L(0) = 1, g_L(1) = 0 and mirrored for g_R
    g_L, g_R = correction_values(correction, np.array([0.0, 1.0]), degree)
    assert abs(g_L[0] - 1.0) < 1e-13 and abs(g_L[1]) < 1e-13
    assert abs(g_R[0]) < 1e-13 and abs(g_R[1] - 1.0) < 1e-13


@pytest.mark.parametrize("correction", ["radau", "g2"])
@pytest.mark.parametrize("degree", DEGREES)
def test_correction_mirror_symmetry(correction, degree):
    # g_L(xi) = g_R(1 - xi)
    xi = np.linspace(0.0, 1.0, 11)
    g_L, g_R = correction_values(correction, xi, degree)
    g_L2, g_R2 = correction_values(correction, 1.0 - xi, degree)
    assert np.allclose(g_L, g_R2, atol=1e-13)


@pytest.mark.parametrize("correction", ["radau", "g2"])
@pytest.mark.parametrize("degree", DEGREES)
def test_correction_derivatives_match_closed_form(correction, degree):
    # b vectors are g' at the solution points; compare with a central
    # difference of the closed-form values
    ops = build_operators("gl", degree, correction)
    h = 1e-6
    gLp, gRp = correction_values(correction, ops.nodes + h, degree)
    gLm, gRm = correction_values(correction, ops.nodes - h, degree)
    assert np.max(np.abs((gLp - gLm) / (2 * h) - ops.b_L)) < 1e-7
    assert np.max(np.abs((gRp - gRm) / (2 * h) - ops.b_R)) < 1e-7


@pytest.mark.parametrize("degree", DEGREES)
def test_fr_equals_dfr(degree):
    # GL points with the Radau correction reproduce the direct construction
    fr = build_operators("gl", degree, "radau")
    dfr = build_operators("gl", degree, "dfr")
    assert np.max(np.abs(fr.D1 - dfr.D1)) < 1e-12
    assert np.max(np.abs(fr.b_L - dfr.b_L)) < 1e-12
    assert np.max(np.abs(fr.b_R - dfr.b_R)) < 1e-12


def test_dfr_requires_gl():
    with pytest.raises(ConfigurationError):
        build_operators("gll", 2, "dfr")


@pytest.mark.parametrize("degree", DEGREES)
def test_boundary_vandermonde_interpolates(degree):
    # V_L / V_R evaluate the nodal interpolant at the element ends
    ops = build_operators("gl", degree, "radau")
    rng = np.random.default_rng(3)
    coeffs = rng.standard_normal(degree + 1)
    p = np.polynomial.Polynomial(coeffs)
    assert abs(ops.V_L @ p(ops.nodes) - p(0.0)) < 1e-12
    assert abs(ops.V_R @ p(ops.nodes) - p(1.0)) < 1e-12


@pytest.mark.parametrize("degree", DEGREES)
@pytest.mark.parametrize("correction", ["radau", "g2"])
def test_mirror_symmetry_of_operators(degree, correction):
    # reversing the node order conjugates D by the reversal permutation
    # and swaps (b_L, V_L) with the reversed negated b_R / reversed V_R
    ops = build_operators("gl", degree, correction)
    P = np.eye(degree + 1)[::-1]
    assert np.max(np.abs(P @ ops.D @ P + ops.D)) < 1e-12
    assert np.max(np.abs(ops.b_L[::-1] + ops.b_R)) < 1e-12
    assert np.max(np.abs(ops.V_L[::-1] - ops.V_R)) < 1e-12


def test_rows_of_d_sum_to_zero():
    for degree in DEGREES:
        for kind in ("gl", "gll"):
            pts = build_solution_points(kind, degree)
            D = differentiation_matrix(pts)
            assert np.max(np.abs(D.sum(axis=1))) < 1e-12


@given(x=st.floats(min_value=0.0, max_value=1.0),
       degree=st.integers(min_value=1, max_value=4))
@settings(max_examples=60, deadline=None)
def test_lagrange_partition_of_unity(x, degree):
    pts = build_solution_points("gl", degree)
    vals = lagrange_eval(pts.nodes, x)
    assert abs(vals.sum() - 1.0) < 1e-12


def test_lagrange_cardinality():
    pts = build_solution_points("gl", 3)
    for j, xj in enumerate(pts.nodes):
        vals = lagrange_eval(pts.nodes, xj)
        expect = np.zeros(4)
        expect[j] = 1.0
        assert np.allclose(vals, expect, atol=1e-12)


def test_operator_cache_returns_same_object():
    a = build_operators("gl", 3, "radau")
    b = build_operators("gl", 3, "radau")
    assert a is b
    assert not a.D.flags.writeable
