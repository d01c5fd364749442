"""Reference-element data for flux reconstruction schemes.

Everything here lives on the unit interval [0,1]: solution points and
quadrature weights, the nodal differentiation matrix, boundary Vandermonde
vectors, correction-function derivative vectors and the combined operator

    D1 = D - b_L V_L^T - b_R V_R^T

All of it depends only on (point kind, degree, correction) and is cached,
so element loops share one immutable operator set.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from .errors import ConfigurationError

GL = "gl"
GLL = "gll"
RADAU = "radau"
G2 = "g2"
DFR = "dfr"


def legendre_all(n, eta):
    """Values and derivatives of Legendre polynomials L_0..L_n at eta in [-1,1].

    Three-term recurrence for the values, derivative recurrence
    L'_{k+1} = L'_{k-1} + (2k+1) L_k; both are stable for the degrees
    used here.
    """
    eta = np.asarray(eta, dtype=float)
    L = np.zeros((n + 1,) + eta.shape)
    dL = np.zeros_like(L)
    L[0] = 1.0
    if n >= 1:
        L[1] = eta
        dL[1] = 1.0
    for k in range(1, n):
        L[k + 1] = ((2 * k + 1) * eta * L[k] - k * L[k - 1]) / (k + 1)
        dL[k + 1] = dL[k - 1] + (2 * k + 1) * L[k]
    return L, dL


@dataclass(frozen=True)
class SolutionPoints:
    """Nodes and quadrature weights on [0,1] for one polynomial degree."""

    kind: str
    degree: int
    nodes: np.ndarray
    weights: np.ndarray


def build_solution_points(kind, degree):
    """Gauss-Legendre or Gauss-Lobatto-Legendre points of a given degree.

    The rule integrates polynomials exactly up to degree 2N+1 (GL) or
    2N-1 (GLL) on the unit interval.
    """
    if degree < 1:
        raise ConfigurationError(f"degree must be >= 1, got {degree}")
    n = degree + 1
    if kind == GL:
        x, w = roots_legendre(n)
    elif kind == GLL:
        if degree == 1:
            x = np.array([-1.0, 1.0])
        else:
            # interior GLL nodes are the roots of L'_N, i.e. of Jacobi(1,1)
            xi, _ = roots_jacobi(degree - 1, 1.0, 1.0)
            x = np.concatenate(([-1.0], xi, [1.0]))
        LN = legendre_all(degree, x)[0][degree]
        w = 2.0 / (degree * (degree + 1) * LN**2)
    else:
        raise ConfigurationError(f"unknown point kind {kind!r}")
    nodes = 0.5 * (x + 1.0)
    weights = 0.5 * w
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return SolutionPoints(kind=kind, degree=degree, nodes=nodes, weights=weights)


def barycentric_weights(nodes):
    n = len(nodes)
    w = np.ones(n)
    for i in range(n):
        for j in range(n):
            if j != i:
                w[i] /= nodes[i] - nodes[j]
    return w


def lagrange_eval(nodes, x):
    """Row vector of Lagrange basis values [l_0(x), ..., l_N(x)]."""
    nodes = np.asarray(nodes)
    diff = x - nodes
    hit = np.isclose(diff, 0.0, atol=1e-14)
    if hit.any():
        out = np.zeros(len(nodes))
        out[np.argmax(hit)] = 1.0
        return out
    w = barycentric_weights(nodes)
    terms = w / diff
    return terms / terms.sum()


def differentiation_matrix(points):
    """D_ij = l_j'(xi_i) via the barycentric formula; rows sum to zero."""
    nodes = points.nodes if isinstance(points, SolutionPoints) else np.asarray(points)
    n = len(nodes)
    w = barycentric_weights(nodes)
    D = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            if i != j:
                D[i, j] = (w[j] / w[i]) / (nodes[i] - nodes[j])
        D[i, i] = -np.sum(D[i, :])
    return D


def radau_correction_derivatives(points):
    """g_L', g_R' at the solution points for the Radau correction pair."""
    N = points.degree
    eta = 2.0 * points.nodes - 1.0
    _, dL = legendre_all(N + 1, eta)
    # chain rule: d/dxi = 2 d/deta
    b_L = (-1.0) ** N * (dL[N] - dL[N + 1])
    b_R = dL[N] + dL[N + 1]
    return b_L, b_R


def g2_correction_derivatives(points):
    """g_L', g_R' for the g2 correction pair (GLL-equivalent DG scheme)."""
    N = points.degree
    eta = 2.0 * points.nodes - 1.0
    _, dL = legendre_all(N + 1, eta)
    mix = ((N + 1) * dL[N - 1] + N * dL[N + 1]) / (2 * N + 1)
    b_L = (-1.0) ** N * (dL[N] - mix)
    b_R = dL[N] + mix
    return b_L, b_R


def correction_derivatives(correction, points):
    if correction == RADAU:
        return radau_correction_derivatives(points)
    if correction == G2:
        return g2_correction_derivatives(points)
    raise ConfigurationError(f"unknown correction {correction!r}")


def correction_values(correction, xi, degree):
    """g_L(xi), g_R(xi) closed forms; used by tests to check endpoint values."""
    N = degree
    eta = 2.0 * np.asarray(xi, dtype=float) - 1.0
    L, _ = legendre_all(N + 1, eta)
    if correction == RADAU:
        g_L = 0.5 * (-1.0) ** N * (L[N] - L[N + 1])
        g_R = 0.5 * (L[N] + L[N + 1])
    elif correction == G2:
        mix = ((N + 1) * L[N - 1] + N * L[N + 1]) / (2 * N + 1)
        g_L = 0.5 * (-1.0) ** N * (L[N] - mix)
        g_R = 0.5 * (L[N] + mix)
    else:
        raise ConfigurationError(f"unknown correction {correction!r}")
    return g_L, g_R


@dataclass(frozen=True)
class ReferenceOperators:
    """All per-degree operator data shared by the solvers."""

    points: SolutionPoints
    D: np.ndarray
    D1: np.ndarray
    b_L: np.ndarray
    b_R: np.ndarray
    V_L: np.ndarray
    V_R: np.ndarray
    correction: str

    @property
    def degree(self):
        return self.points.degree

    @property
    def nodes(self):
        return self.points.nodes

    @property
    def weights(self):
        return self.points.weights


def _freeze(*arrays):
    for a in arrays:
        a.setflags(write=False)


def _build_operators(kind, degree, correction):
    points = build_solution_points(kind, degree)
    D = differentiation_matrix(points)
    V_L = lagrange_eval(points.nodes, 0.0)
    V_R = lagrange_eval(points.nodes, 1.0)
    if correction == DFR:
        if kind != GL:
            raise ConfigurationError("DFR construction requires GL points")
        aug = np.concatenate(([0.0], points.nodes, [1.0]))
        D_aug = differentiation_matrix(aug)
        rows = D_aug[1:-1, :]
        b_L = rows[:, 0].copy()
        b_R = rows[:, -1].copy()
        D1 = rows[:, 1:-1].copy()
    else:
        b_L, b_R = correction_derivatives(correction, points)
        D1 = D - np.outer(b_L, V_L) - np.outer(b_R, V_R)
    _freeze(D, D1, b_L, b_R, V_L, V_R)
    return ReferenceOperators(
        points=points, D=D, D1=D1, b_L=b_L, b_R=b_R, V_L=V_L, V_R=V_R,
        correction=correction,
    )


@lru_cache(maxsize=None)
def build_operators(kind, degree, correction=RADAU):
    """Cached, immutable operator set for (point kind, degree, correction)."""
    return _build_operators(kind, degree, correction)
