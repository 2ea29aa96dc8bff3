"""Discrete convexified Monge-Ampere operator and its generalized Jacobian.

At an interior node the operator combines the aligned second directional
differences ``D_j`` of the grid function along every stencil angle into

    F = -(1/pi * sum_j w_j / max(D_j, eps))**(-2) - min_j min(D_j, eps)

where ``w_j`` are quadrature weights over the angles and ``eps > 0`` is a
regularization floor that keeps the sum finite when a difference
degenerates.  The first term is a quadrature approximation of a reciprocal
integral representation of the Hessian determinant; the second selects
convex solutions by penalizing negative curvature directions.  The residual
of the discrete problem is ``F + f`` at interior nodes and ``u - g`` at
boundary nodes, so a residual of zero solves the Dirichlet problem.

Both terms are nonincreasing in each neighbor value and nondecreasing in
the center value, so the scheme is monotone; the Jacobian assembly
differentiates the branch active at the current iterate (ties resolved
toward the constant ``eps`` branch), the standard semismooth convention.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .meshing import Grid
from .quadrature import QuadratureRule, simpson_weights, trapezoid_weights

__all__ = [
    "SchemeParams",
    "default_epsilon",
    "default_params",
    "sdd_apply",
    "sdd_matrix",
    "scheme_apply",
    "assemble_jacobian",
    "regularized_det_reference",
    "convexified_det",
]


@dataclass(frozen=True)
class SchemeParams:
    """Regularization floor and quadrature rule used by the scheme."""

    epsilon: float
    quadrature: QuadratureRule

    def __post_init__(self):
        if not self.epsilon > 0.0:
            raise ValueError("epsilon must be positive")


def default_epsilon(grid: Grid) -> float:
    """Backend defaults: ``r**2`` on Cartesian grids, ``h**2`` on hexagonal."""
    return grid.r ** 2 if grid.kind == "cartesian" else grid.h ** 2


def default_params(grid: Grid, epsilon: float | None = None) -> SchemeParams:
    """Standard scheme parameters for a grid: Simpson weights on the L1
    angle set for Cartesian grids, trapezoid weights on the uniform hex set."""
    if grid.kind == "cartesian":
        rule = simpson_weights(grid.angles)
    else:
        rule = trapezoid_weights(grid.angles)
    return SchemeParams(default_epsilon(grid) if epsilon is None else epsilon, rule)


def _evaluate(func, pts: np.ndarray) -> np.ndarray:
    """Evaluate a (possibly scalar-returning) field on a point array."""
    vals = np.asarray(func(pts), dtype=float)
    return np.broadcast_to(vals, (len(pts),))


def _sdd_coefficients(grid: Grid):
    """Neighbor coefficients of the aligned second difference.

    ``D = cp*(u_plus - u_center) + cm*(u_minus - u_center)`` with
    ``cp = 2 / (h_plus * (h_plus + h_minus))`` and symmetrically ``cm``;
    exact on quadratics for any arm lengths.
    """
    total = grid.h_plus + grid.h_minus
    cp = 2.0 / (grid.h_plus * total)
    cm = 2.0 / (grid.h_minus * total)
    return cp, cm


def sdd_matrix(grid: Grid, u: np.ndarray) -> np.ndarray:
    """All second directional differences, shape ``(n_interior, n_angles)``."""
    u = np.asarray(u, dtype=float)
    cp, cm = _sdd_coefficients(grid)
    uc = u[: grid.n_interior, None]
    return cp * (u[grid.plus_index] - uc) + cm * (u[grid.minus_index] - uc)


def sdd_apply(grid: Grid, u: np.ndarray, node: int, angle_index: int) -> float:
    """Second directional difference at one interior node and one angle."""
    if not grid.interior[node]:
        raise ValueError(f"node {node} is a boundary point; differences live on interior nodes")
    u = np.asarray(u, dtype=float)
    hp = grid.h_plus[node, angle_index]
    hm = grid.h_minus[node, angle_index]
    up = u[grid.plus_index[node, angle_index]]
    um = u[grid.minus_index[node, angle_index]]
    return float(2.0 * (hm * up + hp * um - (hp + hm) * u[node]) / (hp * hm * (hp + hm)))


def scheme_apply(grid: Grid, u: np.ndarray, params: SchemeParams, f, g) -> np.ndarray:
    """Residual of the discrete problem at every grid point.

    Interior nodes get the operator value plus ``f``; boundary nodes get
    ``u - g``.  A root of this residual solves the discrete Dirichlet
    problem.
    """
    if len(params.quadrature) != len(grid.angles):
        raise ValueError("quadrature rule does not match the grid's angle set")
    u = np.asarray(u, dtype=float)
    eps = params.epsilon
    w = params.quadrature.weights

    D = sdd_matrix(grid, u)
    S = (1.0 / np.maximum(D, eps)) @ w / np.pi
    interior_vals = -S ** -2.0 - np.minimum(D.min(axis=1), eps)

    res = np.empty(grid.n_points)
    ni = grid.n_interior
    res[:ni] = interior_vals + _evaluate(f, grid.points[:ni])
    res[ni:] = u[ni:] - _evaluate(g, grid.points[ni:])
    return res


def assemble_jacobian(grid: Grid, u: np.ndarray, params: SchemeParams, f, g) -> sp.csr_matrix:
    """Generalized Jacobian of :func:`scheme_apply` at ``u``.

    Rows of boundary points are identity rows.  At interior nodes the
    derivative follows the active branches: angles with ``D_j > eps``
    contribute through the quadrature sum, and the minimum term contributes
    ``-1`` through its (first) attaining angle when the minimum lies below
    ``eps``.  At ties (``D_j == eps``) the constant branch is chosen, so
    the result is an element of the subdifferential.
    """
    u = np.asarray(u, dtype=float)
    eps = params.epsilon
    w = params.quadrature.weights
    ni = grid.n_interior
    n = grid.n_points

    cp, cm = _sdd_coefficients(grid)
    D = sdd_matrix(grid, u)
    Dmax = np.maximum(D, eps)
    S = (1.0 / Dmax) @ w / np.pi

    # dF/dD_j: quadrature part (active where D_j > eps) ...
    G = np.where(D > eps, -(2.0 * S ** -3.0)[:, None] * (w / np.pi) / Dmax ** 2, 0.0)
    # ... plus the minimum term through its attaining angle.
    dmin = D.min(axis=1)
    active_min = dmin < eps
    G[np.flatnonzero(active_min), D[active_min].argmin(axis=1)] -= 1.0

    center = np.arange(ni)
    rows = np.concatenate([
        np.repeat(center, len(w)), np.repeat(center, len(w)), center,
        np.arange(ni, n),
    ])
    cols = np.concatenate([
        grid.plus_index.ravel(), grid.minus_index.ravel(), center,
        np.arange(ni, n),
    ])
    data = np.concatenate([
        (G * cp).ravel(), (G * cm).ravel(), -(G * (cp + cm)).sum(axis=1),
        np.ones(n - ni),
    ])
    return sp.coo_matrix((data, (rows, cols)), shape=(n, n)).tocsr()


def regularized_det_reference(hessian, epsilon: float, rule: QuadratureRule) -> float:
    """Regularized determinant of an exact 2x2 symmetric quadratic form.

    Evaluates ``(1/pi * sum_j w_j / max(v_j' M v_j, eps))**(-2)`` with the
    given rule's angles and weights.  Serves as the analytic oracle for
    :func:`scheme_apply` on quadratic grid functions, whose directional
    differences reproduce ``v' M v`` exactly.
    """
    m = np.asarray(hessian, dtype=float)
    theta = rule.discretization.angles
    c, s = np.cos(theta), np.sin(theta)
    utt = m[0, 0] * c ** 2 + 2.0 * m[0, 1] * c * s + m[1, 1] * s ** 2
    total = rule.weights @ (1.0 / np.maximum(utt, epsilon)) / np.pi
    return float(total ** -2.0)


def convexified_det(hessian) -> float:
    """Determinant on positive semidefinite input, smallest eigenvalue otherwise.

    The exact modified determinant used as a test oracle for the scheme's
    limiting behavior on non-convex data.
    """
    m = np.asarray(hessian, dtype=float)
    half_trace = 0.5 * (m[0, 0] + m[1, 1])
    radius = np.hypot(0.5 * (m[0, 0] - m[1, 1]), m[0, 1])
    lam1 = half_trace - radius
    if lam1 >= 0.0:
        return float(m[0, 0] * m[1, 1] - m[0, 1] ** 2)
    return float(lam1)
