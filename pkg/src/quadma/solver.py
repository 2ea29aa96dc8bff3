"""Damped Newton solution of the discrete system, with Poisson warm starts.

The nonlinear system is solved by Newton's method with a backtracking step
length chosen so the max-norm residual strictly decreases at every accepted
step, stopping once the residual falls below ``threshold_factor * h**2``.
The initial guess solves a linear Dirichlet problem for the discrete
Laplacian with right-hand side ``sqrt(2 f)``, the linearization of the
determinant equation around an isotropic Hessian.  A coarse-to-fine warm
start (solve small, interpolate, then polish) is available for larger runs.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.interpolate import LinearNDInterpolator, NearestNDInterpolator

from .meshing import Grid, build_grid
from .operator import SchemeParams, _evaluate, _sdd_coefficients, assemble_jacobian, \
    default_params, scheme_apply

__all__ = ["NewtonConfig", "SolveReport", "poisson_init", "damped_newton", "coarse_to_fine"]


@dataclass(frozen=True)
class NewtonConfig:
    """Stopping and damping policy for the Newton iteration.

    ``residual_threshold_factor`` multiplies ``h**2`` to give the stopping
    threshold on the max-norm residual.  Backtracking multiplies the step
    length by ``damping_beta`` until the residual decreases, failing once
    the step drops below ``alpha_min``.
    """

    residual_threshold_factor: float = 1.0
    max_iterations: int = 50
    damping_beta: float = 0.5
    alpha_min: float = 2.0 ** -20
    verbose: bool = False

    def __post_init__(self):
        if not self.residual_threshold_factor > 0.0:
            raise ValueError("residual_threshold_factor must be positive")
        if not 0.0 < self.damping_beta < 1.0:
            raise ValueError("damping_beta must lie in (0, 1)")
        if not 0.0 < self.alpha_min <= 1.0:
            raise ValueError("alpha_min must lie in (0, 1]")


@dataclass
class SolveReport:
    """Outcome of one damped Newton run."""

    final_residual: float
    iterations: int
    alpha_history: list[float] = field(default_factory=list)
    residual_history: list[float] = field(default_factory=list)
    converged: bool = False
    message: str = ""


def _laplacian_system(grid: Grid):
    """Sparse discrete Laplacian: identity rows at boundary points.

    On Cartesian grids the Laplacian is the sum of the second differences
    along the axis angles (0 and pi/2).  On hexagonal grids it uses the
    quadrature identity: the average of the second directional derivatives
    over the half circle equals half the Laplacian, so twice the weighted
    angle sum (trapezoid weights) reproduces it; both forms are exact on
    quadratics.
    """
    from .quadrature import trapezoid_weights

    ni = grid.n_interior
    n = grid.n_points
    if grid.kind == "cartesian":
        lam = np.zeros(len(grid.angles))
        lam[np.argmin(np.abs(grid.angles.angles))] = 1.0
        lam[np.argmin(np.abs(grid.angles.angles - np.pi / 2))] = 1.0
    else:
        lam = 2.0 * trapezoid_weights(grid.angles).weights / np.pi

    cp, cm = _sdd_coefficients(grid)
    center = np.arange(ni)
    rows = np.concatenate([
        np.repeat(center, len(lam)), np.repeat(center, len(lam)), center,
        np.arange(ni, n),
    ])
    cols = np.concatenate([
        grid.plus_index.ravel(), grid.minus_index.ravel(), center,
        np.arange(ni, n),
    ])
    data = np.concatenate([
        (lam * cp).ravel(), (lam * cm).ravel(), -(lam * (cp + cm)).sum(axis=1),
        np.ones(n - ni),
    ])
    lap = sp.coo_matrix((data, (rows, cols)), shape=(n, n)).tocsc()
    lap.eliminate_zeros()
    return lap


def poisson_init(grid: Grid, f, g) -> np.ndarray:
    """Initial guess from the linear problem ``Lap u = sqrt(2 f)``, ``u = g`` on the boundary."""
    ni = grid.n_interior
    fv = _evaluate(f, grid.points[:ni])
    if np.any(fv < -1e-13):
        raise ValueError("poisson_init requires f >= 0 on interior nodes")
    rhs = np.empty(grid.n_points)
    rhs[:ni] = np.sqrt(2.0 * np.maximum(fv, 0.0))
    rhs[ni:] = _evaluate(g, grid.points[ni:])
    u = spla.spsolve(_laplacian_system(grid), rhs)
    if not np.all(np.isfinite(u)):
        raise RuntimeError("linear solve for the Poisson initialization failed")
    return u


def _solve_linear(J: sp.csr_matrix, rhs: np.ndarray) -> np.ndarray:
    """Sparse direct solve with a one-shot diagonal perturbation fallback."""
    try:
        y = spla.splu(J.tocsc()).solve(rhs)
        if np.all(np.isfinite(y)):
            return y
    except RuntimeError:
        pass
    shift = 1e-10 * spla.norm(J, np.inf)
    try:
        y = spla.splu((J + shift * sp.identity(J.shape[0], format="csr")).tocsc()).solve(rhs)
    except RuntimeError as exc:
        raise RuntimeError("Newton Jacobian is singular even after diagonal perturbation") from exc
    if not np.all(np.isfinite(y)):
        raise RuntimeError("Newton Jacobian is singular even after diagonal perturbation")
    return y


def damped_newton(grid: Grid, params: SchemeParams, f, g, u0: np.ndarray,
                  cfg: NewtonConfig = NewtonConfig()):
    """Newton iteration with residual-decreasing backtracking.

    Returns ``(u, report)``.  ``report.converged`` is False when the
    iteration budget runs out or the line search stalls at ``alpha_min``
    without decreasing the residual; the recorded residual history is
    strictly decreasing across accepted steps by construction.
    """
    u = np.array(u0, dtype=float)
    if not np.all(np.isfinite(u)):
        raise ValueError("initial guess must be finite")
    threshold = cfg.residual_threshold_factor * grid.h ** 2

    res = scheme_apply(grid, u, params, f, g)
    rnorm = float(np.abs(res).max())
    report = SolveReport(final_residual=rnorm, iterations=0, residual_history=[rnorm])

    while rnorm >= threshold and report.iterations < cfg.max_iterations:
        J = assemble_jacobian(grid, u, params, f, g)
        step = _solve_linear(J, -res)

        alpha = 1.0
        while True:
            trial = u + alpha * step
            res_trial = scheme_apply(grid, trial, params, f, g)
            rnorm_trial = float(np.abs(res_trial).max())
            if rnorm_trial < rnorm:
                break
            alpha *= cfg.damping_beta
            if alpha < cfg.alpha_min:
                report.message = ("line search stalled: residual not decreasing "
                                  f"at alpha_min = {cfg.alpha_min:.2e}")
                report.final_residual = rnorm
                return u, report

        u, res, rnorm = trial, res_trial, rnorm_trial
        report.iterations += 1
        report.alpha_history.append(alpha)
        report.residual_history.append(rnorm)
        if cfg.verbose:
            print(f"iter {report.iterations}: residual={rnorm:.6e}, alpha={alpha:.6e}",
                  file=sys.stderr)

    report.final_residual = rnorm
    report.converged = rnorm < threshold
    if not report.converged and not report.message:
        report.message = f"iteration budget exhausted ({cfg.max_iterations})"
    return u, report


def interpolate_to_grid(coarse_grid: Grid, coarse_values: np.ndarray, fine_grid: Grid) -> np.ndarray:
    """Piecewise-linear (barycentric) interpolation between grids.

    Fine points outside the convex hull of the coarse point set (possible
    for boundary points, since the hull is inscribed in the domain) fall
    back to nearest-neighbor values.
    """
    lin = LinearNDInterpolator(coarse_grid.points, coarse_values)
    vals = lin(fine_grid.points)
    holes = ~np.isfinite(vals)
    if np.any(holes):
        near = NearestNDInterpolator(coarse_grid.points, coarse_values)
        vals[holes] = near(fine_grid.points[holes])
    return vals


def coarse_to_fine(problem, fine_n: int, coarse_n: int | None, backend: str, *,
                   domain=None, K: int | None = None, epsilon: float | None = None,
                   cfg: NewtonConfig = NewtonConfig(), fine_grid: Grid | None = None) -> np.ndarray:
    """Fine-grid initial guess from a converged coarse solve.

    Solves the problem on a ``coarse_n`` grid (Poisson start + Newton) and
    interpolates the solution onto the ``fine_n`` grid.  ``coarse_n`` of
    None defaults to ``ceil(fine_n / 4)`` (at least the backend minimum);
    ``coarse_n == fine_n`` returns the coarse solution itself, which is
    exactly the direct solve path.
    """
    dom = problem.domain if domain is None else domain
    if coarse_n is None:
        coarse_n = max(-(-fine_n // 4), 8 if backend != "cartesian" else 4 * (K or 2) + 4)
    if coarse_n > fine_n:
        raise ValueError("coarse grid must not be finer than the fine grid")

    coarse_grid = build_grid(dom, backend, coarse_n, K)
    coarse_params = default_params(coarse_grid, epsilon)
    u0 = poisson_init(coarse_grid, problem.f, problem.g)
    u_c, rep = damped_newton(coarse_grid, coarse_params, problem.f, problem.g, u0, cfg)
    if not rep.converged:
        raise RuntimeError(f"coarse solve at n={coarse_n} did not converge: {rep.message}")
    if coarse_n == fine_n:
        return u_c
    if fine_grid is None:
        fine_grid = build_grid(dom, backend, fine_n, K)
    return interpolate_to_grid(coarse_grid, u_c, fine_grid)
