import numpy as np
import pytest

from quadma import (BenchmarkProblem, NewtonConfig, build_grid, coarse_to_fine,
                    damped_newton, default_params, ex1, poisson_init, solve_problem,
                    square)
from quadma.solver import _laplacian_system


def quad_data(p):
    return 0.5 * (p[:, 0] ** 2 + p[:, 1] ** 2)


def test_poisson_recovers_quadratic(cart_grid, hex_grid):
    for g in (cart_grid, hex_grid):
        u = poisson_init(g, lambda p: 2.0 * np.ones(len(p)), quad_data)
        assert np.abs(u - quad_data(g.points)).max() <= 1e-10


def test_poisson_trivial_cases(cart_grid, hex_grid, zeros):
    for g in (cart_grid, hex_grid):
        assert np.abs(poisson_init(g, zeros, zeros)).max() <= 1e-13
        ux = poisson_init(g, zeros, lambda p: p[:, 0])
        assert np.abs(ux - g.points[:, 0]).max() <= 1e-12


def test_poisson_linear_residual_small(cart_grid):
    g = cart_grid
    f = lambda p: (1.0 + p[:, 0]) * 2.0
    gb = lambda p: np.cos(p[:, 0]) * np.sinh(p[:, 1])
    u = poisson_init(g, f, gb)
    A = _laplacian_system(g)
    rhs = np.empty(g.n_points)
    rhs[:g.n_interior] = np.sqrt(2.0 * f(g.points[:g.n_interior]))
    rhs[g.n_interior:] = gb(g.points[g.n_interior:])
    resid = np.abs(A @ u - rhs).max()
    assert resid <= 1e-10 * max(1.0, np.abs(rhs).max())


def test_poisson_rejects_negative_f(cart_grid, zeros):
    with pytest.raises(ValueError):
        poisson_init(cart_grid, lambda p: -np.ones(len(p)), zeros)


def test_newton_config_validation():
    with pytest.raises(ValueError):
        NewtonConfig(residual_threshold_factor=0.0)
    with pytest.raises(ValueError):
        NewtonConfig(damping_beta=1.0)
    with pytest.raises(ValueError):
        NewtonConfig(alpha_min=0.0)


def test_newton_zero_iterations_at_solution():
    prob = ex1()
    grid, values, report, params = solve_problem(prob, "cartesian", 16)
    assert report.converged
    _, report2 = damped_newton(grid, params, prob.f, prob.g, values)
    assert report2.converged
    assert report2.iterations == 0


def test_newton_converges_below_threshold():
    prob = ex1()
    for backend in ("cartesian", "hex"):
        grid, values, report, _ = solve_problem(prob, backend, 16)
        assert report.converged
        assert report.final_residual < grid.h ** 2
        hist = report.residual_history
        assert all(b < a for a, b in zip(hist, hist[1:]))
        assert len(report.alpha_history) == report.iterations


def test_newton_failure_reported_with_monotone_history():
    # a sign-violating right-hand side plus a tiny iteration budget: the
    # run must fail while still reporting a strictly decreasing history
    prob = ex1()
    grid = build_grid(prob.domain, "cartesian", 16)
    params = default_params(grid)
    f_bad = lambda p: prob.f(p) - 40.0 * (p[:, 0] > 0.0)
    u0 = poisson_init(grid, lambda p: np.maximum(f_bad(p), 0.0), prob.g)
    u, report = damped_newton(grid, params, f_bad, prob.g, u0,
                              NewtonConfig(max_iterations=3))
    assert not report.converged
    assert report.message != ""
    hist = report.residual_history
    assert all(b < a for a, b in zip(hist, hist[1:]))


def test_newton_verbose_logs_to_stderr(capsys):
    prob = ex1()
    grid = build_grid(prob.domain, "hex", 12)
    params = default_params(grid)
    u0 = poisson_init(grid, prob.f, prob.g)
    damped_newton(grid, params, prob.f, prob.g, u0, NewtonConfig(verbose=True))
    err = capsys.readouterr().err
    assert "iter 1: residual=" in err and "alpha=" in err


def test_newton_rejects_nonfinite_start(cart_grid, zeros):
    params = default_params(cart_grid)
    bad = np.zeros(cart_grid.n_points)
    bad[0] = np.nan
    with pytest.raises(ValueError):
        damped_newton(cart_grid, params, zeros, zeros, bad)


def test_solution_independent_of_start():
    prob = ex1()
    grid, u_a, rep_a, params = solve_problem(prob, "cartesian", 32)
    pert = 0.3 * np.sin(3 * grid.points[:, 0]) * np.cos(2 * grid.points[:, 1])
    pert[~grid.interior] = 0.0
    u0 = poisson_init(grid, prob.f, prob.g) + pert
    u_b, rep_b = damped_newton(grid, params, prob.f, prob.g, u0)
    assert rep_a.converged and rep_b.converged
    assert np.abs(u_a - u_b).max() <= 10.0 * grid.h ** 2


def test_coarse_to_fine_warm_start_not_slower():
    prob = ex1()
    _, _, rep_cold, _ = solve_problem(prob, "cartesian", 33)
    _, _, rep_warm, _ = solve_problem(prob, "cartesian", 33, warm_start=True, coarse_n=17)
    assert rep_warm.converged
    assert rep_warm.iterations <= rep_cold.iterations


def test_coarse_equals_fine_is_direct_solve():
    prob = ex1()
    grid, u_direct, _, params = solve_problem(prob, "cartesian", 17)
    u_cf = coarse_to_fine(prob, 17, 17, "cartesian")
    assert np.array_equal(u_direct, u_cf)


def test_coarse_to_fine_constant_exact():
    dom = square((0.0, 0.0), 1.0)
    const = BenchmarkProblem("const", dom,
                             lambda p: np.full(len(p), 2.5),
                             lambda p: np.zeros(len(p)),
                             lambda p: np.full(len(p), 2.5))
    for backend in ("cartesian", "hex"):
        u0 = coarse_to_fine(const, 24, 12, backend)
        assert np.abs(u0 - 2.5).max() <= 1e-12


def test_coarse_to_fine_rejects_finer_coarse():
    with pytest.raises(ValueError):
        coarse_to_fine(ex1(), 16, 32, "hex")


def test_solve_on_disc_domain():
    # the scheme is not tied to square domains: same data, disc domain
    from quadma import BenchmarkProblem, disc, max_error
    base = ex1()
    dom = disc((0.0, 0.0), 1.0)
    prob = BenchmarkProblem("radial-disc", dom, base.u_exact, base.f, base.g)
    for backend in ("cartesian", "hex"):
        grid = build_grid(dom, backend, 24)
        params = default_params(grid)
        u0 = poisson_init(grid, prob.f, prob.g)
        u, rep = damped_newton(grid, params, prob.f, prob.g, u0)
        assert rep.converged
        assert max_error(grid, u, prob) < 0.05
