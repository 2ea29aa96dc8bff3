"""Solve one benchmark on both backends and compare.

Picks the smooth radial benchmark, runs the hexagonal and Cartesian
solvers at the same nominal resolution, and reports iteration counts,
residuals and max errors.  Saves a surface plot of the computed solution
when matplotlib is available.

Run:  python3 demos/single_solve.py [n]
"""

import sys

from quadma import ex1, max_error, solve_problem


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 32
    problem = ex1()
    print(f"Problem {problem.name} on {problem.domain.name}, n = {n}\n")

    results = {}
    for backend in ("hex", "cartesian"):
        grid, values, report, params = solve_problem(problem, backend, n)
        err = max_error(grid, values, problem)
        results[backend] = (grid, values)
        print(f"[{backend}]")
        print(f"  grid: {grid.n_points} points ({grid.n_interior} interior), "
              f"h = {grid.h:.4f}, stencil width r = {grid.r:.4f}")
        print(f"  epsilon = {params.epsilon:.3e}")
        print(f"  Newton: {report.iterations} iterations, "
              f"final residual = {report.final_residual:.3e} "
              f"(threshold h^2 = {grid.h**2:.3e})")
        print("  residual history:", "  ".join(f"{r:.2e}" for r in report.residual_history))
        print(f"  max error vs exact solution: {err:.4e}\n")

    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not installed; skipping the surface plot")
        return
    fig = plt.figure(figsize=(11, 5))
    for i, backend in enumerate(("hex", "cartesian")):
        grid, values = results[backend]
        ax = fig.add_subplot(1, 2, i + 1, projection="3d")
        ax.plot_trisurf(grid.points[:, 0], grid.points[:, 1], values, cmap="viridis",
                        linewidth=0.1)
        ax.set_title(f"{backend} backend, n={n}")
    out = "single_solve.png"
    fig.savefig(out, dpi=110, bbox_inches="tight")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
