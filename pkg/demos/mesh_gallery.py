"""Build grids on a square and a disc and look at their structure.

Prints point counts and stencil statistics for the two backends, shows a
sample near-boundary stencil (shortened arm against the inserted boundary
point), and saves scatter plots of the meshes when matplotlib is present.

Run:  python3 demos/mesh_gallery.py
"""

import numpy as np

from quadma import build_grid, disc, square


def describe(grid):
    print(f"  {grid.n_points} points, {grid.n_interior} interior, "
          f"{grid.n_points - grid.n_interior} inserted boundary points")
    print(f"  h = {grid.h:.4f}, stencil width r = {grid.r:.4f}, "
          f"{len(grid.angles)} stencil angles")
    shortened = np.sum(grid.plus_index >= grid.n_interior) + \
        np.sum(grid.minus_index >= grid.n_interior)
    print(f"  stencil arms ending on the boundary: {shortened}")
    # a node with one shortened arm, if any
    rows, cols = np.nonzero(grid.plus_index >= grid.n_interior)
    if len(rows):
        i, a = rows[0], cols[0]
        print(f"  example: node {grid.points[i]} angle #{a}: "
              f"h_plus = {grid.h_plus[i, a]:.4f} (to the boundary), "
              f"h_minus = {grid.h_minus[i, a]:.4f}")


def main():
    domains = [("unit square", square((0, 0), 1.0)), ("unit disc", disc((0, 0), 1.0))]
    grids = {}
    for dname, dom in domains:
        for backend in ("hex", "cartesian"):
            print(f"=== {backend} mesh on the {dname} (n = 24) ===")
            grid = build_grid(dom, backend, 24)
            grids[(dname, backend)] = grid
            describe(grid)
            print()

    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not installed; skipping plots")
        return
    fig, axes = plt.subplots(2, 2, figsize=(10, 10))
    for ax, ((dname, backend), grid) in zip(axes.ravel(), grids.items()):
        inner = grid.points[grid.interior]
        bdry = grid.points[~grid.interior]
        ax.plot(inner[:, 0], inner[:, 1], ".", ms=3, label="interior")
        ax.plot(bdry[:, 0], bdry[:, 1], "r.", ms=3, label="boundary")
        ax.set_title(f"{backend} / {dname}")
        ax.set_aspect("equal")
        ax.legend(loc="upper right", fontsize=8)
    fig.savefig("mesh_gallery.png", dpi=110, bbox_inches="tight")
    print("wrote mesh_gallery.png")


if __name__ == "__main__":
    main()
