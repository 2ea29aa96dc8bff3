"""Grid construction for the two mesh backends.

Both builders follow the same recipe: lay a structured tiling over the
domain's bounding box, keep the tiling nodes that fall strictly inside the
domain (signed distance < 0), then walk every stencil arm of every interior
node.  Arms whose target node is again interior keep their full tiling
length; arms that exit the domain are shortened to the point where the ray
crosses the boundary, and that crossing is inserted into the grid as a
boundary point (deduplicated to a 1e-9*h tolerance).  The result is a point
set in which every interior node has, for every stencil angle, a pair of
exactly aligned neighbors within the stencil width.

Backends
--------
* Cartesian: a uniform lattice of spacing ``h``; stencil arms point at the
  lattice sites on the L1 circle of integer radius ``K``, giving the 2K
  directions of :func:`~quadma.angles.l1_angles` with arm lengths between
  ``K*h/sqrt(2)`` and ``K*h``.
* Hexagonal: the vertex set of a tiling by regular hexagons of side ``s``
  (flat-top, one direction along the x axis).  Every vertex has aligned
  neighbors in all six directions ``j*pi/6``; three of them are centered at
  distance ``sqrt(3)*s`` and three are uncentered with arms ``s`` and
  ``2*s``, which side being short depending on the vertex's sublattice.

Interior points are stored first, in lexicographic ``(y, x)`` order;
boundary points follow in insertion order.  Construction is integer-exact:
nodes are tracked on an integer index lattice, so stencil alignment never
relies on floating-point matching.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .angles import AngularDiscretization, hex_angles, l1_angles, l1_offsets
from .domains import ConvexDomain, _boundary_crossings

__all__ = [
    "Grid",
    "MeshKind",
    "cartesian_mesh",
    "hexagonal_mesh",
    "augment_boundary",
    "build_grid",
    "default_stencil_depth",
    "grid_to_jsonable",
]

MeshKind = Literal["cartesian", "hexagonal"]


@dataclass
class Grid:
    """Discretization points plus per-node aligned-neighbor stencils.

    ``points[:n_interior]`` are the interior nodes (in lexicographic
    ``(y, x)`` order); the remaining rows are boundary points.  Stencil row
    ``i`` belongs to interior point ``i`` and lists, per angle ``j``, the
    indices of the aligned neighbors ``points[plus_index[i, j]] =
    x + h_plus[i, j] * (cos theta_j, sin theta_j)`` (same with a minus
    sign), with all arm lengths in ``(0, r]``.
    """

    kind: MeshKind
    points: np.ndarray = field(repr=False)       # (N, 2)
    interior: np.ndarray = field(repr=False)     # (N,) bool
    h: float                                     # characteristic spacing
    r: float                                     # stencil width (max arm length)
    angles: AngularDiscretization
    plus_index: np.ndarray = field(repr=False)   # (Ni, M+1) int
    minus_index: np.ndarray = field(repr=False)  # (Ni, M+1) int
    h_plus: np.ndarray = field(repr=False)       # (Ni, M+1) float
    h_minus: np.ndarray = field(repr=False)      # (Ni, M+1) float
    params: dict = field(default_factory=dict)

    @property
    def n_points(self) -> int:
        return len(self.points)

    @property
    def n_interior(self) -> int:
        return self.plus_index.shape[0]

    @property
    def interior_index(self) -> np.ndarray:
        """Point indices of the stencil rows (interior points come first)."""
        return np.arange(self.n_interior)

    def __repr__(self) -> str:
        return (f"Grid({self.kind}, {self.n_points} points, "
                f"{self.n_interior} interior, h={self.h:.4g}, r={self.r:.4g})")


def augment_boundary(domain: ConvexDomain, interior_points, angles: AngularDiscretization,
                     plus_index, minus_index, h_plus, h_minus, *, dedup_tol):
    """Resolve stencil arms that exit the domain by inserting boundary points.

    On entry the index arrays hold interior point indices where the tiling
    neighbor is interior and -1 where it is not; the arm-length arrays hold
    the nominal tiling arm lengths (which bound the boundary crossing, since
    the node is interior and the tiling neighbor is not).  Missing arms are
    processed per node, per angle, plus before minus; each gets the boundary
    crossing of its ray, deduplicated against previously inserted points.

    Returns the full point array (interior first, boundary appended), the
    interior mask, and the completed stencil arrays.
    """
    interior_points = np.asarray(interior_points, dtype=float)
    n_int = len(interior_points)
    dirs_all = angles.directions()

    # (row, angle, sign) in C order = Algorithm-1 nesting: node, angle, +/-.
    missing = np.stack([plus_index < 0, minus_index < 0], axis=2)
    rows, cols, signs = np.nonzero(missing)

    if len(rows):
        sign_fac = np.where(signs == 0, 1.0, -1.0)
        origins = interior_points[rows]
        rays = dirs_all[cols] * sign_fac[:, None]
        brackets = np.where(signs == 0, h_plus[rows, cols], h_minus[rows, cols])
        ts = _boundary_crossings(domain, origins, rays, brackets)
        crossings = origins + ts[:, None] * rays

        inserted: list[np.ndarray] = []
        cells: dict[tuple[int, int], int] = {}

        def _lookup_or_insert(pt) -> int:
            cx = int(math.floor(pt[0] / dedup_tol))
            cy = int(math.floor(pt[1] / dedup_tol))
            for dx in (-1, 0, 1):
                for dy in (-1, 0, 1):
                    k = cells.get((cx + dx, cy + dy))
                    if k is not None and abs(inserted[k][0] - pt[0]) <= dedup_tol \
                            and abs(inserted[k][1] - pt[1]) <= dedup_tol:
                        return k
            k = len(inserted)
            inserted.append(pt)
            cells[(cx, cy)] = k
            return k

        for m in range(len(rows)):
            k = _lookup_or_insert(crossings[m])
            idx = n_int + k
            if signs[m] == 0:
                plus_index[rows[m], cols[m]] = idx
                h_plus[rows[m], cols[m]] = ts[m]
            else:
                minus_index[rows[m], cols[m]] = idx
                h_minus[rows[m], cols[m]] = ts[m]
        boundary_points = np.array(inserted).reshape(-1, 2)
    else:
        boundary_points = np.empty((0, 2))

    points = np.vstack([interior_points, boundary_points])
    interior = np.zeros(len(points), dtype=bool)
    interior[:n_int] = True
    return points, interior, plus_index, minus_index, h_plus, h_minus


def cartesian_mesh(domain: ConvexDomain, n: int, K: int) -> Grid:
    """Uniform Cartesian lattice with depth-K L1-circle stencils.

    ``n`` is the lattice point count along the longer bounding-box side;
    the spacing is the same in both directions.  Requires ``n >= 2K + 3``
    so that at least the central nodes carry full-width stencils.
    """
    if K < 1:
        raise ValueError("stencil depth K must be at least 1")
    if n < 2 * K + 3:
        raise ValueError(f"need n >= 2K + 3 = {2 * K + 3} points per side, got {n}")
    xmin, xmax, ymin, ymax = domain.bounding_box
    width, height = xmax - xmin, ymax - ymin
    h = max(width, height) / (n - 1)
    nx = int(math.ceil(width / h - 1e-9)) + 1
    ny = int(math.ceil(height / h - 1e-9)) + 1

    xs = xmin + np.arange(nx) * h
    ys = ymin + np.arange(ny) * h
    X, Y = np.meshgrid(xs, ys)                      # (ny, nx), row-major in y
    pts = np.column_stack([X.ravel(), Y.ravel()])
    inside2d = (domain.signed_distance(pts) < 0.0).reshape(ny, nx)
    n_int = int(inside2d.sum())
    if n_int == 0:
        raise ValueError("domain contains no interior lattice points")

    idx_map = np.full((ny, nx), -1, dtype=np.int64)
    idx_map[inside2d] = np.arange(n_int)
    jj, ii = np.nonzero(inside2d)                   # (y, x) lexicographic order
    interior_points = np.column_stack([xs[ii], ys[jj]])

    angles = l1_angles(K)
    offs = l1_offsets(K)
    arm = h * np.hypot(offs[:, 0], offs[:, 1])      # arm length per angle
    n_ang = len(angles)

    plus_index = np.full((n_int, n_ang), -1, dtype=np.int64)
    minus_index = np.full((n_int, n_ang), -1, dtype=np.int64)
    h_plus = np.tile(arm, (n_int, 1))
    h_minus = np.tile(arm, (n_int, 1))

    def _targets(di, dj):
        ti, tj = ii + di, jj + dj
        ok = (ti >= 0) & (ti < nx) & (tj >= 0) & (tj < ny)
        out = np.full(n_int, -1, dtype=np.int64)
        out[ok] = idx_map[tj[ok], ti[ok]]
        return out

    for a in range(n_ang):
        di, dj = int(offs[a, 0]), int(offs[a, 1])
        plus_index[:, a] = _targets(di, dj)
        minus_index[:, a] = _targets(-di, -dj)

    points, interior, plus_index, minus_index, h_plus, h_minus = augment_boundary(
        domain, interior_points, angles, plus_index, minus_index, h_plus, h_minus,
        dedup_tol=1e-9 * h)
    return Grid("cartesian", points, interior, h, K * h, angles,
                plus_index, minus_index, h_plus, h_minus,
                params={"n": n, "K": K})


_SQRT3 = math.sqrt(3.0)

# Arm offsets on the hexagon-vertex tiling, per sublattice, per angle
# j*pi/6, as (dp, dq, length/s) on the integer frame
# x = (sqrt(3)*s/2) * p, y = (s/2) * q.  Sublattice A sits at q = 0 mod 3,
# sublattice B at q = 2 mod 3; the two are point reflections of each other,
# which flips the short/long sides of the uncentered arms.
_HEX_ARMS = {
    "A": {
        "plus": [(2, 0, _SQRT3), (2, 2, 2.0), (1, 3, _SQRT3),
                 (0, 2, 1.0), (-1, 3, _SQRT3), (-2, 2, 2.0)],
        "minus": [(-2, 0, _SQRT3), (-1, -1, 1.0), (-1, -3, _SQRT3),
                  (0, -4, 2.0), (1, -3, _SQRT3), (1, -1, 1.0)],
    },
    "B": {
        "plus": [(2, 0, _SQRT3), (1, 1, 1.0), (1, 3, _SQRT3),
                 (0, 4, 2.0), (-1, 3, _SQRT3), (-1, 1, 1.0)],
        "minus": [(-2, 0, _SQRT3), (-2, -2, 2.0), (-1, -3, _SQRT3),
                  (0, -2, 1.0), (1, -3, _SQRT3), (2, -2, 2.0)],
    },
}


def hexagonal_mesh(domain: ConvexDomain, n: int) -> Grid:
    """Hexagon-vertex tiling with the six-direction nearest-neighbor stencil.

    ``n`` sets the number of vertex rows across the bounding-box height
    (roughly half as many points sit along each row).  The hexagon side
    comes out as ``s = 4*height / (3*n)``; the covering radius of the
    vertex set -- the spatial resolution ``h`` -- equals ``s`` exactly, and
    the stencil width is ``r = 2*s``.
    """
    if n < 8:
        raise ValueError(f"need at least 8 vertex rows, got {n}")
    xmin, xmax, ymin, ymax = domain.bounding_box
    width, height = xmax - xmin, ymax - ymin
    s = 4.0 * height / (3.0 * n)

    qmax = int(math.ceil(2.0 * height / s + 1e-9))
    pmax = int(math.ceil(2.0 * width / (_SQRT3 * s) + 1e-9))

    p_list, q_list = [], []
    for q in range(qmax + 1):
        if q % 3 == 1:
            continue  # no vertex rows at q = 1 mod 3
        k = q // 3 if q % 3 == 0 else (q - 2) // 3
        ps = np.arange(k % 2, pmax + 1, 2)
        p_list.append(ps)
        q_list.append(np.full(len(ps), q))
    pp = np.concatenate(p_list)
    qq = np.concatenate(q_list)
    pts = np.column_stack([xmin + (_SQRT3 * s / 2.0) * pp, ymin + (s / 2.0) * qq])

    inside = domain.signed_distance(pts) < 0.0
    n_int = int(inside.sum())
    if n_int == 0:
        raise ValueError("domain contains no interior tiling vertices")
    pp, qq = pp[inside], qq[inside]
    interior_points = pts[inside]                   # (q, p) ascending = (y, x) order

    idx_map = np.full((qmax + 1, pmax + 1), -1, dtype=np.int64)
    idx_map[qq, pp] = np.arange(n_int)

    angles = hex_angles()
    n_ang = len(angles)
    plus_index = np.full((n_int, n_ang), -1, dtype=np.int64)
    minus_index = np.full((n_int, n_ang), -1, dtype=np.int64)
    h_plus = np.empty((n_int, n_ang))
    h_minus = np.empty((n_int, n_ang))

    groups = {"A": qq % 3 == 0, "B": qq % 3 == 2}
    for sub, mask in groups.items():
        gp, gq = pp[mask], qq[mask]
        for side, arr_idx, arr_len in (("plus", plus_index, h_plus),
                                       ("minus", minus_index, h_minus)):
            for a, (dp, dq, length) in enumerate(_HEX_ARMS[sub][side]):
                tp, tq = gp + dp, gq + dq
                ok = (tp >= 0) & (tp <= pmax) & (tq >= 0) & (tq <= qmax)
                tgt = np.full(len(gp), -1, dtype=np.int64)
                tgt[ok] = idx_map[tq[ok], tp[ok]]
                arr_idx[mask, a] = tgt
                arr_len[mask, a] = length * s

    points, interior, plus_index, minus_index, h_plus, h_minus = augment_boundary(
        domain, interior_points, angles, plus_index, minus_index, h_plus, h_minus,
        dedup_tol=1e-9 * s)
    return Grid("hexagonal", points, interior, s, 2.0 * s, angles,
                plus_index, minus_index, h_plus, h_minus,
                params={"n": n, "spacing": s})


def default_stencil_depth(n: int, c_K: float = 1.0) -> int:
    """Depth schedule ``K = max(2, round(c_K * n**(1/3)))``.

    With ``h ~ 1/n`` this realizes a stencil width ``r = K*h`` on the order
    of ``h**(2/3)``, the width that balances the angular and finite
    difference components of the truncation error.
    """
    return max(2, int(round(c_K * n ** (1.0 / 3.0))))


def build_grid(domain: ConvexDomain, backend: str, n: int, K: int | None = None) -> Grid:
    """Build a grid for the named backend ("cartesian" or "hex"/"hexagonal")."""
    if backend == "cartesian":
        return cartesian_mesh(domain, n, default_stencil_depth(n) if K is None else K)
    if backend in ("hex", "hexagonal"):
        return hexagonal_mesh(domain, n)
    raise ValueError(f"unknown backend {backend!r} (expected 'cartesian' or 'hex')")


def grid_to_jsonable(grid: Grid) -> dict:
    """JSON-serializable dump of points, interior mask and stencil table."""
    return {
        "kind": grid.kind,
        "h": grid.h,
        "r": grid.r,
        "params": grid.params,
        "angles": grid.angles.angles.tolist(),
        "points": grid.points.tolist(),
        "interior": grid.interior.astype(int).tolist(),
        "stencil": {
            "interior_index": grid.interior_index.tolist(),
            "plus_index": grid.plus_index.tolist(),
            "minus_index": grid.minus_index.tolist(),
            "h_plus": grid.h_plus.tolist(),
            "h_minus": grid.h_minus.tolist(),
        },
    }
