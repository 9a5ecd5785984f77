"""Named example documents and random generators shared by tests and the CLI."""

from __future__ import annotations

import random
from fractions import Fraction

from scipy.spatial import ConvexHull, QhullError

from .cf import CFun
from .complex import (
    SimplicialComplex,
    build_complex,
    circle,
    convex_polygon,
    grid_complex,
    line_complex,
    path_complex,
    sphere_boundary,
    torus,
)
from .defint import DefFun
from .document import Document

F = Fraction


# named fixtures -------------------------------------------------------------


def interval_x() -> Document:
    K = path_complex([0, 1])
    return Document(K, DefFun.from_function(K, lambda p: p[0]), "interval-x")


def cone(height=3, n: int = 8, radius=2) -> Document:
    """PL cone over a convex n-gon: `height` at the centre, 0 on the rim."""
    ring = [(radius * x, radius * y) for x, y in circle(n).coords]
    coords = [(F(0), F(0))] + ring
    tris = [(0, 1 + i, 1 + (i + 1) % n) for i in range(n)]
    K = build_complex(coords, tris, validate=False)
    return Document(K, DefFun.from_vertex_values(K, [height] + [0] * n), f"cone-{height}")


def unit_square() -> Document:
    K = convex_polygon([(0, 0), (1, 0), (1, 1), (0, 1)])
    return Document(K, CFun.indicator(K), "square")


def circle_h(values=(1, 3, 2, 5, 4, 0)) -> Document:
    K = circle(len(values))
    return Document(K, DefFun.from_vertex_values(K, values), "circle-h")


def sphere_h(a=1, b=7) -> Document:
    """Height on the boundary of a tetrahedron with minimum a and maximum b."""
    a, b = F(a), F(b)
    K = sphere_boundary()
    vals = [a, a + (b - a) / 3, a + 2 * (b - a) / 3, b]
    return Document(K, DefFun.from_vertex_values(K, vals), "sphere-h")


TORUS_F = (0, 1, 3)
TORUS_G = (0, 10, 30)


def torus_values(i: int, j: int) -> Fraction:
    # the i*j term keeps the height from splitting as f(i) + g(j)
    return TORUS_F[i] + TORUS_G[j] + F(i * j, 7)


def torus_h() -> Document:
    K = torus(3, 3)
    return Document(K, DefFun.from_vertex_values(K, [torus_values(v // 3, v % 3) for v in range(9)]), "torus-h")


NAMED = {
    "interval-x": interval_x,
    "cone": cone,
    "square": unit_square,
    "circle-h": circle_h,
    "sphere-h": sphere_h,
    "torus-h": torus_h,
}


def radial_bump(n: int, center=(F(1, 7), F(1, 9)), half_width=F(5, 4)) -> DefFun:
    """(1 − r²)² clipped at r = 1, sampled exactly on an n×n grid."""
    K = grid_complex(n, n, (-half_width, half_width), (-half_width, half_width))
    cx, cy = center

    def h(p):
        r2 = (p[0] - cx) ** 2 + (p[1] - cy) ** 2
        return (1 - r2) ** 2 if r2 < 1 else F(0)

    return DefFun.from_function(K, h)


def manifold_complexes() -> list:
    return [circle(5), circle(9), sphere_boundary(), torus(3, 3), torus(3, 4)]


# random generators ------------------------------------------------------------


def random_rational(rng: random.Random, lo: int = -6, hi: int = 6, max_den: int = 3) -> Fraction:
    return F(rng.randint(lo * max_den, hi * max_den), rng.randint(1, max_den))


def random_deffun(rng: random.Random, K: SimplicialComplex, kind: str = "continuous", **kw) -> DefFun:
    """kind: 'continuous' (vertex values), 'cellwise' (constant per cell) or 'general' (any affine data)."""
    if kind == "continuous":
        return DefFun.from_vertex_values(K, [random_rational(rng, **kw) for _ in range(K.num_vertices)])
    if kind == "cellwise":
        return DefFun.from_cell_values(K, [random_rational(rng, **kw) for _ in K.cells])
    if kind == "general":
        return DefFun(K, tuple(tuple(random_rational(rng, **kw) for _ in c) for c in K.cells))
    raise ValueError(f"unknown kind {kind!r}")


def random_cfun(rng: random.Random, K: SimplicialComplex, lo: int = -3, hi: int = 3) -> CFun:
    return CFun(K, tuple(rng.randint(lo, hi) for _ in K.cells))


def random_planar_bumps(rng: random.Random, n: int, lo: int = -3, hi: int = 3) -> DefFun:
    """Continuous integer PL function on an n×n grid over [0, n]², zero on the boundary."""
    K = grid_complex(n, n, (0, n), (0, n))
    vals = []
    for v in range(K.num_vertices):
        i, j = v % (n + 1), v // (n + 1)
        inner = 0 < i < n and 0 < j < n
        vals.append(rng.randint(lo, hi) if inner and rng.random() < 0.6 else 0)
    return DefFun.from_vertex_values(K, vals)


def random_line_cfun(rng: random.Random, npts: int | None = None, lo: int = -3, hi: int = 3) -> CFun:
    """Compactly supported CFun on R: random breakpoints, gaps and values."""
    npts = npts or rng.randint(1, 6)
    pts = sorted(rng.sample(range(-12, 13), npts))
    pts = [F(p, rng.choice((1, 2))) for p in pts]
    pts = sorted(set(pts))
    gaps = [i for i in range(len(pts) - 1) if rng.random() < 0.7]
    K = line_complex(pts, gaps)
    return random_cfun(rng, K, lo, hi)


def random_convex_polygon(rng: random.Random, npts: int | None = None, span: int = 8) -> list:
    """Counterclockwise vertex list of the hull of random integer points (a point or segment if degenerate)."""
    npts = npts or rng.randint(3, 9)
    pts = list({(rng.randint(-span, span), rng.randint(-span, span)) for _ in range(npts)})
    if len(pts) >= 3:
        try:
            hull = ConvexHull(pts)
            return [tuple(F(c) for c in pts[i]) for i in hull.vertices]
        except QhullError:
            pass  # collinear: fall through to the segment case
    pts.sort()
    out = [pts[0], pts[-1]] if len(pts) > 1 else [pts[0]]
    return [tuple(F(c) for c in p) for p in out]
