"""Finite geometric simplicial complexes with exact rational coordinates.

A complex stores every open cell as a strictly increasing tuple of vertex
ids.  Cells are kept sorted by dimension and then lexicographically, and the
position of a cell in :attr:`SimplicialComplex.cells` is its *cell index*;
functions on the complex are stored as sequences aligned with that order.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from . import _linalg
from .errors import (
    DegenerateSimplex,
    DuplicateCell,
    EmptyRange,
    OverlappingInteriors,
    TooFewVertices,
    UnknownCell,
)

Cell = tuple  # tuple[int, ...], strictly increasing


def as_fraction(x) -> Fraction:
    """Exact conversion of int / Fraction / ``"p/q"`` string (floats are taken bit-exactly)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def sign(k: int) -> int:
    return -1 if k % 2 else 1


class SimplicialComplex:
    """Immutable face-closed set of geometric simplices.

    Do not call the constructor directly with untrusted data; use
    :func:`build_complex`, which validates.
    """

    __slots__ = ("coords", "cells", "index", "__dict__")

    def __init__(self, coords: Sequence[Sequence[Fraction]], cells: Iterable[Cell]):
        self.coords = tuple(tuple(as_fraction(c) for c in p) for p in coords)
        self.cells = tuple(sorted(set(cells), key=lambda c: (len(c), c)))
        self.index = {c: i for i, c in enumerate(self.cells)}

    def __repr__(self):
        return f"SimplicialComplex(vertices={self.num_vertices}, f={self.f_vector})"

    def __len__(self):
        return len(self.cells)

    def __eq__(self, other):
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self.coords == other.coords and self.cells == other.cells

    def __hash__(self):
        return hash((self.coords, self.cells))

    @property
    def num_vertices(self) -> int:
        return len(self.coords)

    @property
    def ambient_dim(self) -> int:
        return len(self.coords[0]) if self.coords else 0

    @cached_property
    def dim(self) -> int:
        return max((len(c) - 1 for c in self.cells), default=-1)

    @cached_property
    def f_vector(self) -> tuple:
        f = [0] * (self.dim + 1)
        for c in self.cells:
            f[len(c) - 1] += 1
        return tuple(f)

    @cached_property
    def dims(self) -> tuple:
        return tuple(len(c) - 1 for c in self.cells)

    @cached_property
    def signs(self) -> tuple:
        return tuple(sign(len(c) - 1) for c in self.cells)

    def cell_index(self, cell) -> int:
        key = tuple(sorted(cell))
        try:
            return self.index[key]
        except KeyError:
            raise UnknownCell(f"cell {key} is not in the complex") from None

    def has_cell(self, cell) -> bool:
        return tuple(sorted(cell)) in self.index

    @cached_property
    def cofaces(self) -> tuple:
        """Per cell index, the indices of all cells strictly containing it."""
        out = [[] for _ in self.cells]
        for j, c in enumerate(self.cells):
            for k in range(1, len(c)):
                for f in itertools.combinations(c, k):
                    out[self.index[f]].append(j)
        return tuple(tuple(x) for x in out)

    @cached_property
    def facets(self) -> tuple:
        """Per cell index, the indices of its codimension-one faces."""
        return tuple(
            tuple(self.index[f] for f in itertools.combinations(c, len(c) - 1)) if len(c) > 1 else ()
            for c in self.cells
        )

    @cached_property
    def maximal_cells(self) -> tuple:
        return tuple(c for i, c in enumerate(self.cells) if not self.cofaces[i])

    @cached_property
    def vertex_neighbors(self) -> tuple:
        nb = [set() for _ in range(self.num_vertices)]
        for c in self.cells:
            if len(c) == 2:
                a, b = c
                nb[a].add(b)
                nb[b].add(a)
        return tuple(tuple(sorted(s)) for s in nb)

    def closure(self, cell) -> list:
        """All faces (as tuples) of ``cell``, including itself."""
        cell = tuple(sorted(cell))
        return [f for k in range(1, len(cell) + 1) for f in itertools.combinations(cell, k)]

    def link(self, cell) -> list:
        """Cells τ disjoint from ``cell`` with τ ∪ cell in the complex."""
        cell = tuple(sorted(cell))
        i = self.cell_index(cell)
        s = set(cell)
        out = set()
        for j in self.cofaces[i]:
            rest = tuple(v for v in self.cells[j] if v not in s)
            out.add(rest)
        return sorted(out, key=lambda c: (len(c), c))

    def euler_characteristic(self, cells=None) -> int:
        return euler_characteristic(self, cells)

    @cached_property
    def boundary_cells(self) -> frozenset:
        """Cell indices in the closure of the codim-1 faces that have one coface of top dimension.

        Only meaningful for pure complexes; this is the topological boundary of
        a triangulated manifold with boundary.
        """
        n = self.dim
        out = set()
        for i, c in enumerate(self.cells):
            if len(c) == n:
                top = sum(1 for j in self.cofaces[i] if self.dims[j] == n)
                if top == 1:
                    for f in self.closure(c):
                        out.add(self.index[f])
        return frozenset(out)


def _face_closure(maximal):
    cells = set()
    for c in maximal:
        for k in range(1, len(c) + 1):
            cells.update(itertools.combinations(c, k))
    return cells


def _bbox(points):
    return tuple(min(p[i] for p in points) for i in range(len(points[0]))), tuple(
        max(p[i] for p in points) for i in range(len(points[0]))
    )


def relative_interiors_meet(P, Q) -> bool:
    """Exact test whether relint conv(P) and relint conv(Q) intersect.

    Uses ri(A) - ri(B) = ri(A - B): the answer is whether the origin lies in
    the relative interior of the convex hull of all differences p - q.
    """
    D = [tuple(a - b for a, b in zip(p, q)) for p in P for q in Q]
    d0 = D[0]
    diffs = [tuple(a - b for a, b in zip(d, d0)) for d in D[1:]]
    basis = []
    for v in diffs:
        if any(v) and _linalg.rank(basis + [v]) > len(basis):
            basis.append(v)
    r = len(basis)
    if r == 0:
        return all(x == 0 for x in d0)
    if _linalg.solve(basis, tuple(-x for x in d0)) is None:
        return False
    # coordinates of every point (and the origin) in the affine frame at d0
    local = [_linalg.solve(basis, tuple(a - b for a, b in zip(d, d0))) for d in D]
    origin = _linalg.solve(basis, tuple(-x for x in d0))
    if r == 1:
        xs = [p[0] for p in local]
        return min(xs) < origin[0] < max(xs)
    for subset in itertools.combinations(range(len(local)), r):
        pts = [local[i] for i in subset]
        # normal of the hyperplane through pts via cofactor expansion
        rows = [[a - b for a, b in zip(p, pts[0])] for p in pts[1:]]
        if _linalg.rank(rows) < r - 1:
            continue
        normal = []
        for k in range(r):
            minor = [[row[j] for j in range(r) if j != k] for row in rows]
            normal.append((-1) ** k * _linalg.det(minor))
        off = sum(n * x for n, x in zip(normal, pts[0]))
        vals = [sum(n * x for n, x in zip(normal, p)) - off for p in local]
        if all(v >= 0 for v in vals):
            s = 1
        elif all(v <= 0 for v in vals):
            s = -1
        else:
            continue
        if s * (sum(n * x for n, x in zip(normal, origin)) - off) <= 0:
            return False
    return True


def _candidate_normals(P, Q):
    d = len(P[0])
    if d == 1:
        return [(Fraction(1),)]
    edges = [
        tuple(a - b for a, b in zip(u, v))
        for pts in (P, Q)
        for u, v in itertools.combinations(pts, 2)
    ]
    if d == 2:
        return [(-e[1], e[0]) for e in edges]
    out = []
    for e, f in itertools.combinations(edges, 2):
        n = (e[1] * f[2] - e[2] * f[1], e[2] * f[0] - e[0] * f[2], e[0] * f[1] - e[1] * f[0])
        if any(n):
            out.append(n)
    return out


def _properly_separated(P, Q) -> bool:
    """Cheap sufficient test: some candidate hyperplane properly separates P and Q."""
    for n in _candidate_normals(P, Q):
        a = [sum(x * y for x, y in zip(n, p)) for p in P]
        b = [sum(x * y for x, y in zip(n, q)) for q in Q]
        if max(a) <= min(b):
            lo, hi = a, b
        elif max(b) <= min(a):
            lo, hi = b, a
        else:
            continue
        cut = max(lo)
        if any(x != cut for x in lo) or any(x != cut for x in hi):
            return True
    return False


def _check_overlaps(coords, cells):
    cells = sorted(cells, key=lambda c: (len(c), c))
    pts = {c: [coords[v] for v in c] for c in cells}
    boxes = {c: _bbox(pts[c]) for c in cells}
    order = sorted(cells, key=lambda c: boxes[c][0][0])
    active = []
    for c in order:
        lo, hi = boxes[c]
        active = [a for a in active if boxes[a][1][0] >= lo[0]]
        sc = set(c)
        for a in active:
            alo, ahi = boxes[a]
            if any(alo[i] > hi[i] or ahi[i] < lo[i] for i in range(len(lo))):
                continue
            sa = set(a)
            if sa <= sc or sc <= sa:
                continue
            if _properly_separated(pts[a], pts[c]):
                continue
            if relative_interiors_meet(pts[a], pts[c]):
                raise OverlappingInteriors(f"cells {a} and {c} have intersecting interiors")
        active.append(c)


def build_complex(vertices, maximal_cells, validate: bool = True) -> SimplicialComplex:
    """Validated construction from vertex coordinates and a list of cells.

    ``vertices`` is a sequence of coordinate tuples (vertex id = position) or a
    mapping from contiguous ids to coordinates.  ``maximal_cells`` need not be
    maximal; the face closure is computed.  Overlap checking runs when the
    ambient dimension is at most 3.
    """
    if isinstance(vertices, Mapping):
        ids = sorted(vertices)
        if ids != list(range(len(ids))):
            raise DegenerateSimplex("vertex ids must be contiguous from 0")
        vertices = [vertices[i] for i in ids]
    coords = [tuple(as_fraction(x) for x in p) for p in vertices]
    if coords and len({len(p) for p in coords}) != 1:
        raise DegenerateSimplex("all vertices must have the same coordinate dimension")
    seen = set()
    maximal = []
    for raw in maximal_cells:
        c = tuple(sorted(int(v) for v in raw))
        if len(set(c)) != len(c):
            raise DegenerateSimplex(f"cell {tuple(raw)} repeats a vertex")
        for v in c:
            if not 0 <= v < len(coords):
                raise DegenerateSimplex(f"cell {tuple(raw)} references unknown vertex {v}")
        if c in seen:
            raise DuplicateCell(f"cell {c} given twice")
        seen.add(c)
        if len(c) > len(coords[0]) + 1 or _linalg.affine_rank([coords[v] for v in c]) != len(c) - 1:
            raise DegenerateSimplex(f"cell {c} is affinely degenerate")
        maximal.append(c)
    cells = _face_closure(maximal)
    cells.update((v,) for v in range(len(coords)))
    if validate and coords and len(coords[0]) <= 3:
        _check_overlaps(coords, cells)
    return SimplicialComplex(coords, cells)


def euler_characteristic(K: SimplicialComplex, cells=None) -> int:
    """Compactly supported χ of a union of open cells: Σ (-1)^dim.

    ``cells`` may hold cell tuples or cell indices; ``None`` means the whole complex.
    """
    if cells is None:
        return sum(K.signs)
    total = 0
    for c in cells:
        if isinstance(c, int):
            if not 0 <= c < len(K.cells):
                raise UnknownCell(f"cell index {c} out of range")
            total += K.signs[c]
        else:
            total += K.signs[K.cell_index(c)]
    return total


# generators -------------------------------------------------------------


def grid_complex(nx: int, ny: int, x_range=(0, 1), y_range=(0, 1)) -> SimplicialComplex:
    """Rectangle split into nx*ny squares, each cut along its SW-NE diagonal.

    Vertex id of grid node (i, j) is ``j * (nx + 1) + i``.
    """
    if nx < 1 or ny < 1:
        raise EmptyRange("grid needs nx, ny >= 1")
    x0, x1 = (as_fraction(v) for v in x_range)
    y0, y1 = (as_fraction(v) for v in y_range)
    if not (x1 > x0 and y1 > y0):
        raise EmptyRange("grid ranges must have positive length")
    coords = [
        (x0 + (x1 - x0) * i / nx, y0 + (y1 - y0) * j / ny) for j in range(ny + 1) for i in range(nx + 1)
    ]

    def vid(i, j):
        return j * (nx + 1) + i

    tris = []
    for j in range(ny):
        for i in range(nx):
            sw, se, nw, ne = vid(i, j), vid(i + 1, j), vid(i, j + 1), vid(i + 1, j + 1)
            tris.append(tuple(sorted((sw, se, ne))))
            tris.append(tuple(sorted((sw, nw, ne))))
    return SimplicialComplex(coords, _face_closure(tris))


def path_complex(points) -> SimplicialComplex:
    """Subdivided segment in R^1 with the given increasing breakpoints."""
    pts = [as_fraction(p) for p in points]
    if not pts:
        raise TooFewVertices("need at least one point")
    if any(b <= a for a, b in zip(pts, pts[1:])):
        raise DegenerateSimplex("breakpoints must be strictly increasing")
    cells = {(i,) for i in range(len(pts))} | {(i, i + 1) for i in range(len(pts) - 1)}
    return SimplicialComplex([(p,) for p in pts], cells)


def line_complex(points, edges) -> SimplicialComplex:
    """1-D complex in R^1: increasing breakpoints plus the consecutive gaps that are present."""
    pts = [as_fraction(p) for p in points]
    if any(b <= a for a, b in zip(pts, pts[1:])):
        raise DegenerateSimplex("breakpoints must be strictly increasing")
    cells = {(i,) for i in range(len(pts))}
    for i in edges:
        if not 0 <= i < len(pts) - 1:
            raise DegenerateSimplex(f"gap index {i} out of range")
        cells.add((i, i + 1))
    return SimplicialComplex([(p,) for p in pts], cells)


def _rational_circle_point(theta: float):
    # rational point on the unit circle from a rational approximation of tan(theta/2)
    t = Fraction(math.tan(theta / 2)).limit_denominator(100)
    d = 1 + t * t
    return ((1 - t * t) / d, 2 * t / d)


def circle(n: int) -> SimplicialComplex:
    """Boundary of a convex n-gon with vertices on the unit circle (exact rationals)."""
    if n < 3:
        raise TooFewVertices("circle needs n >= 3")
    # angles in (-pi, pi) so tan(theta/2) stays finite
    angles = [-math.pi + (2 * math.pi) * (k + 0.5) / n for k in range(n)]
    coords = [_rational_circle_point(a) for a in angles]
    edges = {tuple(sorted((k, (k + 1) % n))) for k in range(n)}
    return SimplicialComplex(coords, _face_closure(edges))


def sphere_boundary() -> SimplicialComplex:
    """Boundary of the standard 3-simplex: a triangulated 2-sphere."""
    coords = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]
    return SimplicialComplex(coords, _face_closure(itertools.combinations(range(4), 3)))


def torus(n: int, m: int) -> SimplicialComplex:
    """circle(n) x circle(m): the boundary squares of a product of two polygons in R^4."""
    if n < 3 or m < 3:
        raise TooFewVertices("torus needs n, m >= 3")
    return product_complex(circle(n), circle(m))


def convex_polygon(points) -> SimplicialComplex:
    """Fan triangulation of a convex polygon given counterclockwise (1 or 2 points allowed)."""
    pts = [tuple(as_fraction(x) for x in p) for p in points]
    if not pts:
        raise TooFewVertices("polygon needs a vertex")
    if len(pts) == 1:
        return SimplicialComplex(pts, {(0,)})
    if len(pts) == 2:
        return build_complex(pts, [(0, 1)], validate=False)
    tris = [(0, i, i + 1) for i in range(1, len(pts) - 1)]
    return build_complex(pts, tris, validate=False)


def product_complex(K: SimplicialComplex, L: SimplicialComplex) -> SimplicialComplex:
    """Staircase triangulation of |K| x |L| using the vertex orders of K and L.

    Product vertex (a, b) gets id ``a * L.num_vertices + b``.  A product cell
    is a chain of pairs strictly increasing in the product order whose
    projections span cells of K and L.
    """
    nL = L.num_vertices
    coords = [pa + pb for pa in K.coords for pb in L.coords]
    cells = set()
    for s in K.maximal_cells:
        for t in L.maximal_cells:
            p, q = len(s) - 1, len(t) - 1
            # monotone lattice paths from (0,0) to (p,q)
            for steps in itertools.combinations(range(p + q), p):
                i = j = 0
                path = [(i, j)]
                for k in range(p + q):
                    if k in steps:
                        i += 1
                    else:
                        j += 1
                    path.append((i, j))
                cells.add(tuple(s[a] * nL + t[b] for a, b in path))
    return SimplicialComplex(coords, _face_closure(cells))


def disjoint_union(K: SimplicialComplex, L: SimplicialComplex, offset=None) -> SimplicialComplex:
    """K ⊔ L with L's vertices shifted by ``offset`` (default: past K's bounding box on axis 0)."""
    if K.ambient_dim != L.ambient_dim:
        raise DegenerateSimplex("ambient dimensions differ")
    if offset is None:
        shift = max(p[0] for p in K.coords) - min(p[0] for p in L.coords) + 1
        offset = (shift,) + (0,) * (K.ambient_dim - 1)
    offset = tuple(as_fraction(x) for x in offset)
    n = K.num_vertices
    coords = list(K.coords) + [tuple(a + b for a, b in zip(p, offset)) for p in L.coords]
    cells = set(K.cells) | {tuple(v + n for v in c) for c in L.cells}
    return SimplicialComplex(coords, cells)


def subcomplex(K: SimplicialComplex, vertices) -> tuple:
    """Induced subcomplex on a vertex subset.  Returns (complex, old->new vertex map)."""
    keep = sorted(set(vertices))
    new = {v: i for i, v in enumerate(keep)}
    cells = {tuple(new[v] for v in c) for c in K.cells if all(v in new for v in c)}
    return SimplicialComplex([K.coords[v] for v in keep], cells), new


def relabel(K: SimplicialComplex, perm) -> SimplicialComplex:
    """Same geometric complex with vertex ``v`` renamed ``perm[v]``."""
    coords = [None] * K.num_vertices
    for v, p in enumerate(K.coords):
        coords[perm[v]] = p
    return SimplicialComplex(coords, {tuple(sorted(perm[v] for v in c)) for c in K.cells})


def transform_coords(K: SimplicialComplex, fn) -> SimplicialComplex:
    return SimplicialComplex([fn(p) for p in K.coords], K.cells)


def barycentric_subdivision(K: SimplicialComplex) -> SimplicialComplex:
    """First barycentric subdivision.

    Vertex ``i`` of the result is the barycenter of ``K.cells[i]``, and a cell
    of the result lies inside the open cell of ``K`` carrying its largest vertex.
    """
    coords = []
    for c in K.cells:
        pts = [K.coords[v] for v in c]
        coords.append(tuple(sum(col) / len(c) for col in zip(*pts)))
    chains = set()
    for i, c in enumerate(K.cells):
        if K.cofaces[i]:
            continue
        # all maximal flags of faces of c
        for order in itertools.permutations(c):
            chain = tuple(K.index[tuple(sorted(order[: k + 1]))] for k in range(len(c)))
            chains.add(tuple(sorted(chain)))
    # cells sorted by K's order are sorted by dimension, so a sorted chain is a flag
    return SimplicialComplex(coords, _face_closure(chains))


def closed_manifold_dim(K: SimplicialComplex):
    """n if K is a closed combinatorial n-manifold with n <= 2, else None."""
    n = K.dim
    if n < 1 or n > 2:
        return None
    top = [i for i in range(len(K.cells)) if K.dims[i] == n]
    covered = set()
    for i in top:
        covered.update(K.index[f] for f in K.closure(K.cells[i]))
    if len(covered) != len(K.cells):
        return None
    for i, c in enumerate(K.cells):
        if K.dims[i] == n - 1:
            if sum(1 for j in K.cofaces[i] if K.dims[j] == n) != 2:
                return None
    if n == 2:
        # vertex links must be single cycles
        for v in range(K.num_vertices):
            lk = K.link((v,))
            verts = {c[0] for c in lk if len(c) == 1}
            edges = [c for c in lk if len(c) == 2]
            deg = {u: 0 for u in verts}
            for a, b in edges:
                deg[a] += 1
                deg[b] += 1
            if not verts or any(d != 2 for d in deg.values()):
                return None
            # connectivity
            adj = {u: [] for u in verts}
            for a, b in edges:
                adj[a].append(b)
                adj[b].append(a)
            start = next(iter(verts))
            seen = {start}
            stack = [start]
            while stack:
                u = stack.pop()
                for w in adj[u]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            if seen != verts:
                return None
    return n
