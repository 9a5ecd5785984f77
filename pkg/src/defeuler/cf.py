"""Constructible functions: integer values on open cells, integrated against χ."""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import Mapping

from .complex import SimplicialComplex, as_fraction, line_complex
from .errors import InvalidMap, NotConvex, NotCounterclockwise, NotOneDimensional, UnknownCell


@dataclass(frozen=True, eq=False)
class CFun:
    """Integer-valued function, constant on each open cell of ``complex``."""

    complex: SimplicialComplex
    values: tuple

    def __post_init__(self):
        if len(self.values) != len(self.complex.cells):
            raise ValueError("one value per cell required")

    @classmethod
    def from_cells(cls, K: SimplicialComplex, mapping: Mapping, default: int = 0) -> "CFun":
        vals = [default] * len(K.cells)
        for cell, v in mapping.items():
            vals[K.cell_index(cell) if not isinstance(cell, int) else cell] = int(v)
        return cls(K, tuple(vals))

    @classmethod
    def indicator(cls, K: SimplicialComplex, cells=None, closed: bool = True, weight: int = 1) -> "CFun":
        """Indicator of a union of cells; ``closed`` adds all their faces."""
        if cells is None:
            return cls(K, (weight,) * len(K.cells))
        on = set()
        for c in cells:
            c = K.cells[c] if isinstance(c, int) else tuple(sorted(c))
            if c not in K.index:
                raise UnknownCell(f"cell {c} is not in the complex")
            on.update(K.closure(c) if closed else [c])
        return cls(K, tuple(weight if c in on else 0 for c in K.cells))

    def __call__(self, cell) -> int:
        return self.values[self.complex.cell_index(cell)]

    def _check(self, other):
        if other.complex is not self.complex and other.complex != self.complex:
            raise ValueError("functions live on different complexes")

    def __add__(self, other):
        self._check(other)
        return CFun(self.complex, tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other):
        self._check(other)
        return CFun(self.complex, tuple(a - b for a, b in zip(self.values, other.values)))

    def __neg__(self):
        return CFun(self.complex, tuple(-a for a in self.values))

    def __mul__(self, k: int):
        return CFun(self.complex, tuple(k * a for a in self.values))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, CFun):
            return NotImplemented
        return self.complex == other.complex and self.values == other.values

    def __hash__(self):
        return hash((self.complex, self.values))

    @property
    def support(self) -> list:
        """Cells carrying a nonzero value."""
        return [c for c, v in zip(self.complex.cells, self.values) if v]


def integrate_cf(h: CFun) -> int:
    """∫ h dχ = Σ_cells h(c)·(-1)^dim c."""
    return sum(v * s for v, s in zip(h.values, h.complex.signs))


def integrate_cf_levelset(h: CFun) -> int:
    """Same integral via Σ_{s≥0} χ{h>s} − χ{h<−s}, with each level set built as a cell list."""
    K = h.complex
    top = max((abs(v) for v in h.values), default=0)
    total = 0
    for s in range(top):
        above = [i for i, v in enumerate(h.values) if v > s]
        below = [i for i, v in enumerate(h.values) if v < -s]
        total += K.euler_characteristic(above) - K.euler_characteristic(below)
    return total


# maps -------------------------------------------------------------------


class SimplicialMap:
    """Vertex map sending every source cell onto a target cell."""

    def __init__(self, source: SimplicialComplex, target: SimplicialComplex, vertex_map):
        if isinstance(vertex_map, Mapping):
            vertex_map = [vertex_map[v] for v in range(source.num_vertices)]
        self.source = source
        self.target = target
        self.vertex_map = tuple(int(v) for v in vertex_map)
        if len(self.vertex_map) != source.num_vertices:
            raise InvalidMap("vertex map must cover every source vertex")
        images = []
        for c in source.cells:
            img = tuple(sorted({self.vertex_map[v] for v in c}))
            j = target.index.get(img)
            if j is None:
                raise InvalidMap(f"image of cell {c} is {img}, not a target cell")
            images.append(j)
        self.cell_image = tuple(images)

    def preimage_cells(self, j: int) -> list:
        return [i for i, t in enumerate(self.cell_image) if t == j]

    @property
    def fibers(self) -> dict:
        out = {}
        for i, t in enumerate(self.cell_image):
            out.setdefault(t, []).append(i)
        return out


def pushforward(F: SimplicialMap, h: CFun) -> CFun:
    """F_*h(τ) = Σ_{σ: F(σ)=τ} h(σ)·(-1)^{dim σ − dim τ}.

    Over a point of the open cell τ the fibre meets each such σ in an open
    cell of dimension dim σ − dim τ.
    """
    if h.complex is not F.source and h.complex != F.source:
        raise InvalidMap("function is not defined on the map's source")
    S, T = F.source, F.target
    out = [0] * len(T.cells)
    for i, j in enumerate(F.cell_image):
        v = h.values[i]
        if v:
            out[j] += v * (-1) ** ((S.dims[i] - T.dims[j]) % 2)
    return CFun(T, tuple(out))


# one-dimensional convolution ----------------------------------------------


@dataclass(frozen=True)
class LineProfile:
    """A constructible function on R: values at sorted breakpoints and on the gaps between them.

    ``gaps[i]`` is the value on the open interval (points[i], points[i+1]);
    the function is 0 outside [points[0], points[-1]].
    """

    points: tuple
    values: tuple
    gaps: tuple

    def __call__(self, t) -> int:
        i = bisect.bisect_left(self.points, t)
        if i < len(self.points) and self.points[i] == t:
            return self.values[i]
        if i == 0 or i == len(self.points):
            return 0
        return self.gaps[i - 1]

    def integral(self) -> int:
        return sum(self.values) - sum(self.gaps)

    def canonical(self) -> "LineProfile":
        """Drop every breakpoint whose value matches both neighbouring gaps."""
        pts, vals, gaps = list(self.points), list(self.values), list(self.gaps)
        out_p, out_v, out_g = [], [], []
        for i, p in enumerate(pts):
            left = gaps[i - 1] if i > 0 else 0
            right = gaps[i] if i < len(gaps) else 0
            if vals[i] == left == right:
                continue
            if out_p:
                out_g.append(left)
            out_p.append(p)
            out_v.append(vals[i])
        return LineProfile(tuple(out_p), tuple(out_v), tuple(out_g))

    def to_cfun(self) -> CFun:
        K = line_complex(self.points, [i for i, g in enumerate(self.gaps) if g])
        vals = [0] * len(K.cells)
        for i, v in enumerate(self.values):
            vals[K.index[(i,)]] = v
        for i, g in enumerate(self.gaps):
            if g:
                vals[K.index[(i, i + 1)]] = g
        return CFun(K, tuple(vals))


def line_profile(h: CFun) -> LineProfile:
    K = h.complex
    if K.num_vertices and (K.ambient_dim != 1 or K.dim > 1):
        raise NotOneDimensional("function must live on a complex of dimension <= 1 in R^1")
    order = sorted(range(K.num_vertices), key=lambda v: K.coords[v][0])
    pts = tuple(K.coords[v][0] for v in order)
    vals = tuple(h.values[K.index[(v,)]] for v in order)
    gaps = []
    for a, b in zip(order, order[1:]):
        j = K.index.get(tuple(sorted((a, b))))
        gaps.append(h.values[j] if j is not None else 0)
    return LineProfile(pts, vals, tuple(gaps))


def cf_line(points, values, gaps) -> CFun:
    """CFun on R from breakpoints, point values and gap values (see :class:`LineProfile`)."""
    pts = tuple(as_fraction(p) for p in points)
    if len(values) != len(pts) or len(gaps) != max(len(pts) - 1, 0):
        raise ValueError("need one value per point and one per gap")
    return LineProfile(pts, tuple(int(v) for v in values), tuple(int(g) for g in gaps)).to_cfun()


def _convolution_at(f: LineProfile, g: LineProfile, x) -> int:
    # ∫ f(t) g(x - t) dχ(t): the integrand is constant on the cells of the
    # partition of the t-axis by f's breakpoints and x minus g's breakpoints
    cuts = sorted(set(f.points) | {x - b for b in g.points})
    total = 0
    for i, t in enumerate(cuts):
        total += f(t) * g(x - t)
        if i + 1 < len(cuts):
            mid = (t + cuts[i + 1]) / 2
            total -= f(mid) * g(x - mid)
    return total


def convolve_1d(f: CFun, g: CFun) -> CFun:
    """Euler convolution (f*g)(x) = ∫ f(t) g(x−t) dχ(t), returned in canonical form."""
    pf, pg = line_profile(f), line_profile(g)
    if not pf.points or not pg.points:
        return LineProfile((), (), ()).to_cfun()
    sums = sorted({a + b for a in pf.points for b in pg.points})
    vals = tuple(_convolution_at(pf, pg, x) for x in sums)
    gaps = tuple(_convolution_at(pf, pg, (a + b) / 2) for a, b in zip(sums, sums[1:]))
    prof = LineProfile(tuple(sums), vals, gaps).canonical()
    return prof.to_cfun()


def cf_line_equal(f: CFun, g: CFun) -> bool:
    """Equality of 1-D constructible functions up to subdivision."""
    return line_profile(f).canonical() == line_profile(g).canonical()


# convex polygons ----------------------------------------------------------


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _half(v):
    # 0 for angles in [0, pi), 1 for [pi, 2pi)
    return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1


def _angle_less(u, v):
    hu, hv = _half(u), _half(v)
    if hu != hv:
        return hu < hv
    return u[0] * v[1] - u[1] * v[0] > 0


def _check_convex_ccw(P):
    n = len(P)
    if n < 3:
        if n == 2 and P[0] == P[1]:
            raise NotConvex("segment endpoints coincide")
        return
    crosses = [_cross(P[i], P[(i + 1) % n], P[(i + 2) % n]) for i in range(n)]
    if all(c < 0 for c in crosses):
        raise NotCounterclockwise("polygon is clockwise")
    if not all(c > 0 for c in crosses):
        raise NotConvex("polygon has a reflex or straight vertex")
    edges = [(P[(i + 1) % n][0] - P[i][0], P[(i + 1) % n][1] - P[i][1]) for i in range(n)]
    descents = sum(1 for i in range(n) if not _angle_less(edges[i], edges[(i + 1) % n]))
    if descents != 1:
        raise NotConvex("polygon winds more than once")


def _from_bottom(P):
    k = min(range(len(P)), key=lambda i: (P[i][1], P[i][0]))
    return P[k:] + P[:k]


def minkowski_indicator(A, B) -> list:
    """Vertex list (counterclockwise, from the bottom-most vertex) of A + B.

    For compact convex A, B this is the support of the Euler convolution
    1_A * 1_B = 1_{A+B}.  Points and segments are accepted as degenerate polygons.
    """
    A = [tuple(as_fraction(x) for x in p) for p in A]
    B = [tuple(as_fraction(x) for x in p) for p in B]
    _check_convex_ccw(A)
    _check_convex_ccw(B)
    A, B = _from_bottom(A), _from_bottom(B)

    def edges(P):
        if len(P) == 1:
            return []
        return [(P[(i + 1) % len(P)][0] - P[i][0], P[(i + 1) % len(P)][1] - P[i][1]) for i in range(len(P))]

    ea, eb = edges(A), edges(B)
    cur = (A[0][0] + B[0][0], A[0][1] + B[0][1])
    out = [cur]
    i = j = 0
    while i < len(ea) or j < len(eb):
        if j >= len(eb) or (i < len(ea) and not _angle_less(eb[j], ea[i])):
            e = ea[i]
            i += 1
        else:
            e = eb[j]
            j += 1
        cur = (cur[0] + e[0], cur[1] + e[1])
        out.append(cur)
    out.pop()  # back at the start
    # drop vertices lying strictly inside a straight run (segment endpoints are spikes and stay)
    changed = True
    while changed and len(out) > 2:
        changed = False
        for k in range(len(out)):
            a, o, b = out[k - 1], out[k], out[(k + 1) % len(out)]
            dot = (a[0] - o[0]) * (b[0] - o[0]) + (a[1] - o[1]) * (b[1] - o[1])
            if _cross(a, o, b) == 0 and dot < 0:
                del out[k]
                changed = True
                break
    if len(out) == 2 and out[0] == out[1]:
        out = out[:1]
    return out
