"""Connected-component (β₀) evaluation of ∫h⌊dχ⌋ for continuous planar integrands.

An excursion set meets every open cell in a convex (hence connected) piece,
and two pieces in incident cells touch exactly when both are nonempty, so
components are computed by union-find on the cell incidence graph.  The
unbounded part of the plane outside the window is one extra node on which
h = 0, glued to the window boundary.
"""

from __future__ import annotations

from fractions import Fraction

from .complex import SimplicialComplex, as_fraction
from .defint import DefFun
from .errors import NotContinuous, PreconditionError, SupportTouchesBoundary


class UnionFind:
    def __init__(self, size):
        self.parent = list(range(size))
        self.rank = [0] * size

    def find(self, a):
        root = a
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[a] != root:
            self.parent[a], a = root, self.parent[a]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1


def piece_nonempty(lo, hi, s, kind: str) -> bool:
    """Whether {h <kind> s} meets an open cell on which h is affine with closure range [lo, hi]."""
    if kind == ">=":
        return s < hi or (lo == hi and s <= hi)
    if kind == ">":
        return s < hi
    if kind == "<=":
        return s > lo or (lo == hi and s >= lo)
    if kind == "<":
        return s > lo
    raise ValueError(f"unknown excursion kind {kind!r}")


class PlanarWindow:
    """A triangulated disk in R² together with the unbounded outside region (h = 0 there)."""

    def __init__(self, K: SimplicialComplex):
        if K.ambient_dim != 2 or K.dim != 2:
            raise PreconditionError("planar window must be a 2-complex in R^2")
        if K.euler_characteristic() != 1:
            raise PreconditionError("planar window must be a disk (χ = 1)")
        self.complex = K
        self.boundary = K.boundary_cells
        faces = []
        for i, c in enumerate(K.cells):
            for f in K.closure(c)[:-1]:
                faces.append((K.index[f], i))
        self.incidences = faces

    def check(self, h: DefFun):
        if h.complex != self.complex:
            raise PreconditionError("function lives on a different complex")
        if not h.is_continuous:
            raise NotContinuous("β₀ formula needs a continuous integrand")
        for i in self.boundary:
            if h.cell_min[i] != 0 or h.cell_max[i] != 0:
                raise SupportTouchesBoundary(f"h is nonzero on boundary cell {self.complex.cells[i]}")

    def components(self, h: DefFun, s, kind: str) -> int:
        K = self.complex
        n = len(K.cells)
        on = [piece_nonempty(lo, hi, s, kind) for lo, hi in zip(h.cell_min, h.cell_max)]
        outside = piece_nonempty(0, 0, s, kind)
        uf = UnionFind(n + 1)
        for a, b in self.incidences:
            if on[a] and on[b]:
                uf.union(a, b)
        if outside:
            for i in self.boundary:
                if on[i]:
                    uf.union(i, n)
        roots = {uf.find(i) for i in range(n) if on[i]}
        if outside:
            roots.add(uf.find(n))
        return len(roots)


def betti0_excursion(h: DefFun, s, kind: str = ">=", window: PlanarWindow | None = None) -> int:
    """β₀ of {x ∈ R² : h(x) <kind> s} for h extended by zero outside the window."""
    window = window or PlanarWindow(h.complex)
    window.check(h)
    return window.components(h, as_fraction(s), kind)


def integrate_betti0(h: DefFun, window: PlanarWindow | None = None) -> Fraction:
    """∫_0^∞ β₀{h≥s} + β₀{h≥−s} − β₀{h<s} − β₀{h<−s} ds, exact over breakpoint intervals."""
    window = window or PlanarWindow(h.complex)
    window.check(h)
    cuts = sorted({abs(x) for x in h.vertex_values} | {Fraction(0)})
    total = Fraction(0)
    for a, b in zip(cuts, cuts[1:]):
        mid = (a + b) / 2
        beta = (
            window.components(h, mid, ">=")
            + window.components(h, -mid, ">=")
            - window.components(h, mid, "<")
            - window.components(h, -mid, "<")
        )
        total += (b - a) * beta
    return total
