"""Lower, upper and averaged Euler integrals of cell-wise affine functions.

A :class:`DefFun` stores, for every open cell, the values that the affine
extension of the function on that cell takes at the cell's vertices (its
closure limits).  The infimum over the open cell is the least of these, the
supremum the greatest, which is all the closed-form integral needs.  The
level-set, Riemann, ε-slab and push-to-the-line evaluations below compute the
same numbers along independent routes.
"""

from __future__ import annotations

import bisect
import enum
import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import accumulate

import numpy as np

from .cf import CFun, SimplicialMap
from .complex import SimplicialComplex, as_fraction, barycentric_subdivision, path_complex, sign
from .errors import EpsilonTooLarge, InvalidMap, NotContinuous, NotFiberConstant


class Measure(enum.Enum):
    FLOOR = "floor"
    CEIL = "ceil"
    AVG = "avg"

    @classmethod
    def parse(cls, s) -> "Measure":
        if isinstance(s, Measure):
            return s
        return cls(str(s).lower())


FLOOR, CEIL, AVG = Measure.FLOOR, Measure.CEIL, Measure.AVG

KINDS = (">=", ">", "<=", "<")


@dataclass(frozen=True, eq=False)
class DefFun:
    """Cell-wise affine function.  ``data[i]`` lists limit values at the vertices of ``complex.cells[i]``."""

    complex: SimplicialComplex
    data: tuple

    def __post_init__(self):
        cells = self.complex.cells
        if len(self.data) != len(cells):
            raise ValueError("one data tuple per cell required")
        for c, d in zip(cells, self.data):
            if len(d) != len(c):
                raise ValueError(f"cell {c} needs {len(c)} limit values, got {len(d)}")

    # constructors ---------------------------------------------------------

    @classmethod
    def from_vertex_values(cls, K: SimplicialComplex, values) -> "DefFun":
        """Continuous PL interpolation of vertex values."""
        vals = [as_fraction(v) for v in values]
        if len(vals) != K.num_vertices:
            raise ValueError("one value per vertex required")
        return cls(K, tuple(tuple(vals[v] for v in c) for c in K.cells))

    @classmethod
    def from_function(cls, K: SimplicialComplex, fn) -> "DefFun":
        """PL interpolation of ``fn`` sampled at the vertex coordinates."""
        return cls.from_vertex_values(K, [fn(p) for p in K.coords])

    @classmethod
    def from_cfun(cls, h: CFun) -> "DefFun":
        return cls(h.complex, tuple((Fraction(v),) * len(c) for v, c in zip(h.values, h.complex.cells)))

    @classmethod
    def from_cell_values(cls, K: SimplicialComplex, values) -> "DefFun":
        """Constant on each open cell (rational values allowed)."""
        return cls(K, tuple((as_fraction(v),) * len(c) for v, c in zip(values, K.cells)))

    @classmethod
    def from_cell_affine(cls, K: SimplicialComplex, mapping, default=0) -> "DefFun":
        """``mapping``: cell -> sequence of limit values in the cell's sorted vertex order."""
        data = [(as_fraction(default),) * len(c) for c in K.cells]
        for cell, vals in mapping.items():
            i = K.cell_index(cell)
            data[i] = tuple(as_fraction(v) for v in vals)
        return cls(K, tuple(data))

    @classmethod
    def constant(cls, K: SimplicialComplex, q) -> "DefFun":
        q = as_fraction(q)
        return cls(K, tuple((q,) * len(c) for c in K.cells))

    # derived data ---------------------------------------------------------

    @cached_property
    def cell_min(self) -> tuple:
        return tuple(min(d) for d in self.data)

    @cached_property
    def cell_max(self) -> tuple:
        return tuple(max(d) for d in self.data)

    @cached_property
    def is_continuous(self) -> bool:
        K = self.complex
        at = [K.index[(v,)] for v in range(K.num_vertices)]
        for c, d in zip(K.cells, self.data):
            for v, x in zip(c, d):
                if self.data[at[v]][0] != x:
                    return False
        return True

    @cached_property
    def is_cellwise_constant(self) -> bool:
        return all(lo == hi for lo, hi in zip(self.cell_min, self.cell_max))

    @property
    def vertex_values(self) -> tuple:
        if not self.is_continuous:
            raise NotContinuous("vertex values are only well-defined for continuous functions")
        K = self.complex
        return tuple(self.data[K.index[(v,)]][0] for v in range(K.num_vertices))

    def limits(self, cell, face) -> tuple:
        """Limit values of the piece on ``cell`` at the vertices of ``face`` (a face of ``cell``)."""
        i = self.complex.cell_index(cell)
        pos = {v: k for k, v in enumerate(self.complex.cells[i])}
        return tuple(self.data[i][pos[v]] for v in sorted(face))

    def to_cfun(self) -> CFun:
        if not self.is_cellwise_constant or any(x.denominator != 1 for x in self.cell_min):
            raise ValueError("not an integer-valued cell-wise constant function")
        return CFun(self.complex, tuple(int(x) for x in self.cell_min))

    # arithmetic -----------------------------------------------------------

    def __neg__(self) -> "DefFun":
        return DefFun(self.complex, tuple(tuple(-x for x in d) for d in self.data))

    def __add__(self, other: "DefFun") -> "DefFun":
        if other.complex != self.complex:
            raise ValueError("functions live on different complexes")
        return DefFun(self.complex, tuple(tuple(a + b for a, b in zip(p, q)) for p, q in zip(self.data, other.data)))

    def __sub__(self, other: "DefFun") -> "DefFun":
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, DefFun):
            return NotImplemented
        return self.complex == other.complex and self.data == other.data

    def __hash__(self):
        return hash((self.complex, self.data))


def conjugate(h: DefFun) -> DefFun:
    """Pointwise negation."""
    return -h


def scale(h: DefFun, lam) -> DefFun:
    lam = as_fraction(lam)
    return DefFun(h.complex, tuple(tuple(lam * x for x in d) for d in h.data))


# closed form --------------------------------------------------------------


def integrate(h: DefFun, m=FLOOR) -> Fraction:
    """Σ_cells (-1)^dim · inf (FLOOR) or sup (CEIL); AVG is their mean."""
    m = Measure.parse(m)
    signs = h.complex.signs
    if m is FLOOR:
        return Fraction(sum(s * x for s, x in zip(signs, h.cell_min)))
    if m is CEIL:
        return Fraction(sum(s * x for s, x in zip(signs, h.cell_max)))
    return (integrate(h, FLOOR) + integrate(h, CEIL)) / 2


# excursion sets -------------------------------------------------------------


def cell_excursion_chi(lo, hi, k: int, s, kind: str) -> int:
    """χ (compactly supported) of {x in an open k-cell : h(x) <kind> s}, h affine with range [lo, hi] on the closure."""
    if kind == ">=":
        hit = s <= lo
    elif kind == ">":
        hit = s < hi
    elif kind == "<=":
        hit = s >= hi
    elif kind == "<":
        hit = s > lo
    else:
        raise ValueError(f"unknown excursion kind {kind!r}")
    return sign(k) if hit else 0


def chi_excursion(h: DefFun, s, kind: str = ">=") -> int:
    s = as_fraction(s)
    dims = h.complex.dims
    return sum(cell_excursion_chi(lo, hi, k, s, kind) for lo, hi, k in zip(h.cell_min, h.cell_max, dims))


class ExcursionProfile:
    """Fast repeated evaluation of s ↦ χ{h <kind> s} via sorted thresholds and prefix sums.

    Evaluates exactly the same per-cell rule as :func:`cell_excursion_chi`.
    """

    def __init__(self, h: DefFun):
        signs = h.complex.signs
        # net sign per distinct value; sorting distinct values only is much cheaper
        lo, hi = defaultdict(int), defaultdict(int)
        for a, b, sg in zip(h.cell_min, h.cell_max, signs):
            lo[a] += sg
            hi[b] += sg
        self._lo = sorted(lo)
        self._hi = sorted(hi)
        self._lo_pre = [0] + list(accumulate(lo[x] for x in self._lo))
        self._hi_pre = [0] + list(accumulate(hi[x] for x in self._hi))
        self.extrema = sorted(set(lo) | set(hi))

    def __call__(self, s, kind: str = ">=") -> int:
        if kind == ">=":  # cells with s <= lo
            i = bisect.bisect_left(self._lo, s)
            return self._lo_pre[-1] - self._lo_pre[i]
        if kind == ">":  # s < hi
            i = bisect.bisect_right(self._hi, s)
            return self._hi_pre[-1] - self._hi_pre[i]
        if kind == "<=":  # s >= hi
            return self._hi_pre[bisect.bisect_right(self._hi, s)]
        if kind == "<":  # s > lo
            return self._lo_pre[bisect.bisect_left(self._lo, s)]
        raise ValueError(f"unknown excursion kind {kind!r}")


def integrate_levelset(h: DefFun, m=FLOOR) -> Fraction:
    """∫_0^∞ χ{h≥s} − χ{h<−s} ds (FLOOR) or χ{h>s} − χ{h≤−s} (CEIL), summed exactly over breakpoint intervals."""
    m = Measure.parse(m)
    if m is AVG:
        return (integrate_levelset(h, FLOOR) + integrate_levelset(h, CEIL)) / 2
    prof = ExcursionProfile(h)
    pos, neg = (">=", "<") if m is FLOOR else (">", "<=")
    cuts = sorted({abs(x) for x in prof.extrema} | {Fraction(0)})
    total = Fraction(0)
    for a, b in zip(cuts, cuts[1:]):
        mid = (a + b) / 2
        total += (b - a) * (prof(mid, pos) - prof(-mid, neg))
    return total


# Riemann-sum oracle ---------------------------------------------------------


def _count_le(s, x):
    # integer array s, rational x: s <= x
    return s <= math.floor(x)


def _count_lt(s, x):
    return s < math.ceil(x)


def _cell_chi_scaled(kind, s, lo, hi, sgn):
    """Vectorised per-cell excursion χ for integer thresholds ``s`` (already multiplied by n)."""
    if kind == ">=":
        hit = _count_le(s, lo)
    elif kind == ">":
        hit = _count_lt(s, hi)
    else:
        raise ValueError(kind)
    return sgn * hit.astype(np.int64)


def riemann_oracle(h: DefFun, n: int, m=FLOOR) -> Fraction:
    """(1/n) ∫ ⌊n h⌋ dχ (or ⌈n h⌉ for CEIL), summing s·χ{⌊nh⌋ = s} level by level on every cell."""
    m = Measure.parse(m)
    if n < 1:
        raise ValueError("n must be positive")
    if m is AVG:
        return (riemann_oracle(h, n, FLOOR) + riemann_oracle(h, n, CEIL)) / 2
    total = 0
    for lo, hi, sgn in zip(h.cell_min, h.cell_max, h.complex.signs):
        nlo, nhi = n * lo, n * hi
        if m is FLOOR:
            s = np.arange(math.floor(nlo) - 1, math.floor(nhi) + 2, dtype=np.int64)
            # {⌊nh⌋ = s} = {nh >= s} minus {nh >= s+1}
            level = _cell_chi_scaled(">=", s, nlo, nhi, sgn) - _cell_chi_scaled(">=", s + 1, nlo, nhi, sgn)
        else:
            s = np.arange(math.ceil(nlo) - 1, math.ceil(nhi) + 2, dtype=np.int64)
            # {⌈nh⌉ = s} = {nh > s-1} minus {nh > s}
            level = _cell_chi_scaled(">", s - 1, nlo, nhi, sgn) - _cell_chi_scaled(">", s, nlo, nhi, sgn)
        total += int(np.dot(s, level))
    return Fraction(total, n)


# ε-slab formula ---------------------------------------------------------------


def min_extremum_gap(h: DefFun):
    ext = ExcursionProfile(h).extrema
    gaps = [b - a for a, b in zip(ext, ext[1:])]
    return min(gaps) if gaps else None


def epsilon_formula(h: DefFun, eps, m=FLOOR) -> Fraction:
    """(1/ε) ∫_R s·χ{s ≤ h < s+ε} ds (FLOOR; CEIL uses s < h ≤ s+ε), evaluated exactly."""
    m = Measure.parse(m)
    eps = as_fraction(eps)
    if eps <= 0:
        raise EpsilonTooLarge("ε must be positive")
    gap = min_extremum_gap(h)
    if gap is not None and eps >= gap:
        raise EpsilonTooLarge(f"ε={eps} is not below the smallest gap {gap} between extrema")
    if m is AVG:
        return (epsilon_formula(h, eps, FLOOR) + epsilon_formula(h, eps, CEIL)) / 2
    prof = ExcursionProfile(h)
    kind = ">=" if m is FLOOR else ">"
    cuts = sorted(set(prof.extrema) | {x - eps for x in prof.extrema})
    total = Fraction(0)
    for a, b in zip(cuts, cuts[1:]):
        mid = (a + b) / 2
        slab = prof(mid, kind) - prof(mid + eps, kind)
        if slab:
            total += slab * (b * b - a * a) / 2
    return total / eps


# pushforward to the line ------------------------------------------------------


def level_chi_on_line(h: DefFun):
    """The 1-D complex of extrema and the function s ↦ s·χ{h = s} on it, as a DefFun."""
    prof = ExcursionProfile(h)
    pts = prof.extrema
    L = path_complex(pts)

    def gamma(s):
        return prof(s, ">=") - prof(s, ">")

    data = []
    for c in L.cells:
        if len(c) == 1:
            p = pts[c[0]]
            data.append((p * gamma(p),))
        else:
            a, b = pts[c[0]], pts[c[1]]
            g = gamma((a + b) / 2)
            data.append((a * g, b * g))
    return DefFun(L, tuple(data))


def pushforward_to_line(h: DefFun, m=FLOOR) -> Fraction:
    """∫_R s·χ{h=s} with measure m.

    Matches integrate(h, m) when χ{h=s} ≥ 0 between extrema (continuous PL on
    surfaces, cell-wise constant data); AVG matches for every h.
    """
    return integrate(level_chi_on_line(h), m)


# maps and Fubini --------------------------------------------------------------


def _factor_through(F: SimplicialMap, h: DefFun, i: int) -> tuple:
    """Limit data on the image cell of source cell i, if h's piece on i factors through F."""
    S, T = F.source, F.target
    c = S.cells[i]
    tau = T.cells[F.cell_image[i]]
    got = {}
    for v, x in zip(c, h.data[i]):
        w = F.vertex_map[v]
        if got.setdefault(w, x) != x:
            raise NotFiberConstant(f"h varies along the fibre inside cell {c}")
    return tuple(got[w] for w in tau)


def pushforward_def(F: SimplicialMap, h: DefFun) -> DefFun:
    """Fibrewise χ-integral F_*h for h whose piece on each source cell factors through F.

    Over an open target cell τ the fibre meets each σ with F(σ)=τ in an open
    cell of dimension dim σ − dim τ on which h is constant, so
    F_*h = Σ_σ (-1)^{dim σ − dim τ} h_σ (the ⌊dχ⌋ and ⌈dχ⌉ fibre integrals agree).
    """
    if h.complex != F.source:
        raise InvalidMap("function is not defined on the map's source")
    S, T = F.source, F.target
    acc = [[Fraction(0)] * len(c) for c in T.cells]
    for i, j in enumerate(F.cell_image):
        phi = _factor_through(F, h, i)
        sg = sign(S.dims[i] - T.dims[j])
        acc[j] = [a + sg * x for a, x in zip(acc[j], phi)]
    return DefFun(T, tuple(tuple(a) for a in acc))


def fubini_fiber_preserving(F: SimplicialMap, h: DefFun, m=FLOOR) -> tuple:
    """(∫_Y F_*h, ∫_X h) for h constant on every fibre of F."""
    if h.complex != F.source:
        raise InvalidMap("function is not defined on the map's source")
    T = F.target
    phi = {}
    for i, j in enumerate(F.cell_image):
        d = _factor_through(F, h, i)
        if phi.setdefault(j, d) != d:
            raise NotFiberConstant(f"h takes different values on the fibre over {T.cells[j]}")
    return integrate(pushforward_def(F, h), m), integrate(h, m)


# subdivision ------------------------------------------------------------------


def subdivide(h: DefFun) -> DefFun:
    """The same function on the barycentric subdivision of its complex."""
    K = h.complex
    B = barycentric_subdivision(K)
    data = []
    for chain in B.cells:
        top = chain[-1]
        pos = {v: k for k, v in enumerate(K.cells[top])}
        d = h.data[top]
        data.append(tuple(sum(d[pos[v]] for v in K.cells[c]) / len(K.cells[c]) for c in chain))
    return DefFun(B, tuple(data))
