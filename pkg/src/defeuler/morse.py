"""Combinatorial co-index / index fields and Morse-sum evaluation of the integrals.

On an open simplex σ where h is affine, the co-index contributes
(-1)^dim σ on the closed face spanned by the vertices where h attains its
minimum over σ̄; the index does the same with the maximum.  Summing these
contributions over all cells gives a constructible field, and integrating h
against that field with ordinary dχ reproduces ∫h⌊dχ⌋ (resp. ⌈dχ⌉).
"""

from __future__ import annotations

from fractions import Fraction

from .cf import CFun
from .complex import closed_manifold_dim, sign
from .defint import CEIL, FLOOR, DefFun, integrate
from .errors import NotContinuous, NotManifoldFixture, TieError

IndexField = CFun


def _extreme_face(cell, data, pick):
    target = pick(data)
    return tuple(v for v, x in zip(cell, data) if x == target)


def _field(h: DefFun, pick) -> IndexField:
    if not h.is_continuous:
        raise NotContinuous("index fields need a continuous integrand")
    K = h.complex
    out = [0] * len(K.cells)
    for i, (c, d) in enumerate(zip(K.cells, h.data)):
        face = _extreme_face(c, d, pick)
        s = K.signs[i]
        for f in K.closure(face):
            out[K.index[f]] += s
    return CFun(K, tuple(out))


def coindex(h: DefFun) -> IndexField:
    """Index^*h: per-simplex (-1)^dim σ on the closed min face, accumulated."""
    return _field(h, min)


def index(h: DefFun) -> IndexField:
    """Index_*h = Index^*(-h): the same with max faces."""
    return _field(h, max)


def weighted_coindex(h: DefFun) -> tuple:
    """Per-cell rational field Σ_σ (-1)^dim σ · inf_σ h · 1_{F_min(σ)}, for any cell-wise affine h.

    Its plain χ-integral is ∫h⌊dχ⌋ with or without continuity.
    """
    K = h.complex
    out = [Fraction(0)] * len(K.cells)
    for i, (c, d) in enumerate(zip(K.cells, h.data)):
        lo = min(d)
        face = _extreme_face(c, d, min)
        for f in K.closure(face):
            out[K.index[f]] += K.signs[i] * lo
    return tuple(out)


def integrate_field(K, field) -> Fraction:
    return Fraction(sum(s * x for s, x in zip(K.signs, field)))


def integrate_via_index(h: DefFun, which: str = "coindex") -> Fraction:
    """∫ h · Index h dχ: build the field, then integrate h against it cell by cell.

    Each cell in the field's support lies in an extreme face of some simplex, so
    h is constant there and the product is constructible.
    """
    if which not in ("coindex", "index"):
        raise ValueError("which must be 'coindex' or 'index'")
    field = coindex(h) if which == "coindex" else index(h)
    K = h.complex
    total = Fraction(0)
    for i, w in enumerate(field.values):
        if not w:
            continue
        d = h.data[i]
        if min(d) != max(d):  # cannot happen for continuous h
            raise NotContinuous(f"h is not constant on {K.cells[i]} in the index support")
        total += w * K.signs[i] * d[0]
    return total


def lower_link_chi(h: DefFun, v: int) -> int:
    K = h.complex
    vals = h.vertex_values
    return sum(sign(len(t) - 1) for t in K.link((v,)) if all(vals[w] < vals[v] for w in t))


def critical_vertices(h: DefFun) -> list:
    """[(vertex, χ(lower link))] for vertices whose lower link has χ ≠ 1."""
    if not h.is_continuous:
        raise NotContinuous("critical points need a continuous integrand")
    K = h.complex
    vals = h.vertex_values
    for v in range(K.num_vertices):
        star = {v} | set(K.vertex_neighbors[v])
        seen = [vals[w] for w in star]
        if len(set(seen)) != len(seen):
            raise TieError(f"tied values in the closed star of vertex {v}")
    out = []
    for v in range(K.num_vertices):
        chi = lower_link_chi(h, v)
        if chi != 1:
            out.append((v, chi))
    return out


def morse_index(h: DefFun, v: int):
    """Smooth-style index μ of a critical vertex on a closed manifold fixture (None if regular)."""
    K = h.complex
    n = closed_manifold_dim(K)
    if n is None:
        raise NotManifoldFixture("complex is not a closed 1- or 2-manifold")
    vals = h.vertex_values
    lk = K.link((v,))
    lower = [t for t in lk if all(vals[w] < vals[v] for w in t)]
    chi = sum(sign(len(t) - 1) for t in lower)
    if not lower:
        return 0
    if len(lower) == len(lk):
        return n
    if chi == 1:
        return None
    return 1 if n == 2 and chi == 2 else None


def parity_check(h: DefFun) -> tuple:
    """(∫h⌈dχ⌉, (-1)^n ∫h⌊dχ⌋) on a closed n-manifold; equal for continuous h."""
    n = closed_manifold_dim(h.complex)
    if n is None:
        raise NotManifoldFixture("complex is not a closed 1- or 2-manifold")
    if not h.is_continuous:
        raise NotContinuous("parity relation is for continuous integrands")
    return integrate(h, CEIL), sign(n) * integrate(h, FLOOR)
