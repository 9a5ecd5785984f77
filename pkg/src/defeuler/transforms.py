"""Duality, link, and inner-product kernel transforms."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cf import CFun
from .complex import as_fraction
from .defint import AVG, CEIL, FLOOR, DefFun, Measure, integrate
from .errors import NotConstructibleIntegrand

WIDTH = "width"


@dataclass(frozen=True)
class KernelSpec:
    """The inner-product kernel x ↦ ⟨x, ξ⟩ for a fixed rational direction ξ."""

    xi: tuple

    def __post_init__(self):
        object.__setattr__(self, "xi", tuple(as_fraction(x) for x in self.xi))

    def __call__(self, x) -> Fraction:
        return sum((as_fraction(a) * b for a, b in zip(x, self.xi)), Fraction(0))


def dual(h: DefFun) -> DefFun:
    """Dh on each open cell τ: Σ over cells σ ⊇ τ of (-1)^dim σ times σ's piece restricted to τ."""
    K = h.complex
    out = []
    for i, tau in enumerate(K.cells):
        acc = [K.signs[i] * x for x in h.data[i]]
        for j in K.cofaces[i]:
            sigma = K.cells[j]
            pos = {v: k for k, v in enumerate(sigma)}
            s = K.signs[j]
            d = h.data[j]
            for k, v in enumerate(tau):
                acc[k] += s * d[pos[v]]
        out.append(tuple(acc))
    return DefFun(K, tuple(out))


def dual_involution_check(h: DefFun) -> bool:
    return dual(dual(h)) == h


def link(h: DefFun) -> DefFun:
    """Λh = h − Dh."""
    return h - dual(h)


def _as_constructible(h) -> DefFun:
    if isinstance(h, CFun):
        return DefFun.from_cfun(h)
    if not h.is_cellwise_constant:
        raise NotConstructibleIntegrand("kernel transforms take cell-wise constant integrands only")
    return h


def kernel_integrand(h, xi) -> DefFun:
    """The cell-wise affine function x ↦ h(x)·⟨x, ξ⟩."""
    h = _as_constructible(h)
    K = h.complex
    kernel = xi if isinstance(xi, KernelSpec) else KernelSpec(xi)
    if len(kernel.xi) != K.ambient_dim:
        raise ValueError(f"ξ has length {len(kernel.xi)}, complex lives in R^{K.ambient_dim}")
    dots = [kernel(p) for p in K.coords]
    return DefFun(K, tuple(tuple(val[0] * dots[v] for v in c) for val, c in zip(h.data, K.cells)))


def kernel_transform(h, xis, mode="avg") -> list:
    """∫ h(x)⟨x,ξ⟩ for each ξ, with measure FLOOR / CEIL / AVG, or WIDTH = FLOOR − CEIL."""
    out = []
    for xi in xis:
        g = kernel_integrand(h, xi)
        if mode == WIDTH:
            out.append(integrate(g, FLOOR) - integrate(g, CEIL))
        else:
            out.append(integrate(g, Measure.parse(mode)))
    return out


def avg_linearity_check(f, g, a: int, b: int, xis, m=AVG) -> bool:
    """Whether ∫(af+bg)K = a∫fK + b∫gK holds at every ξ for the given measure."""
    f, g = _as_constructible(f), _as_constructible(g)
    combo = DefFun(f.complex, tuple(tuple(a * x + b * y for x, y in zip(p, q)) for p, q in zip(f.data, g.data)))
    lhs = kernel_transform(combo, xis, m)
    rf = kernel_transform(f, xis, m)
    rg = kernel_transform(g, xis, m)
    return all(l == a * x + b * y for l, x, y in zip(lhs, rf, rg))


def polygon_width(points, xi) -> Fraction:
    """max − min of ⟨·, ξ⟩ over a vertex list."""
    vals = [sum(as_fraction(a) * as_fraction(b) for a, b in zip(p, xi)) for p in points]
    return max(vals) - min(vals)
