"""Euler-characteristic integration of constructible and piecewise-linear functions."""

from .cf import CFun, SimplicialMap, convolve_1d, integrate_cf, integrate_cf_levelset, minkowski_indicator, pushforward
from .complex import (
    SimplicialComplex,
    build_complex,
    circle,
    euler_characteristic,
    grid_complex,
    path_complex,
    product_complex,
    sphere_boundary,
    torus,
)
from .defint import (
    AVG,
    CEIL,
    FLOOR,
    DefFun,
    Measure,
    chi_excursion,
    conjugate,
    epsilon_formula,
    fubini_fiber_preserving,
    integrate,
    integrate_levelset,
    pushforward_to_line,
    riemann_oracle,
    scale,
)
from .morse import coindex, critical_vertices, index, integrate_via_index, parity_check
from .planar import PlanarWindow, betti0_excursion, integrate_betti0
from .transforms import KernelSpec, avg_linearity_check, dual, dual_involution_check, kernel_transform, link

__version__ = "0.1.0"
