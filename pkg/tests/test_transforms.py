import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from defeuler.cf import CFun
from defeuler.complex import circle, closed_manifold_dim, convex_polygon, grid_complex, path_complex, sphere_boundary
from defeuler.defint import AVG, CEIL, FLOOR, DefFun
from defeuler.errors import NotConstructibleIntegrand
from defeuler.fixtures import manifold_complexes, random_cfun, random_convex_polygon, random_deffun, torus_h
from defeuler.transforms import (
    WIDTH,
    KernelSpec,
    avg_linearity_check,
    dual,
    dual_involution_check,
    kernel_integrand,
    kernel_transform,
    link,
    polygon_width,
)
from oracles import small_ball_dual_1d, small_ball_link_1d

F = Fraction
seeds = st.integers(0, 2**32 - 1)
KINDS = ["continuous", "cellwise", "general"]

SQUARE = convex_polygon([(0, 0), (1, 0), (1, 1), (0, 1)])
ONE = CFun.indicator(SQUARE)


def interval_indicator():
    return DefFun.from_cfun(CFun.indicator(path_complex([0, 1])))


# duality ----------------------------------------------------------------------


def test_dual_of_closed_interval():
    d = dual(interval_indicator())
    assert d.data == ((0,), (0,), (-1, -1))
    assert dual(d) == interval_indicator()


def test_dual_on_circle_and_torus():
    h = DefFun.from_vertex_values(circle(4), [3, 2, 1, 2])
    assert dual(h) == -h
    t = torus_h().function
    assert dual(t) == t


@given(seeds)
def test_involution_on_cf(seed):
    rng = random.Random(seed)
    assert dual_involution_check(DefFun.from_cfun(random_cfun(rng, grid_complex(4, 4))))


@given(seeds, st.sampled_from(KINDS))
def test_involution_on_deffun(seed, kind):
    rng = random.Random(seed)
    K = rng.choice(manifold_complexes() + [grid_complex(3, 3), path_complex([0, 1, 3])])
    assert dual_involution_check(random_deffun(rng, K, kind))


@given(seeds)
def test_manifold_duality_sign(seed):
    rng = random.Random(seed)
    K = rng.choice(manifold_complexes())
    n = closed_manifold_dim(K)
    h = random_deffun(rng, K, "continuous")
    assert dual(h) == (h if n % 2 == 0 else -h)
    # link factor is 1 − (−1)^n
    assert link(h) == (h - h if n % 2 == 0 else h + h)


def test_dual_is_linear():
    rng = random.Random(2)
    K = sphere_boundary()
    f, g = random_deffun(rng, K, "general"), random_deffun(rng, K, "general")
    assert dual(f + g) == dual(f) + dual(g)


# link ---------------------------------------------------------------------------


def test_link_examples():
    h = DefFun.from_vertex_values(circle(4), [3, 2, 1, 2])
    assert link(h) == h + h
    t = torus_h().function
    assert set(link(t).data) == {(0,)} | {(0, 0)} | {(0, 0, 0)}
    # closed interval: the small sphere has one point at an endpoint, two inside
    assert link(interval_indicator()).data == ((1,), (1,), (2, 2))


def test_link_of_interior_vertex_indicator():
    K = path_complex([0, 1, 2])
    h = DefFun.from_cfun(CFun.indicator(K, [(1,)]))
    assert link(h).data[K.index[(1,)]] == (0,)


# small-ball oracle on 1-D complexes ------------------------------------------------


def one_dim_fixture(rng):
    return rng.choice([path_complex([0, 1, 3, 4]), circle(3), circle(5)])


def dual_at(d, cell, t):
    vals = d.data[d.complex.index[cell]]
    return vals[0] if len(cell) == 1 else vals[0] + (vals[1] - vals[0]) * t


@given(seeds, st.sampled_from(KINDS))
def test_dual_matches_small_balls(seed, kind):
    rng = random.Random(seed)
    h = random_deffun(rng, one_dim_fixture(rng), kind)
    D = dual(h)
    for cell in h.complex.cells:
        t = F(1, 3) if len(cell) == 2 else None
        floor = small_ball_dual_1d(h, cell, t, "floor")
        ceil = small_ball_dual_1d(h, cell, t, "ceil")
        assert floor == ceil == dual_at(D, cell, t)


@given(seeds, st.sampled_from(KINDS))
def test_link_matches_small_spheres(seed, kind):
    rng = random.Random(seed)
    h = random_deffun(rng, one_dim_fixture(rng), kind)
    L = link(h)
    for cell in h.complex.cells:
        t = F(2, 5) if len(cell) == 2 else None
        assert small_ball_link_1d(h, cell, t) == dual_at(L, cell, t)


# kernel transforms ------------------------------------------------------------------


@pytest.mark.parametrize("xi,width", [((1, 0), 1), ((1, 1), 2), ((0, 3), 3), ((2, -1), 3)])
def test_square_width(xi, width):
    assert kernel_transform(ONE, [xi], WIDTH) == [width]


@pytest.mark.parametrize("xi", [(1, 0), (1, 1), (F(1, 2), -3)])
def test_square_centroid(xi):
    (avg,) = kernel_transform(ONE, [xi], AVG)
    vals = [KernelSpec(xi)(p) for p in SQUARE.coords]
    assert avg == (max(vals) + min(vals)) / 2


def test_floor_ceil_give_extremes():
    assert kernel_transform(ONE, [(1, 1)], FLOOR) == [2]
    assert kernel_transform(ONE, [(1, 1)], CEIL) == [0]


def test_kernel_rejects_non_constructible():
    with pytest.raises(NotConstructibleIntegrand):
        kernel_integrand(DefFun.from_function(SQUARE, lambda p: p[0]), (1, 0))
    with pytest.raises(ValueError):
        kernel_integrand(ONE, (1, 0, 0))


def test_kernel_spec():
    k = KernelSpec((1, F(1, 2)))
    assert k((2, 4)) == 4
    assert kernel_integrand(ONE, k) == kernel_integrand(ONE, (1, F(1, 2)))


@given(seeds)
def test_width_of_convex_polygons(seed):
    rng = random.Random(seed)
    P = random_convex_polygon(rng)
    K = convex_polygon(P)
    h = CFun.indicator(K)
    xis = [(rng.randint(-3, 3), rng.randint(-3, 3)) for _ in range(3)]
    assert kernel_transform(h, xis, WIDTH) == [polygon_width(P, xi) for xi in xis]


def small_square():
    K = grid_complex(2, 2, (0, 1), (0, 1))
    inner = [c for c in K.cells if len(c) == 3 and all(max(K.coords[v]) <= F(1, 2) for v in c)]
    return K, CFun.indicator(K), CFun.indicator(K, inner)


def test_avg_linearity_example():
    K, f, g = small_square()
    assert avg_linearity_check(f, g, 1, -1, [(1, 0), (1, 2)])


def test_floor_positive_linearity():
    K, f, g = small_square()
    assert avg_linearity_check(f, g, 2, 3, [(1, 0), (-1, 2)], FLOOR)


def test_floor_nonlinearity_witness():
    K, f, g = small_square()
    assert not avg_linearity_check(f, g, -1, 0, [(1, 0)], FLOOR)


@given(seeds, st.integers(-4, 4), st.integers(-4, 4))
def test_avg_linearity(seed, a, b):
    rng = random.Random(seed)
    K = grid_complex(3, 3)
    f, g = random_cfun(rng, K), random_cfun(rng, K)
    xis = [(rng.randint(-3, 3), rng.randint(-3, 3)) for _ in range(2)]
    assert avg_linearity_check(f, g, a, b, xis)
