import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from defeuler.cf import integrate_cf
from defeuler.complex import circle, closed_manifold_dim, grid_complex, path_complex, sphere_boundary
from defeuler.defint import CEIL, FLOOR, DefFun, integrate
from defeuler.errors import NotContinuous, NotManifoldFixture, TieError
from defeuler.fixtures import interval_x, manifold_complexes, random_cfun, random_deffun, sphere_h, torus_h
from defeuler.morse import (
    coindex,
    critical_vertices,
    index,
    integrate_field,
    integrate_via_index,
    lower_link_chi,
    morse_index,
    parity_check,
    weighted_coindex,
)

F = Fraction
seeds = st.integers(0, 2**32 - 1)
X = interval_x().function


def test_coindex_of_identity():
    K = X.complex
    field = coindex(X)
    assert field((1,)) == 1 and field((0,)) == 0 and field((0, 1)) == 0
    assert index(X)((0,)) == 1 and index(X)((1,)) == 0
    assert K.num_vertices == 2


@pytest.mark.parametrize("n", [3, 4, 7])
def test_coindex_of_constant_on_circle(n):
    h = DefFun.constant(circle(n), F(5, 2))
    assert set(coindex(h).values) == {-1}


def test_coindex_needs_continuity():
    h = DefFun.from_cell_values(path_complex([0, 1]), [0, 1, 2])
    with pytest.raises(NotContinuous):
        coindex(h)
    with pytest.raises(NotContinuous):
        integrate_via_index(h)


@given(seeds)
def test_coindex_on_constructible_integrates_like_cf(seed):
    # the weighted field of a CF integrand has the same χ-integral as the CF itself
    rng = random.Random(seed)
    K = grid_complex(3, 3)
    h = random_cfun(rng, K)
    assert integrate_field(K, weighted_coindex(DefFun.from_cfun(h))) == integrate_cf(h)


def test_via_index_examples():
    assert integrate_via_index(X) == 1
    assert integrate_via_index(X, "index") == 0
    with pytest.raises(ValueError):
        integrate_via_index(X, "both")


@pytest.mark.parametrize("a,b", [(1, 7), (-3, 2), (0, F(1, 2))])
def test_sphere_height(a, b):
    h = sphere_h(a, b).function
    assert integrate_via_index(h) == integrate(h) == a + b


def test_torus_height():
    h = torus_h().function
    crit = {v: morse_index(h, v) for v, _ in critical_vertices(h)}
    assert sorted(crit.values()) == [0, 1, 1, 2]
    vals = h.vertex_values
    signs = {0: 1, 1: -1, 2: 1}
    expected = sum(signs[mu] * vals[v] for v, mu in crit.items())
    assert expected == F(4, 7)
    assert integrate_via_index(h) == integrate(h) == expected


@given(seeds)
def test_via_index_matches_closed_form(seed):
    rng = random.Random(seed)
    K = rng.choice(manifold_complexes() + [grid_complex(6, 5)])
    h = random_deffun(rng, K, "continuous")
    assert integrate_via_index(h, "coindex") == integrate(h, FLOOR)
    assert integrate_via_index(h, "index") == integrate(h, CEIL)


@given(seeds)
def test_weighted_coindex_any_data(seed):
    rng = random.Random(seed)
    h = random_deffun(rng, grid_complex(3, 3), "general")
    assert integrate_field(h.complex, weighted_coindex(h)) == integrate(h)


# critical vertices ---------------------------------------------------------------


def test_circle_extrema():
    h = DefFun.from_vertex_values(circle(4), [0, 1, 3, 2])
    assert critical_vertices(h) == [(0, 0), (2, 2)]


def test_monotone_path_has_no_interior_critical():
    h = DefFun.from_function(path_complex([0, 1, 2, 3, 5]), lambda p: 2 * p[0])
    crit = [v for v, _ in critical_vertices(h)]
    assert crit == [0]  # only the bottom endpoint, whose lower link is empty
    assert all(lower_link_chi(h, v) == 1 for v in (1, 2, 3, 4))


def test_sphere_two_critical():
    assert len(critical_vertices(sphere_h().function)) == 2


def test_ties_rejected():
    with pytest.raises(TieError):
        critical_vertices(DefFun.from_vertex_values(circle(4), [0, 1, 1, 2]))


@given(seeds)
def test_corollary_weights_on_manifolds(seed):
    # Σ over critical vertices of (-1)^(n-μ) h(v) reproduces the floor integral
    rng = random.Random(seed)
    K = rng.choice(manifold_complexes())
    n = closed_manifold_dim(K)
    vals = rng.sample(range(-50, 50), K.num_vertices)
    h = DefFun.from_vertex_values(K, vals)
    crit = [(v, morse_index(h, v)) for v, _ in critical_vertices(h)]
    if any(mu is None for _, mu in crit):
        return  # degenerate saddle: no smooth index to compare with
    total = sum((-1) ** (n - mu) * vals[v] for v, mu in crit)
    assert total == integrate(h)
    field = coindex(h)
    for v, mu in crit:
        assert field((v,)) == (-1) ** (n - mu)


# parity on closed manifolds ----------------------------------------------------------


def test_parity_examples():
    assert parity_check(DefFun.from_vertex_values(circle(4), [3, 2, 1, 2])) == (-2, -2)
    c, f = parity_check(torus_h().function)
    assert c == f
    q = F(3, 4)
    assert parity_check(DefFun.constant(sphere_boundary(), q)) == (2 * q, 2 * q)


@given(seeds)
def test_parity_on_manifolds(seed):
    rng = random.Random(seed)
    h = random_deffun(rng, rng.choice(manifold_complexes()), "continuous")
    a, b = parity_check(h)
    assert a == b


def test_parity_needs_manifold():
    with pytest.raises(NotManifoldFixture):
        parity_check(DefFun.constant(grid_complex(1, 1), 1))
