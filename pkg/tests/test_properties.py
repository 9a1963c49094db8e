import numpy as np
from hypothesis import given, settings, strategies as st

from pointed8.cohomology import coboundary, pullback, torus_h3
from pointed8.doubles import build_double, check_associativity, is_commutative
from pointed8.groups import automorphisms, catalog

import samplers

seeds = st.integers(0, 2**32 - 1)


@settings(max_examples=60)
@given(seeds)
def test_delta_squared(seed):
    assert samplers.delta_squared_zero(np.random.default_rng(seed))


@settings(max_examples=40)
@given(seeds)
def test_pullback_functorial(seed):
    assert samplers.functoriality(np.random.default_rng(seed))


@settings(max_examples=40)
@given(seeds)
def test_coordinates_ignore_coboundaries(seed):
    assert samplers.coboundary_invariance(np.random.default_rng(seed))


@settings(max_examples=30)
@given(st.integers(0, 4), seeds)
def test_aut_action_is_linear(gi, seed):
    rng = np.random.default_rng(seed)
    G = catalog()[gi]
    H3 = torus_h3(G)
    phi = automorphisms(G)[int(rng.integers(len(automorphisms(G))))]
    (a, x), (b, y) = samplers.random_class(H3, rng), samplers.random_class(H3, rng)
    assert H3.coordinates(pullback(phi, x + y)) == H3.add(H3.coordinates(pullback(phi, x)),
                                                           H3.coordinates(pullback(phi, y)))


@settings(max_examples=25)
@given(seeds)
def test_fhat_shift_invariance(pipeline, seed):
    assert samplers.fhat_shift(pipeline.census, np.random.default_rng(seed))


@settings(max_examples=25)
@given(seeds)
def test_eps_shift_invariance(pipeline, seed):
    assert samplers.eps_shift(pipeline.census, np.random.default_rng(seed))


@settings(max_examples=25)
@given(st.integers(0, 4), seeds)
def test_double_associative_and_class_invariant(gi, seed):
    rng = np.random.default_rng(seed)
    G = catalog()[gi]
    H3 = torus_h3(G)
    coords, eta = samplers.random_class(H3, rng)
    D = build_double(G, eta, verify=False)
    check_associativity(D)
    assert is_commutative(D) == is_commutative(build_double(G, H3.element(coords)))
