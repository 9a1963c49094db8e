import math

import numpy as np
import pytest

from pointed8.cohomology import (
    INT,
    TORUS,
    Cochain,
    NotInGroup,
    TorusValue,
    class_coordinates,
    clear_memo,
    coboundary,
    cohomology_group,
    inflation,
    is_cocycle,
    pullback,
    q8_periodic_complex,
    q8_periodic_h4,
    restriction,
    ring_matmul,
    torus_cohomology,
    torus_h3,
)
from pointed8.groups import GroupMap, NotACocycle, abelian, automorphisms, catalog, catalog_group, cyclic, identity_map, make_module

H3_FACTORS = {"Z2^3": (2,) * 7, "Z4xZ2": (2, 2, 4), "Z8": (8,), "D8": (2, 2, 4), "Q8": (8,)}


def random_cochain(G, n, coeffs, rng, k=12):
    c = Cochain.zero(G, n, coeffs, k)
    size = c.normalized_vector().size
    return Cochain.from_normalized_vector(G, n, coeffs, rng.integers(0, 1 << 20, size), k)


@pytest.mark.parametrize("name", list(H3_FACTORS))
def test_h3_invariant_factors(name):
    assert torus_h3(catalog_group(name)).invariant_factors == H3_FACTORS[name]


@pytest.mark.parametrize("name", ["Z8", "Q8", "D8"])
def test_integral_h4_matches_torus_h3(name):
    G = catalog_group(name)
    assert cohomology_group(G, 4, INT).invariant_factors == H3_FACTORS[name]


def test_h2_z2_with_z4_coefficients():
    Z2 = cyclic(2)
    assert cohomology_group(Z2, 2, make_module([4], Z2)).invariant_factors == (2,)
    assert cohomology_group(Z2, 2, make_module([4], Z2, [[[1]], [[3]]])).invariant_factors == (2,)


def test_small_groups_known_values():
    assert torus_cohomology(cyclic(4), 3).invariant_factors == (4,)
    assert torus_cohomology(abelian([2, 2]), 3).invariant_factors == (2, 2, 2)
    assert torus_cohomology(abelian([2, 2]), 2).invariant_factors == (2,)
    assert cohomology_group(cyclic(4), 2, INT).invariant_factors == (4,)


def test_torus_value_arithmetic():
    a = TorusValue.make(3, 3)
    b = TorusValue.make(5, 3)
    assert (a + b).numerator == 0
    assert TorusValue.make(4, 3).denominator_exp == 1
    assert (-a).as_fraction() == 1 - a.as_fraction()


def test_coboundary_of_zero():
    G = catalog_group("D8")
    assert coboundary(Cochain.zero(G, 2, TORUS)).is_zero()


@pytest.mark.parametrize("name", list(H3_FACTORS))
def test_basis_coordinates_are_unit_vectors(name):
    H = torus_h3(catalog_group(name))
    for i, b in enumerate(H.basis):
        e = [0] * len(H.basis)
        e[i] = 1
        assert H.coordinates(b) == tuple(e)
        assert H.order_of(e) == H.invariant_factors[i]


@pytest.mark.parametrize("name", list(H3_FACTORS))
def test_basis_orders_are_exact(name):
    """m * basis_i is a coboundary exactly when d_i divides m."""
    H = torus_h3(catalog_group(name))
    for i, (b, d) in enumerate(zip(H.basis, H.invariant_factors)):
        assert H.coordinates(b.scale(d)) == (0,) * len(H.basis)
        assert H.coordinates(b.scale(d // 2))[i] == d // 2


@pytest.mark.parametrize("name", list(H3_FACTORS))
def test_group_order_annihilates(name, rng):
    H = torus_h3(catalog_group(name))
    for _ in range(5):
        c = tuple(int(rng.integers(0, d)) for d in H.invariant_factors)
        assert H.coordinates(H.element(c).scale(8)) == (0,) * len(c)


def test_coordinates_reject_non_cocycle(rng):
    G = catalog_group("Z8")
    H = torus_h3(G)
    f = random_cochain(G, 3, TORUS, rng)
    assert not is_cocycle(f)
    with pytest.raises(NotACocycle):
        class_coordinates(H, f)


def test_not_in_group_is_reported():
    assert issubclass(NotInGroup, RuntimeError)


def test_pullback_identity_and_cocycles():
    G = catalog_group("Q8")
    H = torus_h3(G)
    eta = H.element((3,))
    assert pullback(identity_map(G), eta) == eta
    for phi in automorphisms(G)[:5]:
        assert is_cocycle(pullback(phi, eta))


def test_aut_z8_and_q8_act_trivially():
    for name in ("Z8", "Q8"):
        G = catalog_group(name)
        H = torus_h3(G)
        for phi in automorphisms(G):
            assert H.coordinates(pullback(phi, H.basis[0])) == (1,)


def test_inflation(rng):
    D8 = catalog_group("D8")
    pi = GroupMap(D8, cyclic(2), np.array([0, 0, 0, 0, 1, 1, 1, 1]))
    K = pi.target
    HK = torus_cohomology(K, 3)
    assert inflation(pi, Cochain.zero(K, 3, TORUS)).is_zero()
    kappa = HK.basis[0]
    inf = inflation(pi, kappa)
    assert is_cocycle(inf)
    H = torus_h3(D8)
    lam = random_cochain(K, 2, TORUS, rng)
    assert H.coordinates(inflation(pi, kappa + coboundary(lam))) == H.coordinates(inf)
    with pytest.raises(ValueError):
        inflation(GroupMap(D8, cyclic(2), np.zeros(8, dtype=np.int64)), kappa)


def test_restrictions(rng):
    Q8 = catalog_group("Q8")
    H = torus_h3(Q8)
    S, r = restriction(Q8, (0,), H.basis[0])
    assert r.is_zero()
    S, r = restriction(Q8, (0, 1, 2, 3), H.basis[0])
    HS = torus_cohomology(S, 3)
    assert HS.order_of(HS.coordinates(r)) == 4
    lam = random_cochain(Q8, 2, TORUS, rng)
    S, r = restriction(Q8, (0, 1, 2, 3), coboundary(lam))
    assert HS.coordinates(r) == (0,)


def test_q8_periodic_resolution():
    assert q8_periodic_h4() == [8]
    Q, d = q8_periodic_complex()
    for i in (1, 2, 3):
        prod = ring_matmul(Q, d[i + 1], d[i])
        assert all(not any(v for v in entry.values()) for row in prod for entry in row)
    assert q8_periodic_h4() == list(cohomology_group(catalog_group("Q8"), 4, INT).invariant_factors)


def test_stabilization_small_groups():
    for G in (cyclic(4), abelian([2, 2]), cyclic(2)):
        for n in (2, 3):
            a = torus_cohomology(G, n, 10, stabilize=False)
            b = torus_cohomology(G, n, 11, stabilize=False)
            assert a.invariant_factors == b.invariant_factors


def test_cache_round_trip(tmp_path):
    G = catalog_group("D8")
    H = torus_cohomology(G, 3)
    clear_memo()
    first = torus_cohomology(G, 3, cache_dir=str(tmp_path))
    files = list(tmp_path.glob("*.json"))
    assert len(files) == 1
    clear_memo()
    again = torus_cohomology(G, 3, cache_dir=str(tmp_path))
    assert again.invariant_factors == first.invariant_factors
    for b in first.basis:
        assert again.coordinates(b) == first.coordinates(b)
    assert math.prod(H.invariant_factors) == again.size
