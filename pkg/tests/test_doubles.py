import numpy as np
import pytest

from pointed8.cohomology import TORUS, Cochain, coboundary, pullback, torus_h3
from pointed8.doubles import (
    AssociativityFailure,
    DoubleAlgebra,
    build_double,
    check_associativity,
    is_commutative,
    theta_table,
)
from pointed8.groups import NotACocycle, automorphisms, catalog_group


def zero(G):
    return Cochain.zero(G, 3, TORUS)


def test_untwisted_doubles():
    for name, comm in (("Z2^3", True), ("Z8", True), ("D8", False), ("Q8", False)):
        G = catalog_group(name)
        D = build_double(G, zero(G))
        assert is_commutative(D) is comm
        assert D.dimension == 64


def test_theta_normalized():
    G = catalog_group("D8")
    D = build_double(G, torus_h3(G).element((1, 1, 3)))
    assert not D.theta[:, 0, :].any() and not D.theta[:, :, 0].any()


def test_product_rule():
    G = catalog_group("Q8")
    D = build_double(G, torus_h3(G).basis[0])
    assert D.product((2, 4), (2, 0)) is None          # 4 2 4^-1 != 2
    coef, (g, xy) = D.product((3, 4), (2, 4))         # j i j^-1 = -i
    assert g == 3 and xy == G.table[4, 4]


def test_non_cocycle_rejected(rng):
    G = catalog_group("Z8")
    bad = Cochain.from_normalized_vector(G, 3, TORUS, rng.integers(0, 4096, 343))
    with pytest.raises(NotACocycle):
        build_double(G, bad)
    with pytest.raises(AssociativityFailure):
        check_associativity(DoubleAlgebra(G, bad, theta_table(G, bad)))


def test_z2_cubed_commutative_orbits(pipeline):
    t = pipeline.census.tables[0]
    verdicts = [is_commutative(build_double(t.group, t.h3.element(o.canonical))) for o in t.orbits]
    assert sum(verdicts) == 5


@pytest.mark.parametrize("name", ["Z2^3", "Z4xZ2", "D8"])
def test_verdict_invariance(name, rng):
    G = catalog_group(name)
    H = torus_h3(G)
    auts = automorphisms(G)
    for _ in range(6):
        c = tuple(int(rng.integers(0, d)) for d in H.invariant_factors)
        eta = H.element(c)
        v = is_commutative(build_double(G, eta))
        lam = Cochain.from_normalized_vector(G, 2, TORUS, rng.integers(0, 4096, 49))
        assert is_commutative(build_double(G, eta + coboundary(lam))) is v
        phi = auts[int(rng.integers(len(auts)))]
        assert is_commutative(build_double(G, pullback(phi, eta))) is v


def test_census(pipeline):
    d = pipeline.doubles
    assert d.counts == (18, 20)
    P, census = pipeline.partition, pipeline.census
    for i, members in enumerate(P.classes):
        groups = {census.classes[m].group_name for m in members}
        if groups & {"Z8", "Z4xZ2"}:
            assert i in d.commutative
        if groups & {"D8", "Q8"}:
            assert i in d.noncommutative


def test_inverse_convention_gives_same_verdicts(pipeline):
    """Twisting by -eta (inverse placement of the cocycle) changes no verdict."""
    for t in pipeline.census.tables:
        for o in t.orbits:
            eta = t.h3.element(o.canonical)
            assert is_commutative(build_double(t.group, -eta)) == is_commutative(build_double(t.group, eta))
