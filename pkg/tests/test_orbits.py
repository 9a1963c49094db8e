import numpy as np
import pytest

from pointed8.cohomology import pullback
from pointed8.groups import automorphisms, catalog_group
from pointed8.orbits import aut_action, equivalence_census, orbit_table

COUNTS = {"Z2^3": 10, "Z4xZ2": 9, "Z8": 8, "D8": 12, "Q8": 8}
SIZES = {
    "Z2^3": [1, 1, 7, 7, 7, 7, 21, 21, 28, 28],
    "Z4xZ2": [1, 1, 1, 1, 2, 2, 2, 2, 4],
    "Z8": [1] * 8,
    "D8": [1] * 8 + [2] * 4,
    "Q8": [1] * 8,
}


@pytest.fixture(scope="module")
def tables(pipeline):
    return {t.group.name: t for t in pipeline.census.tables}


@pytest.mark.parametrize("name", list(COUNTS))
def test_orbit_counts_and_sizes(tables, name):
    t = tables[name]
    assert len(t.orbits) == COUNTS[name]
    assert sorted(t.sizes) == SIZES[name]
    assert sum(t.sizes) == t.h3.size
    assert all(t.aut_order % s == 0 for s in t.sizes)


@pytest.mark.parametrize("name", list(COUNTS))
def test_orbits_closed_and_canonical(tables, name):
    t = tables[name]
    act = aut_action(t.group)
    index = {c: i for i, c in enumerate(act.space)}
    for o in t.orbits:
        assert o.canonical == min(o.members)
        ids = {index[c] for c in o.members}
        for perm in act.permutations:
            assert {int(perm[i]) for i in ids} == ids
        assert len({t.h3.order_of(c) for c in o.members}) == 1
    assert t.orbits[0].members == ((0,) * len(t.h3.invariant_factors),)


def test_identity_permutation():
    G = catalog_group("D8")
    act = aut_action(G)
    ident = [i for i, phi in enumerate(act.automorphisms) if np.array_equal(phi.images, np.arange(8))]
    assert np.array_equal(act.permutations[ident[0]], np.arange(len(act.space)))


@pytest.mark.parametrize("name", ["D8", "Q8"])
def test_inner_automorphisms_act_trivially(name):
    G = catalog_group(name)
    t = orbit_table(G, fingerprints=False)
    H = t.h3
    for g in range(G.order):
        inner = [phi for phi in automorphisms(G) if all(phi.images[x] == G.conj(g, x) for x in range(8))][0]
        for b in H.basis:
            assert H.coordinates(pullback(inner, b)) == H.coordinates(b)


def test_census(pipeline):
    c = pipeline.census
    assert len(c) == 47
    assert sum(1 for x in c.classes if not any(x.canonical)) == 5
    again = equivalence_census(fingerprints=False)
    assert [x.canonical for x in again.classes] == [x.canonical for x in c.classes]


def test_fingerprints_constant_on_orbits(tables):
    from pointed8.orbits import restriction_signature

    t = tables["Z4xZ2"]
    for o in t.orbits:
        sigs = {restriction_signature(t.group, t.h3.element(m)) for m in o.members}
        assert sigs == {o.fingerprint[2]}
