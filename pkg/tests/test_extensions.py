import numpy as np
import pytest

from pointed8.cohomology import TORUS, Cochain, coboundary, cohomology_group
from pointed8.extensions import (
    build_dual_group,
    build_extension,
    is_right_cocycle,
    left_to_right_cocycle,
    normal_abelian_subgroups,
)
from pointed8.groups import (
    CATALOG_NAMES,
    NotACocycle,
    abelian,
    catalog,
    catalog_group,
    cyclic,
    dual_module,
    find_isomorphism,
    identify,
    make_module,
)

Z2 = cyclic(2)


def name_of(G):
    return CATALOG_NAMES[identify(G)[0]]


def test_trivial_cocycle_gives_direct_product():
    A = make_module([4], Z2)
    ext = build_extension(Z2, A, Cochain.zero(Z2, 2, A))
    assert name_of(ext.group) == "Z4xZ2"
    assert ext.projection.is_homomorphism()


@pytest.mark.parametrize("action,expected", [(None, "Z8"), ([[[1]], [[3]]], "Q8")])
def test_nontrivial_z2_by_z4(action, expected):
    A = make_module([4], Z2, action)
    H = cohomology_group(Z2, 2, A)
    assert H.invariant_factors == (2,)
    assert name_of(build_extension(Z2, A, H.element((1,))).group) == expected


def test_split_inversion_is_d8():
    A = make_module([4], Z2, [[[1]], [[3]]])
    assert name_of(build_extension(Z2, A, Cochain.zero(Z2, 2, A)).group) == "D8"


def test_non_cocycle_rejected():
    A = make_module([4], Z2)
    vals = np.zeros((2, 2, 1), dtype=np.int64)
    K4 = cyclic(4)
    A4 = make_module([2], K4)
    bad = np.zeros((4, 4, 1), dtype=np.int64)
    bad[1, 1, 0] = 1
    with pytest.raises(NotACocycle):
        build_extension(K4, A4, Cochain(K4, 2, A4, bad))
    assert build_extension(Z2, A, Cochain(Z2, 2, A, vals)).group.order == 8


def test_dual_group_cases():
    A = make_module([2, 2], Z2)
    D = dual_module(A)
    H = cohomology_group(Z2, 2, D)
    kinds = sorted(name_of(build_dual_group(Z2, D, left_to_right_cocycle(H.element(c))).group) for c in H.elements())
    assert kinds == ["Z2^3", "Z4xZ2", "Z4xZ2", "Z4xZ2"]
    one = cyclic(1)
    for facs in ((8,), (2, 4)):
        M = make_module(facs, one)
        g = build_dual_group(one, M, Cochain.zero(one, 2, M)).group
        assert find_isomorphism(g, abelian(facs)) is not None


def test_left_to_right_preserves_cocycles():
    for K in (Z2, cyclic(4), abelian([2, 2])):
        from pointed8.morita import module_structures

        for facs in ((2,), (4,), (2, 2)):
            for A in module_structures(K, facs):
                D = dual_module(A)
                H = cohomology_group(K, 2, D)
                for c in list(H.elements())[:4]:
                    assert is_right_cocycle(left_to_right_cocycle(H.element(c)), D)


def test_normal_abelian_subgroups_q8_d8():
    Q8, D8 = catalog_group("Q8"), catalog_group("D8")
    assert [n.elements for n in normal_abelian_subgroups(Q8)] == [(0,), (0, 1), (0, 1, 2, 3), (0, 1, 4, 5), (0, 1, 6, 7)]
    # a^2, <a>, <a^2, b>, <a^2, ba> (index i<4 is a^i, 4+r is b a^r)
    assert [n.elements for n in normal_abelian_subgroups(D8)] == [(0,), (0, 2), (0, 1, 2, 3), (0, 2, 4, 6), (0, 2, 5, 7)]
    assert len(normal_abelian_subgroups(catalog_group("Z2^3"))) == 16


def test_extension_round_trip():
    """Rebuilding H from (K, A, F) of a normal abelian subgroup gives H back."""
    for H in catalog():
        for nas in normal_abelian_subgroups(H):
            ext = build_extension(nas.quotient, nas.module, nas.extension_cocycle())
            phi = nas.isomorphism_from(ext)
            assert phi.is_bijective()
            assert np.array_equal(np.mod(nas.module.action, nas.module.moduli[:, None]) if nas.module.rank else nas.module.action,
                                  np.mod(ext.module.action, ext.module.moduli[:, None]) if ext.module.rank else ext.module.action)


def test_cohomologous_cocycles_give_isomorphic_groups(rng):
    from pointed8.morita import module_structures

    for K in (Z2, abelian([2, 2])):
        for facs in ((2,), (4,), (2, 2)):
            for A in module_structures(K, facs)[:3]:
                if A.size * K.order != 8:
                    continue
                H = cohomology_group(K, 2, A)
                for c in H.elements():
                    F = H.element(c)
                    lam = Cochain(K, 1, A, np.zeros((K.order, A.rank), dtype=np.int64))
                    v = rng.integers(0, 8, (K.order, A.rank))
                    v[0] = 0
                    lam = lam.with_values(v)
                    G1 = build_extension(K, A, F).group
                    G2 = build_extension(K, A, F + coboundary(lam)).group
                    assert find_isomorphism(G1, G2) is not None
