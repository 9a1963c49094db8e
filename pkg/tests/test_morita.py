import numpy as np
import pytest

from pointed8.cohomology import TORUS, Cochain, coboundary, cohomology_group, inflation, is_cocycle, torus_cohomology
from pointed8.extensions import build_dual_group, build_extension, left_to_right_cocycle
from pointed8.groups import catalog_group, cyclic, dual_module, make_module
from pointed8.morita import (
    _edges_for,
    extension_data,
    module_structures,
    omega_pair,
    omega_subgroup,
    omega_zero,
    solve_epsilon,
    validate_witness,
)

Z2 = cyclic(2)
K_EXP = 12


def datum(K, A, fc, gc):
    F = cohomology_group(K, 2, A).element(fc)
    D = dual_module(A)
    Fhat = left_to_right_cocycle(cohomology_group(K, 2, D).element(gc))
    return build_extension(K, A, F), build_dual_group(K, D, Fhat), Fhat


def test_module_structures_counts():
    assert len(module_structures(Z2, (4,))) == 2
    assert len(module_structures(Z2, (2, 2))) == 4
    assert len(module_structures(cyclic(4), (2,))) == 1
    assert len(extension_data(8)) == 16


def test_omega_zero_basic():
    A = make_module([4], Z2)
    ext, _, Fhat = datum(Z2, A, (1,), (0,))
    assert omega_zero(Fhat, ext, K_EXP).is_zero()
    ext, _, Fhat = datum(Z2, A, (1,), (1,))
    w0 = omega_zero(Fhat, ext, K_EXP)
    assert w0.is_normalized()
    # the coboundary only sees the K-components
    r = coboundary(w0).values
    kk = ext.k_part
    sec = np.array([ext.element([0], k) for k in range(2)])
    assert np.array_equal(r, r[np.ix_(*[sec[kk]] * 4)])


@pytest.mark.parametrize("fc,gc", [((0,), (0,)), ((1,), (0,)), ((0,), (1,)), ((1,), (1,))])
def test_solve_epsilon_z2_z4(fc, gc):
    A = make_module([4], Z2)
    ext, _, Fhat = datum(Z2, A, fc, gc)
    w0 = omega_zero(Fhat, ext, K_EXP)
    eps = solve_epsilon(ext, w0)
    assert eps is not None
    if fc == (0,) or gc == (0,):
        assert is_cocycle(w0)
    assert is_cocycle(w0 + inflation(ext.projection, eps))


def test_epsilon_can_fail():
    """Over K = Z2 x Z2 some pairs (F, Fhat) admit no epsilon."""
    from pointed8.groups import abelian

    K = abelian([2, 2], "Z2^2")
    A = make_module([2], K)
    failures = 0
    HA, HD = cohomology_group(K, 2, A), cohomology_group(K, 2, dual_module(A))
    for fc in HA.elements():
        ext = build_extension(K, A, HA.element(fc))
        for gc in HD.elements():
            w0 = omega_zero(left_to_right_cocycle(HD.element(gc)), ext, K_EXP)
            failures += solve_epsilon(ext, w0) is None
    assert failures > 0


def test_omega_pair_zero_and_kappa_shift(rng):
    A = make_module([4], Z2)
    ext, dext, Fhat = datum(Z2, A, (0,), (0,))
    w0 = omega_zero(Fhat, ext, K_EXP)
    zero = Cochain.zero(Z2, 3, TORUS, K_EXP)
    w, wh = omega_pair(ext, dext, w0, zero, zero)
    assert w.is_zero() and wh.is_zero()
    ext, dext, Fhat = datum(Z2, A, (1,), (1,))
    w0 = omega_zero(Fhat, ext, K_EXP)
    eps = solve_epsilon(ext, w0)
    kappa = torus_cohomology(Z2, 3).basis[0]
    lam = Cochain.from_normalized_vector(Z2, 2, TORUS, rng.integers(0, 4096, 1), K_EXP)
    a = omega_pair(ext, dext, w0, eps, kappa)
    b = omega_pair(ext, dext, w0, eps, kappa + coboundary(lam))
    from pointed8.groups import identify
    from pointed8.cohomology import pullback, torus_h3

    for (x, y) in zip(a, b):
        i, phi = identify(x.group)
        from pointed8.groups import catalog

        H = torus_h3(catalog()[i])
        assert H.coordinates(pullback(phi.inverse(), x)) == H.coordinates(pullback(phi.inverse(), y))


def test_trivial_k_gives_trivial_self_edges(pipeline):
    edges = [e for e in pipeline.partition.edges if e.witness.K.order == 1]
    assert edges
    for e in edges:
        assert e.class_a == e.class_b
        assert not any(pipeline.census.classes[e.class_a].canonical)


@pytest.mark.parametrize("group,sub,order", [
    ("Z8", (0, 2, 4, 6), 2), ("Q8", (0, 1, 2, 3), 2), ("Q8", (0, 1), 4), ("D8", (0, 1, 2, 3), 4),
])
def test_omega_orders(group, sub, order):
    om = omega_subgroup(catalog_group(group), sub)
    assert len(om) == order
    assert (0,) * len(next(iter(om))) in om


def test_named_edges(pipeline):
    census, P = pipeline.census, pipeline.partition
    names = [c.group_name for c in census.classes]
    z8_trivial = names.index("Z8")
    q8_trivial = names.index("Q8")
    partners = P.classes[P.class_of(z8_trivial)]
    z4 = [m for m in partners if names[m] == "Z4xZ2"]
    assert len(z4) == 1 and census.classes[z4[0]].size == 4        # the orbit of uv
    partners = P.classes[P.class_of(q8_trivial)]
    d8 = [m for m in partners if names[m] == "D8"]
    assert len(d8) == 1 and census.classes[d8[0]].size == 2


def test_partition(pipeline):
    P = pipeline.partition
    assert P.count == 38
    assert P.singletons == 30
    assert P.merged_signatures() == {
        ("Z2^3", "Z4xZ2"): 2, ("Z2^3", "D8"): 2, ("Z2^3", "D8", "Q8"): 1, ("Z2^3", "Q8"): 1, ("Z4xZ2", "Z8"): 2,
    }
    assert sorted(m for c in P.classes for m in c) == list(range(47))
    assert "36" in P.discrepancy_note and "38" in P.discrepancy_note


def test_witnesses_revalidate(pipeline):
    edges = pipeline.partition.edges
    for e in edges[:: max(1, len(edges) // 40)]:
        assert validate_witness(e, pipeline.census)
    for ws in pipeline.partition.witnesses:
        for e in ws:
            assert validate_witness(e, pipeline.census)


def test_mirror_symmetry(pipeline):
    """Edges realized from (K, A) are the reversed edges realized from (K, Ahat)."""
    census = pipeline.census
    for K, A in extension_data(8):
        if K.order in (1, 8):
            continue
        fwd = {(e.class_a, e.class_b) for e in _edges_for(K, A, census, K_EXP)}
        back = {(e.class_b, e.class_a) for e in _edges_for(K, dual_module(A), census, K_EXP)}
        assert fwd == back
