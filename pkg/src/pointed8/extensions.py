"""Extensions A -> G -> K by a 2-cocycle, dual extensions, and normal abelian subgroups."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .cohomology import Cochain, coboundary
from .groups import (
    FiniteGroup,
    FiniteModule,
    GroupMap,
    NotACocycle,
    make_group,
    make_module,
)


@dataclass(frozen=True, eq=False)
class ExtensionDatum:
    """G built on the set A x K (or K x A-hat for the dual law).

    Element (a, k) of G has index ``k * |A| + index(a)``, so (0, 1) is 0.
    """

    group: FiniteGroup
    quotient: FiniteGroup
    module: FiniteModule
    cocycle: Cochain
    projection: GroupMap        # G -> K
    embedding: np.ndarray       # module element index -> G element
    a_part: np.ndarray          # G element -> module coordinates, shape (|G|, r)
    k_part: np.ndarray          # G element -> K element

    def element(self, a, k: int) -> int:
        return int(k * self.module.size + self.module.index(a))


def _check_module_cocycle(F: Cochain, module: FiniteModule):
    if F.degree != 2 or F.coeffs is not module and not isinstance(F.coeffs, FiniteModule):
        raise ValueError("F must be a degree-2 module-valued cochain")
    if not F.is_normalized():
        raise NotACocycle("F is not normalized")


def build_extension(K: FiniteGroup, A: FiniteModule, F: Cochain, name: str = "") -> ExtensionDatum:
    """G = A x_F K with (a1, k1)(a2, k2) = (a1 + k1.a2 + F(k1, k2), k1 k2)."""
    _check_module_cocycle(F, A)
    if not coboundary(F).is_zero():
        raise NotACocycle("F is not a 2-cocycle")
    nA, nK = A.size, K.order
    els = A.elements                     # (nA, r)
    n = nA * nK
    a_of = np.tile(els, (nK, 1))          # element g -> a coordinates
    k_of = np.repeat(np.arange(nK), nA)   # element g -> k
    a1, a2 = a_of[:, None, :], a_of[None, :, :]
    k1, k2 = k_of[:, None], k_of[None, :]
    if A.rank:
        acted = np.einsum("...ij,...j->...i", A.action[np.broadcast_to(k1, (n, n))], np.broadcast_to(a2, (n, n, A.rank)))
        a = A.reduce(a1 + acted + F.values[k1, k2])
    else:
        a = np.zeros((n, n, 0), dtype=np.int64)
    k = K.table[k1, k2]
    table = k * nA + A.indices(a)
    G = make_group(table, name=name or f"ext({K.name},{A})")
    proj = GroupMap(G, K, k_of.astype(np.int64))
    return ExtensionDatum(G, K, A, F, proj, np.arange(nA, dtype=np.int64), a_of, k_of)


def is_right_cocycle(Fhat: Cochain, dual: FiniteModule) -> bool:
    """F(k1,k2)^k3 + F(k1k2,k3) == F(k2,k3) + F(k1,k2k3), the law making K x_F A-hat associative."""
    K = Fhat.group
    m = K.order
    k1, k2, k3 = np.indices((m, m, m))
    v = Fhat.values
    right = dual.action[K.inverse[k3]]
    lhs = np.einsum("...ij,...j->...i", right, v[k1, k2]) + v[K.table[k1, k2], k3]
    rhs = v[k2, k3] + v[k1, K.table[k2, k3]]
    return bool(np.array_equal(dual.reduce(lhs), dual.reduce(rhs)))


def left_to_right_cocycle(g: Cochain) -> Cochain:
    """F(k1, k2) := g(k2^-1, k1^-1).

    Turns a 2-cocycle for the left action k.rho = rho^(k^-1) into one for
    the right-action law of the dual extension (and coboundaries into
    coboundaries), so H^2 of the left module enumerates the dual classes.
    """
    K = g.group
    inv = K.inverse
    vals = g.values[inv[None, :], inv[:, None]]
    return Cochain(K, 2, g.coeffs, np.array(vals), g.denom_exp)


def build_dual_group(K: FiniteGroup, dual: FiniteModule, Fhat: Cochain, name: str = "") -> ExtensionDatum:
    """G-hat = K x_Fhat A-hat with (k1, r1)(k2, r2) = (k1 k2, r1^k2 + r2 + Fhat(k1, k2)).

    ``Fhat`` uses the right-action convention (see :func:`is_right_cocycle`).
    """
    _check_module_cocycle(Fhat, dual)
    if not is_right_cocycle(Fhat, dual):
        raise NotACocycle("Fhat does not satisfy the right-action cocycle identity")
    nA, nK = dual.size, K.order
    els = dual.elements
    n = nA * nK
    r_of = np.tile(els, (nK, 1))
    k_of = np.repeat(np.arange(nK), nA)
    r1, r2 = r_of[:, None, :], r_of[None, :, :]
    k1, k2 = k_of[:, None], k_of[None, :]
    if dual.rank:
        right = dual.action[K.inverse[np.broadcast_to(k2, (n, n))]]
        acted = np.einsum("...ij,...j->...i", right, np.broadcast_to(r1, (n, n, dual.rank)))
        rr = dual.reduce(acted + r2 + Fhat.values[k1, k2])
    else:
        rr = np.zeros((n, n, 0), dtype=np.int64)
    kk = K.table[k1, k2]
    table = kk * nA + dual.indices(rr)
    G = make_group(table, name=name or f"dualext({K.name},{dual})")
    proj = GroupMap(G, K, k_of.astype(np.int64))
    return ExtensionDatum(G, K, dual, Fhat, proj, np.arange(nA, dtype=np.int64), r_of, k_of)


# ---------------------------------------------------------------------------
# normal abelian subgroups


def abelian_basis(G: FiniteGroup, elements: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Generators g_1..g_r of the abelian subgroup with orders d_1 | d_2 | ... and
    every element uniquely a product of powers.  Returns (invariant factors, generators)."""
    elements = sorted(int(e) for e in elements)
    size = len(elements)
    if size == 1:
        return (), ()
    orders = G.element_orders
    nonid = [e for e in elements if e != 0]
    for r in range(1, size.bit_length() + 1):
        for gens in itertools.product(nonid, repeat=r):
            ds = [int(orders[g]) for g in gens]
            if any(b % a for a, b in zip(ds, ds[1:])) or int(np.prod(ds)) != size:
                continue
            span = set()
            for exps in itertools.product(*[range(d) for d in ds]):
                x = 0
                for g, e in zip(gens, exps):
                    x = int(G.table[x, G.power(g, e)])
                span.add(x)
            if len(span) == size:
                return tuple(ds), tuple(gens)
    raise ValueError("subset is not an abelian subgroup")


@dataclass(frozen=True, eq=False)
class NormalAbelianSubgroup:
    group: FiniteGroup
    elements: tuple[int, ...]
    generators: tuple[int, ...]
    module: FiniteModule          # A with the conjugation action of K = H/A
    quotient: FiniteGroup
    projection: GroupMap          # H -> K
    section: np.ndarray           # K -> H, least element of each coset
    coords: dict                  # element of A -> coordinate tuple

    def element_of(self, a) -> int:
        G = self.group
        x = 0
        for g, e in zip(self.generators, a):
            x = int(G.table[x, G.power(g, int(e))])
        return x

    def extension_cocycle(self) -> Cochain:
        """F(k1, k2) = s(k1) s(k2) s(k1 k2)^-1 in A, for the least-element section s."""
        G, K, s = self.group, self.quotient, self.section
        vals = np.zeros((K.order, K.order, self.module.rank), dtype=np.int64)
        for k1 in range(K.order):
            for k2 in range(K.order):
                x = G.table[G.table[s[k1], s[k2]], G.inverse[s[K.table[k1, k2]]]]
                vals[k1, k2] = self.coords[int(x)]
        return Cochain(K, 2, self.module, vals)

    def isomorphism_from(self, ext: ExtensionDatum) -> GroupMap:
        """(a, k) -> a s(k), an isomorphism from the extension built on this data."""
        imgs = np.array(
            [self.group.table[self.element_of(ext.a_part[g]), self.section[ext.k_part[g]]] for g in range(ext.group.order)],
            dtype=np.int64,
        )
        phi = GroupMap(ext.group, self.group, imgs)
        assert phi.is_homomorphism() and phi.is_bijective()
        return phi


def quotient_group(G: FiniteGroup, normal: Sequence[int]) -> tuple[FiniteGroup, GroupMap, np.ndarray]:
    """G/N with cosets ordered by least element; returns (K, projection, section)."""
    N = sorted(int(x) for x in normal)
    label = -np.ones(G.order, dtype=np.int64)
    reps = []
    for g in range(G.order):
        if label[g] >= 0:
            continue
        for x in N:
            label[G.table[g, x]] = len(reps)
        reps.append(g)
    reps_a = np.array(reps, dtype=np.int64)
    table = label[G.table[reps_a[:, None], reps_a[None, :]]]
    K = make_group(table, name=f"{G.name}/{len(N)}")
    return K, GroupMap(G, K, label), reps_a


def normal_abelian_subgroup(H: FiniteGroup, elements: Sequence[int]) -> NormalAbelianSubgroup:
    elements = tuple(sorted(int(e) for e in elements))
    if H.closure(elements) != elements:
        raise ValueError("not a subgroup")
    if not H.is_normal(elements):
        raise ValueError("not a normal subgroup")
    if any(H.table[a, b] != H.table[b, a] for a in elements for b in elements):
        raise ValueError("not an abelian subgroup")
    facs, gens = abelian_basis(H, elements)
    coords = {}
    for exps in itertools.product(*[range(d) for d in facs]):
        x = 0
        for g, e in zip(gens, exps):
            x = int(H.table[x, H.power(g, e)])
        coords[x] = tuple(exps)
    K, proj, section = quotient_group(H, elements)
    r = len(facs)
    mats = np.zeros((K.order, r, r), dtype=np.int64)
    for k in range(K.order):
        s = int(section[k])
        for j, g in enumerate(gens):
            mats[k, :, j] = coords[H.conj(s, g)]
    module = make_module(facs, K, mats)
    return NormalAbelianSubgroup(H, elements, gens, module, K, proj, section, coords)


def normal_abelian_subgroups(H: FiniteGroup) -> list[NormalAbelianSubgroup]:
    """Every normal abelian subgroup (trivial included; the whole group when abelian)."""
    out = []
    for sub in H.subgroups:
        if not H.is_normal(sub):
            continue
        if any(H.table[a, b] != H.table[b, a] for a in sub for b in sub):
            continue
        out.append(normal_abelian_subgroup(H, sub))
    return out
