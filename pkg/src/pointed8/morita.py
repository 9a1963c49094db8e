"""Weak Morita equivalence of the pointed categories Vect(H, eta), |H| = 8.

For K acting on A, F in Z^2(K, A) and Fhat in Z^2(K, Ahat), the groups
G = A x_F K and Ghat = K x_Fhat Ahat carry the paired 3-cocycles

    omega((a1,k1),(a2,k2),(a3,k3))    = <Fhat(k1,k2), a3> + (eps+kappa)(k1,k2,k3)
    omegahat((k1,r1),(k2,r2),(k3,r3)) = (eps+kappa)(k1,k2,k3) + <r1, F(k2,k3)>

whenever some eps on K makes omega a cocycle.  Each such datum is an edge
between the tensor classes of (G, omega) and (Ghat, omegahat); the Morita
classes are the connected components.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .cohomology import (
    TORUS,
    Cochain,
    coboundary,
    coboundary_matrix,
    cohomology_group,
    inflation,
    is_cocycle,
    pullback,
    torus_cohomology,
)
from .config import Config
from .exactlinalg import ModSolver
from .extensions import (
    ExtensionDatum,
    build_dual_group,
    build_extension,
    left_to_right_cocycle,
    normal_abelian_subgroup,
)
from .groups import (
    CATALOG_NAMES,
    FiniteGroup,
    FiniteModule,
    GroupMap,
    NotACocycle,
    abelian,
    automorphisms,
    catalog,
    cyclic,
    dual_module,
    homomorphisms,
    identify,
    make_group,
    make_module,
    pairing,
)
from .orbits import Census, equivalence_census

log = logging.getLogger(__name__)

REFERENCE_COUNT = 36   # quoted total to compare against (its arithmetic 47 - 9 gives 38)
EXPECTED_COUNT = 38


# ---------------------------------------------------------------------------
# cocycle formulas


def _pairing_torus(module: FiniteModule, rho, a, k: int) -> np.ndarray:
    e = module.exponent
    return pairing(module, rho, a) * ((1 << k) // e)


def omega_zero(Fhat: Cochain, ext: ExtensionDatum, k: int) -> Cochain:
    """omega0(g1, g2, g3) = <Fhat(k1, k2), a3> on G = A x_F K."""
    A, G = ext.module, ext.group
    kk, aa = ext.k_part, ext.a_part
    rho = Fhat.values[kk[:, None], kk[None, :]]                 # (|G|, |G|, r)
    vals = _pairing_torus(A, rho[:, :, None, :], aa[None, None, :, :], k)
    return Cochain(G, 3, TORUS, vals.astype(np.int64), k)


@lru_cache(maxsize=None)
def _h3_solver(K: FiniteGroup, k: int) -> ModSolver:
    return ModSolver(coboundary_matrix(K, 3), k)


def solve_epsilon(ext: ExtensionDatum, omega0: Cochain) -> Optional[Cochain]:
    """Some eps on K with omega0 + inflation(eps) a cocycle on G, or None."""
    K, k = ext.quotient, omega0.denom_exp
    r = coboundary(omega0)
    if r.is_zero():
        return Cochain.zero(K, 3, TORUS, k)
    section = np.array([ext.element(np.zeros(ext.module.rank, dtype=np.int64), x) for x in range(K.order)])
    rK = Cochain(K, 4, TORUS, r.values[np.ix_(section, section, section, section)], k)
    if inflation(ext.projection, rK) != r:
        return None
    x = _h3_solver(K, k).solve(-rK.normalized_vector())
    if x is None:
        return None
    eps = Cochain.from_normalized_vector(K, 3, TORUS, x, k)
    if not is_cocycle(omega0 + inflation(ext.projection, eps)):
        raise NotACocycle("epsilon solve returned a non-solution")
    return eps


def omega_pair(ext: ExtensionDatum, dual_ext: ExtensionDatum, omega0: Cochain, eps: Cochain,
               kappa: Cochain) -> tuple[Cochain, Cochain]:
    """The paired cocycles (omega on G, omegahat on Ghat)."""
    twist = eps + kappa
    omega = omega0 + inflation(ext.projection, twist)
    F, A, k = ext.cocycle, ext.module, omega0.denom_exp
    kk, rr = dual_ext.k_part, dual_ext.a_part
    Fv = F.values[kk[:, None], kk[None, :]]                     # F(k2, k3)
    vals = _pairing_torus(A, rr[:, None, None, :], Fv[None, :, :, :], k)
    hat = Cochain(dual_ext.group, 3, TORUS, vals.astype(np.int64), k) + inflation(dual_ext.projection, twist)
    if not is_cocycle(omega):
        raise NotACocycle("omega is not a 3-cocycle")
    if not is_cocycle(hat):
        raise NotACocycle("omegahat is not a 3-cocycle")
    return omega, hat


# ---------------------------------------------------------------------------
# extension data


def small_groups(order: int) -> list[FiniteGroup]:
    if order == 1:
        return [cyclic(1, "1")]
    if order == 2:
        return [cyclic(2, "Z2")]
    if order == 4:
        return [cyclic(4, "Z4"), abelian([2, 2], "Z2^2")]
    if order == 8:
        return catalog()
    raise ValueError(f"no groups of order {order} here")


ABELIAN_TYPES = {1: [()], 2: [(2,)], 4: [(4,), (2, 2)], 8: [(8,), (2, 4), (2, 2, 2)]}


@lru_cache(maxsize=None)
def automorphism_matrices(factors: tuple[int, ...]) -> tuple[np.ndarray, ...]:
    """Aut(Z/d_1 + ... + Z/d_r) as coordinate matrices, identity first."""
    r = len(factors)
    if not r:
        return (np.zeros((0, 0), dtype=np.int64),)
    A = abelian(factors)
    trivial = make_module(factors, cyclic(1))
    els = trivial.elements
    units = [trivial.index(np.eye(r, dtype=np.int64)[j]) for j in range(r)]
    mats = []
    for phi in automorphisms(A):
        mats.append(np.stack([els[phi.images[u]] for u in units], axis=1))
    eye = np.eye(r, dtype=np.int64)
    mats.sort(key=lambda m: (not np.array_equal(m, eye), m.tolist()))
    return tuple(mats)


def _aut_group(factors: tuple[int, ...]) -> FiniteGroup:
    mats = automorphism_matrices(factors)
    moduli = np.array(factors, dtype=np.int64)[:, None]
    keys = {m.tobytes(): i for i, m in enumerate(mats)}
    table = [[keys[np.mod(a @ b, moduli).tobytes()] for b in mats] for a in mats]
    return make_group(table, name=f"Aut({'x'.join(map(str, factors))})")


def module_structures(K: FiniteGroup, factors: tuple[int, ...]) -> list[FiniteModule]:
    """Every action of K on Z/d_1 + ... + Z/d_r (one module per homomorphism)."""
    if not factors or K.order == 1:
        return [make_module(factors, K)]
    mats = automorphism_matrices(factors)
    aut = _aut_group(factors)
    return [make_module(factors, K, np.stack([mats[i] for i in hom.images])) for hom in homomorphisms(K, aut)]


def _class_reps(K: FiniteGroup, n: int, coeffs, k: int) -> list[tuple[tuple[int, ...], Cochain]]:
    """(coordinates, representative) for every class of H^n(K, coeffs)."""
    if K.order == 1 or (isinstance(coeffs, FiniteModule) and coeffs.rank == 0):
        return [((), Cochain.zero(K, n, coeffs, k))]
    H = cohomology_group(K, n, coeffs, k)
    return [(c, H.element(c)) for c in H.elements()]


# ---------------------------------------------------------------------------
# edges


@dataclass(frozen=True, eq=False)
class MoritaWitness:
    K: FiniteGroup
    A: FiniteModule
    F: Cochain
    Fhat: Cochain
    eps: Cochain
    kappa: Cochain
    phi: GroupMap            # G -> catalog group
    phi_hat: GroupMap        # Ghat -> catalog group
    F_class: tuple = ()
    Fhat_class: tuple = ()
    kappa_class: tuple = ()
    group_index: int = -1
    dual_group_index: int = -1
    omega_coords: tuple = ()
    omegahat_coords: tuple = ()

    @property
    def sort_key(self) -> tuple:
        return (self.K.order, self.K.name, self.A.invariant_factors, self.A.action.tolist(),
                self.F_class, self.Fhat_class, self.kappa_class)

    def to_json(self) -> dict:
        return {
            "K": self.K.name,
            "A": list(self.A.invariant_factors),
            "action": self.A.action.tolist(),
            "F_class": list(self.F_class),
            "Fhat_class": list(self.Fhat_class),
            "kappa_class": list(self.kappa_class),
            "G": CATALOG_NAMES[self.group_index],
            "Ghat": CATALOG_NAMES[self.dual_group_index],
            "omega": list(self.omega_coords),
            "omegahat": list(self.omegahat_coords),
        }


@dataclass(frozen=True, eq=False)
class MoritaEdge:
    class_a: int
    class_b: int
    witness: MoritaWitness

    @property
    def sort_key(self) -> tuple:
        return (min(self.class_a, self.class_b), max(self.class_a, self.class_b)) + self.witness.sort_key


def _edges_for(K: FiniteGroup, A: FiniteModule, census: Census, k: int) -> list[MoritaEdge]:
    dual = dual_module(A)
    kappas = _class_reps(K, 3, TORUS, k)
    fhats = _class_reps(K, 2, dual, k)
    out = []
    for fc, F in _class_reps(K, 2, A, k):
        ext = build_extension(K, A, F)
        gi, phi = identify(ext.group)
        H3 = census.tables[gi].h3
        phi_inv = phi.inverse()
        for gc, g in fhats:
            Fhat = left_to_right_cocycle(g)
            dext = build_dual_group(K, dual, Fhat)
            hi, phi_hat = identify(dext.group)
            H3hat = census.tables[hi].h3
            phi_hat_inv = phi_hat.inverse()
            w0 = omega_zero(Fhat, ext, k)
            eps = solve_epsilon(ext, w0)
            if eps is None:
                continue
            for kc, kappa in kappas:
                omega, hat = omega_pair(ext, dext, w0, eps, kappa)
                oc = H3.coordinates(pullback(phi_inv, omega))
                hc = H3hat.coordinates(pullback(phi_hat_inv, hat))
                w = MoritaWitness(K, A, F, Fhat, eps, kappa, phi, phi_hat, fc, gc, kc, gi, hi, oc, hc)
                out.append(MoritaEdge(census.class_id(gi, oc), census.class_id(hi, hc), w))
    return out


def extension_data(order: int = 8) -> list[tuple[FiniteGroup, FiniteModule]]:
    """All (K, A with K-action) with |K| |A| = order."""
    out = []
    for ka in (1, 2, 4, 8):
        if order % ka:
            continue
        for K in small_groups(order // ka):
            for facs in ABELIAN_TYPES[ka]:
                out.extend((K, A) for A in module_structures(K, facs))
    return out


def enumerate_edges(census: Optional[Census] = None, config: Config = Config()) -> list[MoritaEdge]:
    census = census or equivalence_census(config)
    data = extension_data(8)
    k = config.max_denominator_exp
    if config.threads > 1:
        with ThreadPoolExecutor(config.threads) as pool:
            chunks = list(pool.map(lambda d: _edges_for(d[0], d[1], census, k), data))
    else:
        chunks = [_edges_for(K, A, census, k) for K, A in data]
    edges = [e for ch in chunks for e in ch]
    edges.sort(key=lambda e: e.sort_key)
    return edges


def validate_witness(edge: MoritaEdge, census: Census) -> bool:
    """Recompute an edge from its witness data alone."""
    w = edge.witness
    k = w.eps.denom_exp
    ext = build_extension(w.K, w.A, w.F)
    dext = build_dual_group(w.K, dual_module(w.A), w.Fhat)
    for phi, G in ((w.phi, ext.group), (w.phi_hat, dext.group)):
        if not (np.array_equal(phi.source.table, G.table) and phi.is_homomorphism() and phi.is_bijective()):
            return False
    w0 = omega_zero(w.Fhat, ext, k)
    omega, hat = omega_pair(ext, dext, w0, w.eps, w.kappa)
    oc = census.tables[w.group_index].h3.coordinates(pullback(w.phi.inverse(), omega))
    hc = census.tables[w.dual_group_index].h3.coordinates(pullback(w.phi_hat.inverse(), hat))
    return census.class_id(w.group_index, oc) == edge.class_a and census.class_id(w.dual_group_index, hc) == edge.class_b


# ---------------------------------------------------------------------------
# Omega(H; A)


def omega_subgroup(H: FiniteGroup, subgroup: Sequence[int], config: Config = Config()) -> frozenset:
    """Coordinates (in H^3(H, C*)) of every class realized from extension data with kernel A."""
    k = config.max_denominator_exp
    nas = normal_abelian_subgroup(H, subgroup)
    K, A = nas.quotient, nas.module
    ext = build_extension(K, A, nas.extension_cocycle())
    back = nas.isomorphism_from(ext).inverse()
    H3 = torus_cohomology(H, 3, k, cache_dir=config.cache_dir)
    dual = dual_module(A)
    kappas = _class_reps(K, 3, TORUS, k)
    found = set()
    for _, g in _class_reps(K, 2, dual, k):
        Fhat = left_to_right_cocycle(g)
        w0 = omega_zero(Fhat, ext, k)
        eps = solve_epsilon(ext, w0)
        if eps is None:
            continue
        for _, kappa in kappas:
            omega = w0 + inflation(ext.projection, eps + kappa)
            found.add(H3.coordinates(pullback(back, omega)))
    for a in found:
        for b in found:
            assert H3.add(a, b) in found, "Omega(H; A) is not closed under addition"
    return frozenset(found)


# ---------------------------------------------------------------------------
# partition


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


@dataclass(frozen=True, eq=False)
class MoritaPartition:
    census: Census
    classes: list            # sorted lists of census class ids
    witnesses: list          # per class: edges that merged it
    edges: list

    @property
    def count(self) -> int:
        return len(self.classes)

    def class_of(self, census_id: int) -> int:
        for i, members in enumerate(self.classes):
            if census_id in members:
                return i
        raise KeyError(census_id)

    def signature(self, members) -> tuple[str, ...]:
        return tuple(sorted(self.census.classes[m].group_name for m in members))

    def merged_signatures(self) -> dict:
        out: dict = {}
        for members in self.classes:
            if len(members) > 1:
                sig = tuple(sorted(set(self.signature(members)), key=CATALOG_NAMES.index))
                out[sig] = out.get(sig, 0) + 1
        return out

    @property
    def singletons(self) -> int:
        return sum(1 for m in self.classes if len(m) == 1)

    @property
    def discrepancy_note(self) -> str:
        merges = len(self.census) - self.count
        return (f"computed {self.count} Morita classes; the reference count reads 47-9={REFERENCE_COUNT}, "
                f"but 47 tensor classes minus {merges} merges leaves {self.count}")


def morita_partition(census: Optional[Census] = None, edges: Optional[list] = None,
                     config: Config = Config()) -> MoritaPartition:
    census = census or equivalence_census(config)
    edges = edges if edges is not None else enumerate_edges(census, config)
    uf = _UnionFind(len(census))
    merges = []
    for e in sorted(edges, key=lambda e: e.sort_key):
        if uf.union(e.class_a, e.class_b):
            merges.append(e)
    groups: dict = {}
    for c in range(len(census)):
        groups.setdefault(uf.find(c), []).append(c)
    classes = sorted(groups.values(), key=lambda m: m[0])
    witnesses = [[e for e in merges if uf.find(e.class_a) == uf.find(m[0])] for m in classes]
    return MoritaPartition(census, classes, witnesses, edges)
