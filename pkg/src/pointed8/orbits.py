"""Aut(G) acting on H^3(G, C*): orbits, canonical representatives, the 47-class census."""

from __future__ import annotations

from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .cohomology import Cochain, CohomologyGroup, pullback, torus_cohomology
from .config import Config
from .groups import FiniteGroup, GroupMap, automorphisms, catalog


def coordinate_space(H: CohomologyGroup) -> list[tuple[int, ...]]:
    return list(H.elements())


def induced_matrix(H: CohomologyGroup, phi: GroupMap) -> np.ndarray:
    """Column i = coordinates of phi^* (basis_i)."""
    cols = [H.coordinates(pullback(phi, b)) for b in H.basis]
    return np.array(cols, dtype=np.int64).T.reshape(len(H.basis), len(H.basis))


def apply_matrix(H: CohomologyGroup, M: np.ndarray, coords) -> tuple[int, ...]:
    return H.reduce(M @ np.asarray(coords, dtype=np.int64)) if len(coords) else ()


@dataclass(frozen=True, eq=False)
class AutAction:
    group: FiniteGroup
    h3: CohomologyGroup
    automorphisms: list
    matrices: list
    permutations: np.ndarray   # (|Aut|, |H^3|) indices into the coordinate space
    space: list


def aut_action(G: FiniteGroup, config: Config = Config()) -> AutAction:
    """For every automorphism phi, the map coords(eta) -> coords(phi^* eta) as a permutation."""
    H = torus_cohomology(G, 3, config.max_denominator_exp, cache_dir=config.cache_dir)
    auts = automorphisms(G)
    space = coordinate_space(H)
    index = {c: i for i, c in enumerate(space)}
    mats, perms = [], []
    for phi in auts:
        M = induced_matrix(H, phi)
        mats.append(M)
        perms.append([index[apply_matrix(H, M, c)] for c in space])
    return AutAction(G, H, auts, mats, np.array(perms, dtype=np.int64).reshape(len(auts), len(space)), space)


@dataclass(frozen=True, eq=False)
class Orbit:
    id: int
    members: tuple[tuple[int, ...], ...]    # sorted coordinate vectors
    canonical: tuple[int, ...]
    class_order: int
    fingerprint: tuple = ()

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass(frozen=True, eq=False)
class OrbitTable:
    group: FiniteGroup
    h3: CohomologyGroup
    orbits: list
    lookup: dict                           # coords -> orbit id
    aut_order: int

    def orbit_of(self, coords) -> Orbit:
        return self.orbits[self.lookup[tuple(coords)]]

    @property
    def sizes(self) -> list[int]:
        return [o.size for o in self.orbits]


def orbit_table(G: FiniteGroup, config: Config = Config(), fingerprints: bool = True) -> OrbitTable:
    act = aut_action(G, config)
    H, space = act.h3, act.space
    seen = np.full(len(space), -1, dtype=np.int64)
    raw = []
    for start in range(len(space)):
        if seen[start] >= 0:
            continue
        members = {start}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in act.permutations[:, x].tolist():
                if y not in members:
                    members.add(y)
                    queue.append(y)
        for x in members:
            seen[x] = len(raw)
        raw.append(sorted(space[x] for x in members))
    raw.sort(key=lambda ms: ms[0])
    orbits, lookup = [], {}
    for i, ms in enumerate(raw):
        canon = ms[0]
        fp = ()
        if fingerprints:
            fp = (H.order_of(canon), len(ms), restriction_signature(G, H.element(canon), config))
        orbits.append(Orbit(i, tuple(ms), canon, H.order_of(canon), fp))
        for c in ms:
            lookup[c] = i
    return OrbitTable(G, H, orbits, lookup, len(act.automorphisms))


@lru_cache(maxsize=None)
def _subgroup_classes(G: FiniteGroup) -> tuple[tuple[int, ...], ...]:
    """One representative per conjugacy class of proper nontrivial subgroups."""
    reps = []
    seen = set()
    for S in G.subgroups:
        if len(S) in (1, G.order) or S in seen:
            continue
        conjs = {tuple(sorted(G.conj(g, x) for x in S)) for g in range(G.order)}
        seen |= conjs
        reps.append(min(conjs))
    return tuple(reps)


def restriction_signature(G: FiniteGroup, eta: Cochain, config: Config = Config()) -> tuple:
    """Sorted multiset of (|S|, order of eta restricted to S) over subgroup conjugacy classes."""
    sig = []
    for S in _subgroup_classes(G):
        sub, inc = G.subgroup(S, name=f"{G.name}<{len(S)}>")
        HS = torus_cohomology(sub, 3, config.max_denominator_exp)
        sig.append((len(S), HS.order_of(HS.coordinates(pullback(inc, eta)))))
    return tuple(sorted(sig))


@dataclass(frozen=True)
class CensusClass:
    id: int
    group_index: int
    group_name: str
    orbit_id: int
    canonical: tuple[int, ...]
    size: int
    class_order: int


@dataclass(frozen=True, eq=False)
class Census:
    classes: list
    tables: list             # OrbitTable per catalog group

    def class_id(self, group_index: int, coords) -> int:
        table = self.tables[group_index]
        orbit = table.lookup[tuple(coords)]
        return self._offsets[group_index] + orbit

    @property
    def _offsets(self) -> list[int]:
        out, acc = [], 0
        for t in self.tables:
            out.append(acc)
            acc += len(t.orbits)
        return out

    def __len__(self):
        return len(self.classes)


def equivalence_census(config: Config = Config(), fingerprints: bool = True) -> Census:
    groups = catalog()
    if config.threads > 1:
        with ThreadPoolExecutor(config.threads) as pool:
            tables = list(pool.map(lambda G: orbit_table(G, config, fingerprints), groups))
    else:
        tables = [orbit_table(G, config, fingerprints) for G in groups]
    classes = []
    for gi, t in enumerate(tables):
        for o in t.orbits:
            classes.append(CensusClass(len(classes), gi, t.group.name, o.id, o.canonical, o.size, o.class_order))
    return Census(classes, tables)
