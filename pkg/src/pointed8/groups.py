"""Finite groups as multiplication tables.

Element 0 is always the identity.  Everything here is brute force; the
groups of interest have order at most 64 (in practice at most 8).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Optional, Sequence

import numpy as np


class GroupError(ValueError):
    pass


class NotLatinSquare(GroupError):
    pass


class NoIdentity(GroupError):
    pass


class NoInverse(GroupError):
    pass


class NotAssociative(GroupError):
    pass


class NotACocycle(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    order: int
    table: np.ndarray
    name: str = ""

    def __post_init__(self):
        self.table.setflags(write=False)

    def __repr__(self):
        return f"FiniteGroup({self.name or '?'}, order={self.order})"

    def __len__(self):
        return self.order

    def mul(self, x: int, y: int) -> int:
        return int(self.table[x, y])

    @cached_property
    def inverse(self) -> np.ndarray:
        inv = np.argmin(self.table, axis=1)
        inv.setflags(write=False)
        return inv

    @cached_property
    def element_orders(self) -> np.ndarray:
        orders = np.zeros(self.order, dtype=np.int64)
        for x in range(self.order):
            y, n = x, 1
            while y != 0:
                y = self.table[y, x]
                n += 1
            orders[x] = n
        return orders

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    @cached_property
    def key(self) -> str:
        """Stable hash of the multiplication table."""
        import hashlib

        return hashlib.sha256(self.table.astype(np.int64).tobytes()).hexdigest()[:16]

    def power(self, x: int, n: int) -> int:
        y = 0
        for _ in range(n % int(self.element_orders[x])):
            y = int(self.table[y, x])
        return y

    def conj(self, g: int, x: int) -> int:
        """g x g^-1"""
        return int(self.table[self.table[g, x], self.inverse[g]])

    def closure(self, elements: Sequence[int]) -> tuple[int, ...]:
        """Subgroup generated by ``elements`` as a sorted tuple."""
        found = {0}
        frontier = [0]
        gens = [int(e) for e in elements]
        while frontier:
            new = []
            for x in frontier:
                for g in gens:
                    y = int(self.table[x, g])
                    if y not in found:
                        found.add(y)
                        new.append(y)
            frontier = new
        return tuple(sorted(found))

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """Greedy generating set: scan elements by decreasing order, then index."""
        gens: list[int] = []
        span: tuple[int, ...] = (0,)
        candidates = sorted(range(1, self.order), key=lambda x: (-self.element_orders[x], x))
        while len(span) < self.order:
            best = None
            for x in candidates:
                if x in span:
                    continue
                size = len(self.closure(gens + [x]))
                if best is None or size > best[0]:
                    best = (size, x)
            gens.append(best[1])
            span = self.closure(gens)
        return tuple(gens)

    @cached_property
    def words(self) -> list[tuple[int, int]]:
        """BFS spanning tree over generators: (parent, generator) for each element.

        Element x == table[parent, generator]; the identity maps to (-1, -1).
        """
        tree: list[Optional[tuple[int, int]]] = [None] * self.order
        tree[0] = (-1, -1)
        frontier = [0]
        while frontier:
            new = []
            for x in frontier:
                for g in self.generators:
                    y = int(self.table[x, g])
                    if tree[y] is None:
                        tree[y] = (x, g)
                        new.append(y)
            frontier = new
        return tree  # type: ignore[return-value]

    @cached_property
    def subgroups(self) -> list[tuple[int, ...]]:
        subs = {(0,)}
        frontier = [(0,)]
        while frontier:
            new = []
            for s in frontier:
                for g in range(self.order):
                    if g in s:
                        continue
                    t = self.closure(list(s) + [g])
                    if t not in subs:
                        subs.add(t)
                        new.append(t)
            frontier = new
        return sorted(subs, key=lambda s: (len(s), s))

    def is_normal(self, sub: Sequence[int]) -> bool:
        s = set(sub)
        return all(self.conj(g, x) in s for g in range(self.order) for x in sub)

    def subgroup(self, elements: Sequence[int], name: str = "") -> tuple["FiniteGroup", "GroupMap"]:
        """The subgroup on ``elements`` relabeled 0..n-1 (sorted order) with its inclusion."""
        elems = sorted(int(e) for e in elements)
        index = {e: i for i, e in enumerate(elems)}
        table = np.array([[index[int(self.table[a, b])] for b in elems] for a in elems], dtype=np.int64)
        sub = make_group(table, name=name)
        return sub, GroupMap(sub, self, np.array(elems, dtype=np.int64))

    def to_json(self) -> dict:
        return {"name": self.name, "order": self.order, "table": self.table.tolist()}

    @classmethod
    def from_json(cls, data: dict) -> "FiniteGroup":
        table = np.array(data["table"], dtype=np.int64)
        if table.shape != (data["order"], data["order"]):
            raise GroupError("order does not match table shape")
        return make_group(table, name=data.get("name", ""))


def make_group(table, name: str = "") -> FiniteGroup:
    """Validate a multiplication table and wrap it as a FiniteGroup."""
    t = np.asarray(table, dtype=np.int64)
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        raise GroupError(f"table must be a nonempty square array, got shape {t.shape}")
    n = t.shape[0]
    if t.min() < 0 or t.max() >= n:
        raise GroupError("table entries out of range")
    full = np.arange(n)
    for i in range(n):
        if not np.array_equal(np.sort(t[i]), full):
            raise NotLatinSquare(f"row {i} is not a permutation")
        if not np.array_equal(np.sort(t[:, i]), full):
            raise NotLatinSquare(f"column {i} is not a permutation")
    if not (np.array_equal(t[0], full) and np.array_equal(t[:, 0], full)):
        raise NoIdentity("element 0 is not a two-sided identity")
    for x in range(n):
        left = np.flatnonzero(t[x] == 0)
        if len(left) != 1 or t[left[0], x] != 0:
            raise NoInverse(f"element {x} has no two-sided inverse")
    # (xy)z == x(yz) for all triples, vectorized
    lhs = t[t[:, :, None], full[None, None, :]]
    rhs = t[full[:, None, None], t[None, :, :]]
    bad = np.argwhere(lhs != rhs)
    if len(bad):
        x, y, z = (int(v) for v in bad[0])
        raise NotAssociative(f"({x}*{y})*{z} != {x}*({y}*{z})")
    return FiniteGroup(n, t, name)


@dataclass(frozen=True, eq=False)
class GroupMap:
    source: FiniteGroup
    target: FiniteGroup
    images: np.ndarray

    def __call__(self, x):
        return self.images[x]

    def is_homomorphism(self) -> bool:
        im = self.images
        return bool(np.array_equal(im[self.source.table], self.target.table[im[:, None], im[None, :]]))

    def is_bijective(self) -> bool:
        return self.source.order == self.target.order and len(set(self.images.tolist())) == self.source.order

    def compose(self, other: "GroupMap") -> "GroupMap":
        """self after other"""
        return GroupMap(other.source, self.target, self.images[other.images])

    def inverse(self) -> "GroupMap":
        inv = np.empty_like(self.images)
        inv[self.images] = np.arange(len(self.images))
        return GroupMap(self.target, self.source, inv)


def identity_map(G: FiniteGroup) -> GroupMap:
    return GroupMap(G, G, np.arange(G.order, dtype=np.int64))


def _extend(G: FiniteGroup, H: FiniteGroup, gen_images: Sequence[int]) -> Optional[np.ndarray]:
    """Extend generator images along G's word tree; None if not a homomorphism."""
    img = np.zeros(G.order, dtype=np.int64)
    gi = dict(zip(G.generators, gen_images))
    order = _bfs_order(G)
    for x in order[1:]:
        parent, g = G.words[x]
        img[x] = H.table[img[parent], gi[g]]
    if not np.array_equal(img[G.table], H.table[img[:, None], img[None, :]]):
        return None
    return img


def _bfs_order(G: FiniteGroup) -> list[int]:
    seen = [0]
    frontier = [0]
    mark = {0}
    while frontier:
        new = []
        for x in frontier:
            for g in G.generators:
                y = int(G.table[x, g])
                if y not in mark:
                    mark.add(y)
                    new.append(y)
        seen.extend(new)
        frontier = new
    return seen


def homomorphisms(G: FiniteGroup, H: FiniteGroup, bijective: bool = False) -> Iterator[GroupMap]:
    """All homomorphisms G -> H (isomorphisms if ``bijective``), by generator images.

    Candidate images are filtered by element order (order of the image divides
    the order of the generator; equal for bijections) and tried in ascending order.
    """
    if bijective and G.order != H.order:
        return
    cands = []
    for g in G.generators:
        og = int(G.element_orders[g])
        if bijective:
            c = [h for h in range(H.order) if H.element_orders[h] == og]
        else:
            c = [h for h in range(H.order) if og % int(H.element_orders[h]) == 0]
        cands.append(c)
    for choice in itertools.product(*cands):
        if bijective and len(set(choice)) < len(choice):
            continue
        img = _extend(G, H, choice)
        if img is None:
            continue
        if bijective and len(set(img.tolist())) != G.order:
            continue
        yield GroupMap(G, H, img)


def automorphisms(G: FiniteGroup) -> list[GroupMap]:
    return list(homomorphisms(G, G, bijective=True))


def _order_stats(G: FiniteGroup) -> list[int]:
    return sorted(G.element_orders.tolist())


def find_isomorphism(G: FiniteGroup, H: FiniteGroup) -> Optional[GroupMap]:
    if G.order != H.order or _order_stats(G) != _order_stats(H):
        return None
    if G.is_abelian != H.is_abelian:
        return None
    return next(homomorphisms(G, H, bijective=True), None)


# ---------------------------------------------------------------------------
# constructors and the catalog

def cyclic(n: int, name: str = "") -> FiniteGroup:
    i = np.arange(n)
    return make_group((i[:, None] + i[None, :]) % n, name=name or f"Z{n}")


def abelian(factors: Sequence[int], name: str = "") -> FiniteGroup:
    """Product of cyclic groups, elements in lexicographic coordinate order."""
    factors = list(factors)
    coords = list(itertools.product(*[range(d) for d in factors]))
    index = {c: i for i, c in enumerate(coords)}
    table = np.array(
        [[index[tuple((a + b) % d for a, b, d in zip(x, y, factors))] for y in coords] for x in coords],
        dtype=np.int64,
    )
    if not factors:
        table = np.zeros((1, 1), dtype=np.int64)
    return make_group(table, name=name or "x".join(f"Z{d}" for d in factors) or "1")


def dihedral8() -> FiniteGroup:
    # index i < 4 is a^i, index 4 + r is b a^r
    def split(x):
        return (x // 4, x % 4)

    def mul(x, y):
        s, r = split(x)
        t, u = split(y)
        # a^r b = b a^-r
        rr = (-r if t else r) + u
        return 4 * ((s + t) % 2) + rr % 4

    return make_group([[mul(x, y) for y in range(8)] for x in range(8)], name="D8")


_QUAT = {  # unit products among 1, i, j, k as (sign, unit)
    (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
    (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
    (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
    (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
}


def quaternion8() -> FiniteGroup:
    # ordering 1, -1, i, -i, j, -j, k, -k
    def split(x):
        return (-1 if x % 2 else 1, x // 2)

    def mul(x, y):
        s, u = split(x)
        t, v = split(y)
        w, unit = _QUAT[u, v]
        sign = s * t * w
        return 2 * unit + (0 if sign == 1 else 1)

    return make_group([[mul(x, y) for y in range(8)] for x in range(8)], name="Q8")


CATALOG_NAMES = ("Z2^3", "Z4xZ2", "Z8", "D8", "Q8")


def catalog_order8() -> list[FiniteGroup]:
    return [
        abelian([2, 2, 2], "Z2^3"),
        abelian([4, 2], "Z4xZ2"),
        cyclic(8, "Z8"),
        dihedral8(),
        quaternion8(),
    ]


_CATALOG: Optional[list[FiniteGroup]] = None


def catalog() -> list[FiniteGroup]:
    global _CATALOG
    if _CATALOG is None:
        _CATALOG = catalog_order8()
    return _CATALOG


def catalog_group(name: str) -> FiniteGroup:
    aliases = {"Z2^3": "Z2^3", "(Z2)^3": "Z2^3", "Z2xZ2xZ2": "Z2^3", "Z4xZ2": "Z4xZ2", "Z2xZ4": "Z4xZ2"}
    key = aliases.get(name, name)
    for G in catalog():
        if G.name.lower() == key.lower():
            return G
    raise KeyError(f"unknown group {name!r}; choose from {', '.join(CATALOG_NAMES)}")


def identify(G: FiniteGroup) -> tuple[int, GroupMap]:
    """Index of the catalog group isomorphic to G and an isomorphism G -> catalog group."""
    for i, H in enumerate(catalog()):
        phi = find_isomorphism(G, H)
        if phi is not None:
            return i, phi
    raise GroupError(f"{G!r} is not isomorphic to a catalog group of order 8")


def load_group(path) -> FiniteGroup:
    with open(path) as fh:
        return FiniteGroup.from_json(json.load(fh))


# ---------------------------------------------------------------------------
# finite abelian groups with an action


@dataclass(frozen=True, eq=False)
class FiniteModule:
    """Abelian group Z/d_1 + ... + Z/d_r (d_1 | d_2 | ...) with a left action.

    ``action[g]`` is an integer r x r matrix acting on coordinate column
    vectors; entry [i, j] maps coordinate j into coordinate i mod d_i.
    """

    invariant_factors: tuple[int, ...]
    acting_group: FiniteGroup
    action: np.ndarray

    def __post_init__(self):
        self.action.setflags(write=False)

    def __repr__(self):
        fac = "+".join(f"Z{d}" for d in self.invariant_factors) or "0"
        kind = "trivial" if self.is_trivial_action else "twisted"
        return f"FiniteModule({fac}, {kind} action of {self.acting_group.name or '?'})"

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def size(self) -> int:
        return int(np.prod(self.invariant_factors, dtype=np.int64)) if self.rank else 1

    @property
    def moduli(self) -> np.ndarray:
        return np.array(self.invariant_factors, dtype=np.int64)

    @cached_property
    def exponent(self) -> int:
        return max(self.invariant_factors, default=1)

    @cached_property
    def is_trivial_action(self) -> bool:
        return all(np.array_equal(m, np.eye(self.rank, dtype=np.int64)) for m in self.action)

    def reduce(self, x: np.ndarray) -> np.ndarray:
        return np.mod(x, self.moduli) if self.rank else np.asarray(x)

    def act(self, g: int, x) -> np.ndarray:
        return self.reduce(self.action[g] @ np.asarray(x, dtype=np.int64))

    def right_act(self, x, g: int) -> np.ndarray:
        return self.act(int(self.acting_group.inverse[g]), x)

    @cached_property
    def elements(self) -> np.ndarray:
        """All elements as coordinate rows, in index order."""
        if not self.rank:
            return np.zeros((1, 0), dtype=np.int64)
        grids = np.indices(self.invariant_factors).reshape(self.rank, -1).T
        return grids.astype(np.int64)

    def index(self, x) -> int:
        if not self.rank:
            return 0
        return int(np.ravel_multi_index(tuple(np.mod(x, self.moduli)), self.invariant_factors))

    def indices(self, xs: np.ndarray) -> np.ndarray:
        """Vectorized ``index`` over the last axis."""
        if not self.rank:
            return np.zeros(xs.shape[:-1], dtype=np.int64)
        xs = np.mod(xs, self.moduli)
        return np.ravel_multi_index(tuple(np.moveaxis(xs, -1, 0)), self.invariant_factors)


def make_module(invariant_factors: Sequence[int], K: FiniteGroup, action=None) -> FiniteModule:
    """Validate and build a K-module.  ``action=None`` means trivial action."""
    d = tuple(int(x) for x in invariant_factors)
    for a, b in zip(d, d[1:]):
        if b % a:
            raise GroupError(f"invariant factors must form a divisor chain, got {d}")
    if any(x < 2 for x in d):
        raise GroupError("invariant factors must be >= 2")
    r = len(d)
    if action is None:
        mats = np.broadcast_to(np.eye(r, dtype=np.int64), (K.order, r, r)).copy()
    else:
        mats = np.array(action, dtype=np.int64).reshape(K.order, r, r)
    mod = FiniteModule(d, K, mats)
    if r:
        moduli = mod.moduli
        for g in range(K.order):
            m = mats[g]
            # entry [i, j] must be well defined on Z/d_j into Z/d_i
            for i in range(r):
                for j in range(r):
                    if (m[i, j] * d[j]) % d[i]:
                        raise GroupError(f"action matrix of {g} is not well defined at ({i},{j})")
            img = np.mod(mod.elements @ m.T, moduli)
            if len({tuple(v) for v in img.tolist()}) != mod.size:
                raise GroupError(f"action of {g} is not invertible")
        if not np.array_equal(np.mod(mats[0], moduli[:, None]), np.mod(np.eye(r, dtype=np.int64), moduli[:, None])):
            raise GroupError("identity does not act trivially")
        els = mod.elements.T
        for g in range(K.order):
            for h in range(K.order):
                lhs = np.mod(mats[g] @ (mats[h] @ els), moduli[:, None])
                rhs = np.mod(mats[K.table[g, h]] @ els, moduli[:, None])
                if not np.array_equal(lhs, rhs):
                    raise GroupError(f"action is not a homomorphism at ({g},{h})")
    return mod


def pairing(module: FiniteModule, rho, a) -> np.ndarray:
    """<rho, a> in Q/Z as numerators over the exponent of the module.

    Works on broadcast coordinate arrays (last axis is the coordinate).
    """
    e = module.exponent
    scale = np.array([e // d for d in module.invariant_factors], dtype=np.int64)
    rho = np.asarray(rho, dtype=np.int64)
    a = np.asarray(a, dtype=np.int64)
    return np.mod(np.sum(rho * a * scale, axis=-1), e)


def dual_module(A: FiniteModule) -> FiniteModule:
    """Character group Hom(A, C*) with the same invariant factors.

    The natural action is the right action rho^k(a) = rho(k.a); the returned
    module stores it as the left action k.rho = rho^(k^-1), so that
    ``dual.right_act(rho, k)`` is rho^k.
    """
    K = A.acting_group
    d = A.invariant_factors
    r = A.rank
    right = np.zeros((K.order, r, r), dtype=np.int64)
    for k in range(K.order):
        m = A.action[k]
        for i in range(r):
            for j in range(r):
                # (rho^k)_j = sum_i rho_i m[i, j] d_j / d_i
                num = m[i, j] * d[j]
                assert num % d[i] == 0
                right[k, j, i] = num // d[i]
    left = right[K.inverse]
    return make_module(d, K, left)
