"""The twisted Drinfeld double D^eta(H) as an algebra.

Basis delta_g (x) x for g, x in H, with

    (delta_g x)(delta_h y) = [g = x h x^-1] theta_g(x, y) delta_g (xy)
    theta_g(x, y) = eta(g, x, y) + eta(x, y, (xy)^-1 g (xy)) - eta(x, x^-1 g x, y)

in additive torus notation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .cohomology import TORUS, Cochain, is_cocycle
from .config import Config
from .groups import FiniteGroup, NotACocycle


class AssociativityFailure(RuntimeError):
    pass


class CensusInconsistent(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class DoubleAlgebra:
    group: FiniteGroup
    eta: Cochain
    theta: np.ndarray        # theta[g, x, y], numerators over 2^denom_exp

    @property
    def denom_exp(self) -> int:
        return self.eta.denom_exp

    @property
    def dimension(self) -> int:
        return self.group.order ** 2

    def product(self, a: tuple[int, int], b: tuple[int, int]) -> Optional[tuple[int, tuple[int, int]]]:
        """(coefficient numerator, basis pair) of a*b, or None when the product vanishes."""
        G = self.group
        (g, x), (h, y) = a, b
        if g != G.conj(x, h):
            return None
        return int(self.theta[g, x, y]), (g, int(G.table[x, y]))


def theta_table(H: FiniteGroup, eta: Cochain) -> np.ndarray:
    T, inv = H.table, H.inverse
    g, x, y = np.indices((H.order,) * 3)
    xy = T[x, y]
    e = eta.values
    conj_xy = T[T[inv[xy], g], xy]            # (xy)^-1 g (xy)
    conj_x = T[T[inv[x], g], x]               # x^-1 g x
    return (e[g, x, y] + e[x, y, conj_xy] - e[x, conj_x, y]) % (1 << eta.denom_exp)


def check_associativity(D: DoubleAlgebra) -> None:
    """theta_g(x,y) + theta_g(xy,z) == theta_{x^-1 g x}(y,z) + theta_g(x,yz) for all g, x, y, z."""
    H, th = D.group, D.theta
    T, inv = H.table, H.inverse
    g, x, y, z = np.indices((H.order,) * 4)
    lhs = th[g, x, y] + th[g, T[x, y], z]
    rhs = th[T[T[inv[x], g], x], y, z] + th[g, x, T[y, z]]
    bad = np.argwhere((lhs - rhs) % (1 << D.denom_exp))
    if len(bad):
        raise AssociativityFailure(f"twisted double is not associative at (g,x,y,z)={tuple(bad[0])}")


def build_double(H: FiniteGroup, eta: Cochain, verify: bool = True) -> DoubleAlgebra:
    if eta.coeffs != TORUS or eta.degree != 3:
        raise ValueError("eta must be a torus-valued 3-cochain")
    if not eta.is_normalized() or not is_cocycle(eta):
        raise NotACocycle("eta is not a normalized 3-cocycle")
    D = DoubleAlgebra(H, eta, theta_table(H, eta))
    if verify:
        check_associativity(D)
    return D


def is_commutative(D: DoubleAlgebra) -> bool:
    """Compare a*b with b*a over all pairs of basis elements."""
    H, th = D.group, D.theta
    T, inv = H.table, H.inverse
    g, x, h, y = np.indices((H.order,) * 4)
    conj = lambda u, v: T[T[u, v], inv[u]]
    ab_live = g == conj(x, h)
    ba_live = h == conj(y, g)
    if not np.array_equal(ab_live, ba_live):
        return False
    live = ab_live
    # both nonzero: results (g, xy) and (h, yx) must coincide with equal coefficients
    same = (g == h) & (T[x, y] == T[y, x]) & (th[g, x, y] == th[h, y, x])
    return bool(np.all(same[live]))


@dataclass(frozen=True)
class DoubleCensus:
    commutative: tuple[int, ...]       # Morita class indices
    noncommutative: tuple[int, ...]

    @property
    def counts(self) -> tuple[int, int]:
        return len(self.commutative), len(self.noncommutative)

    def to_json(self) -> dict:
        return {"commutative": list(self.commutative), "noncommutative": list(self.noncommutative)}


def double_census(partition=None, config: Config = Config()) -> DoubleCensus:
    """Commutativity of D^eta(H) for every tensor class, grouped by Morita class."""
    if partition is None:
        from .morita import morita_partition

        partition = morita_partition(config=config)
    census = partition.census
    comm, noncomm = [], []
    for i, members in enumerate(partition.classes):
        verdicts = set()
        for m in members:
            c = census.classes[m]
            table = census.tables[c.group_index]
            D = build_double(table.group, table.h3.element(c.canonical))
            verdicts.add(is_commutative(D))
        if len(verdicts) != 1:
            raise CensusInconsistent(f"Morita class {i} mixes commutative and noncommutative doubles")
        (comm if verdicts.pop() else noncomm).append(i)
    return DoubleCensus(tuple(comm), tuple(noncomm))
