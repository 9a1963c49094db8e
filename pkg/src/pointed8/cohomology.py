"""Normalized bar-resolution cohomology of finite groups.

Coefficients are one of

* ``"int"``   -- the integers with trivial action,
* ``"torus"`` -- C* written additively as Q/Z, restricted to values with
  denominator 2^k (k = ``Config.max_denominator_exp``), trivial action,
* a :class:`~pointed8.groups.FiniteModule` whose invariant factors are powers of 2.

Cochains are stored as full value tensors of shape (|G|,)*n (plus a trailing
coordinate axis for module coefficients).  Normalization -- value zero
whenever an argument is the identity -- is an invariant, and the linear
algebra only ever sees the (|G|-1)^n entries with non-identity arguments.

Torus cohomology H^n(G, C*) is computed as H^{n+1}(G, Z) through the
connecting map of 0 -> Z -> Q -> Q/Z -> 0: the torsion of the cokernel of the
integral coboundary delta_n is read off a Smith form over Z/2^k, and a column
v of the column transform with invariant factor d gives the torus cocycle v/d.
"""

from __future__ import annotations

import itertools
import json
import logging
import math
import os
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Optional, Sequence, Union

import numpy as np

from .exactlinalg import ModSolver, mulmod, smith_mod2k, smith_normal_form
from .groups import FiniteGroup, FiniteModule, GroupMap, NotACocycle

log = logging.getLogger(__name__)

INT = "int"
TORUS = "torus"
Coefficients = Union[str, FiniteModule]

DEFAULT_K = 12
# dense matrices beyond this many entries are refused
MAX_DENSE = 60_000_000


class NotInGroup(RuntimeError):
    """The coordinate solver found no solution for a verified cocycle."""


class StabilizationError(RuntimeError):
    pass


@dataclass(frozen=True)
class TorusValue:
    """numerator / 2^denominator_exp mod 1, kept reduced."""

    numerator: int
    denominator_exp: int

    @classmethod
    def make(cls, numerator: int, denominator_exp: int) -> "TorusValue":
        n, e = numerator % (1 << denominator_exp), denominator_exp
        while e > 0 and n % 2 == 0:
            n //= 2
            e -= 1
        if n == 0:
            e = 0
        return cls(n, e)

    def __add__(self, other: "TorusValue") -> "TorusValue":
        e = max(self.denominator_exp, other.denominator_exp)
        a = self.numerator << (e - self.denominator_exp)
        b = other.numerator << (e - other.denominator_exp)
        return TorusValue.make(a + b, e)

    def __neg__(self) -> "TorusValue":
        return TorusValue.make(-self.numerator, self.denominator_exp)

    def __sub__(self, other):
        return self + (-other)

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.denominator_exp)

    def __str__(self):
        return f"{self.numerator}/{1 << self.denominator_exp}" if self.numerator else "0"


def coeff_label(coeffs: Coefficients) -> str:
    if isinstance(coeffs, str):
        return coeffs
    fac = ",".join(str(d) for d in coeffs.invariant_factors)
    acts = coeffs.action.reshape(coeffs.acting_group.order, -1).tolist()
    return f"module[{fac}]{acts}"


@dataclass(frozen=True, eq=False)
class Cochain:
    group: FiniteGroup
    degree: int
    coeffs: Coefficients
    values: np.ndarray
    denom_exp: int = 0  # torus only

    def __post_init__(self):
        m, n = self.group.order, self.degree
        want = (m,) * n + ((self.coeffs.rank,) if isinstance(self.coeffs, FiniteModule) else ())
        if self.values.shape != want:
            raise ValueError(f"cochain values have shape {self.values.shape}, expected {want}")

    # construction helpers -------------------------------------------------
    @classmethod
    def zero(cls, G: FiniteGroup, n: int, coeffs: Coefficients, k: int = DEFAULT_K) -> "Cochain":
        shape = (G.order,) * n + ((coeffs.rank,) if isinstance(coeffs, FiniteModule) else ())
        return cls(G, n, coeffs, np.zeros(shape, dtype=np.int64), k if coeffs == TORUS else 0)

    @classmethod
    def from_function(cls, G: FiniteGroup, n: int, coeffs: Coefficients, fn: Callable, k: int = DEFAULT_K) -> "Cochain":
        """Build from fn(*args); torus values are Fractions or TorusValues."""
        c = cls.zero(G, n, coeffs, k)
        vals = c.values.copy()
        for args in itertools.product(range(G.order), repeat=n):
            if 0 in args:
                continue
            v = fn(*args)
            if coeffs == TORUS:
                fr = v.as_fraction() if isinstance(v, TorusValue) else Fraction(v)
                num = fr * (1 << k)
                if num.denominator != 1:
                    raise ValueError(f"value {fr} needs a denominator beyond 2^{k}")
                vals[args] = int(num) % (1 << k)
            else:
                vals[args] = v
        return c.with_values(vals)

    def with_values(self, values: np.ndarray) -> "Cochain":
        return Cochain(self.group, self.degree, self.coeffs, _reduce(values, self.coeffs, self.denom_exp), self.denom_exp)

    # arithmetic -----------------------------------------------------------
    def at_exp(self, k: int) -> "Cochain":
        """Torus cochain re-expressed over 2^k (k >= current exponent)."""
        if self.coeffs != TORUS or k == self.denom_exp:
            return self
        if k < self.denom_exp:
            shift = self.denom_exp - k
            if np.any(self.values % (1 << shift)):
                raise ValueError("cannot lower the denominator exponent")
            return Cochain(self.group, self.degree, TORUS, self.values >> shift, k)
        return Cochain(self.group, self.degree, TORUS, self.values << (k - self.denom_exp), k)

    def _align(self, other: "Cochain") -> tuple["Cochain", "Cochain"]:
        if other.group is not self.group and not np.array_equal(other.group.table, self.group.table):
            raise ValueError("cochains live on different groups")
        if other.degree != self.degree or coeff_label(other.coeffs) != coeff_label(self.coeffs):
            raise ValueError("cochains have different degree or coefficients")
        if self.coeffs == TORUS:
            e = max(self.denom_exp, other.denom_exp)
            return self.at_exp(e), other.at_exp(e)
        return self, other

    def __add__(self, other: "Cochain") -> "Cochain":
        a, b = self._align(other)
        return a.with_values(a.values + b.values)

    def __sub__(self, other: "Cochain") -> "Cochain":
        a, b = self._align(other)
        return a.with_values(a.values - b.values)

    def __neg__(self) -> "Cochain":
        return self.with_values(-self.values)

    def scale(self, c: int) -> "Cochain":
        return self.with_values(self.values * int(c))

    def __eq__(self, other):
        if not isinstance(other, Cochain):
            return NotImplemented
        try:
            a, b = self._align(other)
        except ValueError:
            return False
        return bool(np.array_equal(a.values, b.values))

    __hash__ = object.__hash__

    def is_zero(self) -> bool:
        return not np.any(self.values)

    def is_normalized(self) -> bool:
        n = self.degree
        for i in range(n):
            sl = [slice(None)] * n
            sl[i] = 0
            if np.any(self.values[tuple(sl)]):
                return False
        return True

    def value(self, *args):
        v = self.values[tuple(args)]
        if self.coeffs == TORUS:
            return TorusValue.make(int(v), self.denom_exp)
        return v

    def normalized_vector(self) -> np.ndarray:
        """Entries with non-identity arguments, flattened (coordinate axis last)."""
        sl = (slice(1, None),) * self.degree
        return self.values[sl].reshape(-1)

    @classmethod
    def from_normalized_vector(cls, G: FiniteGroup, n: int, coeffs: Coefficients, vec, k: int = DEFAULT_K) -> "Cochain":
        c = cls.zero(G, n, coeffs, k)
        vals = c.values.copy()
        sl = (slice(1, None),) * n
        vals[sl] = np.asarray(vec, dtype=np.int64).reshape(vals[sl].shape)
        return c.with_values(vals)


def _reduce(values: np.ndarray, coeffs: Coefficients, denom_exp: int) -> np.ndarray:
    values = np.asarray(values, dtype=np.int64)
    if coeffs == TORUS:
        return values % (1 << denom_exp)
    if isinstance(coeffs, FiniteModule):
        return np.mod(values, coeffs.moduli) if coeffs.rank else values
    return values


# ---------------------------------------------------------------------------
# coboundary


def coboundary(f: Cochain) -> Cochain:
    """Normalized bar differential; the first face uses the group action."""
    G, n = f.group, f.degree
    m = G.order
    T = G.table
    vals = f.values
    module = f.coeffs if isinstance(f.coeffs, FiniteModule) else None
    tail = vals.shape[n:]
    shape = (m,) * (n + 1) + tail
    idx = list(np.indices((m,) * (n + 1), dtype=np.int64))
    out = np.zeros(shape, dtype=np.int64)

    first = np.broadcast_to(vals[tuple(idx[1:])] if n else vals, shape)
    if module is not None and not module.is_trivial_action:
        mats = module.action[idx[0]]
        first = np.einsum("...ij,...j->...i", mats, first)
    out += first
    for i in range(1, n + 1):
        args = idx[: i - 1] + [T[idx[i - 1], idx[i]]] + idx[i + 1:]
        out += (-1) ** i * vals[tuple(args)]
    last = np.broadcast_to(vals[tuple(idx[:n])] if n else vals, shape)
    out += (-1) ** (n + 1) * last
    return Cochain(G, n + 1, f.coeffs, _reduce(out, f.coeffs, f.denom_exp), f.denom_exp)


def is_cocycle(f: Cochain) -> bool:
    return coboundary(f).is_zero()


def _tuples(m: int, n: int) -> np.ndarray:
    """All n-tuples of non-identity elements, row-major, as an (count, n) array."""
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return (np.indices((m - 1,) * n, dtype=np.int64).reshape(n, -1).T + 1)


def _encode(args: Sequence[np.ndarray], m: int, length: int) -> tuple[np.ndarray, np.ndarray]:
    """Normalized column index of argument tuples, and the mask of identity-free ones."""
    mask = np.ones(length, dtype=bool)
    col = np.zeros(length, dtype=np.int64)
    for a in args:
        mask &= a != 0
        col = col * (m - 1) + (a - 1)
    return col, mask


def coboundary_matrix(G: FiniteGroup, n: int, module: Optional[FiniteModule] = None) -> np.ndarray:
    """Matrix of delta_n on normalized cochains.

    Integral/trivial coefficients: integer matrix of shape (|G|-1)^(n+1) x (|G|-1)^n.
    Module coefficients: rows/columns are (tuple, coordinate) pairs, and the
    entries are those of the map on the embedding of A into (Z/e)^r
    (coordinate i scaled by e/d_i, e the exponent).
    """
    m = G.order
    r = module.rank if module is not None else 1
    rows_t = _tuples(m, n + 1)
    R, C = len(rows_t), (m - 1) ** n
    if R * r * C * r > MAX_DENSE:
        raise ValueError(f"coboundary matrix {R * r} x {C * r} is too large for dense elimination")
    M = np.zeros((R * r, C * r), dtype=np.int64)
    if R == 0 or C == 0:
        return M
    T = G.table
    g = [rows_t[:, i] for i in range(n + 1)]
    ridx = np.arange(R)

    def add(args, sign, block=None):
        col, mask = _encode(args, m, R)
        rr, cc = ridx[mask], col[mask]
        if module is None:
            np.add.at(M, (rr, cc), sign)
            return
        for i in range(r):
            for j in range(r):
                if block is None:
                    if i != j:
                        continue
                    w = np.full(len(rr), sign, dtype=np.int64)
                else:
                    w = block[mask][:, i, j] * sign
                if np.any(w):
                    np.add.at(M, (rr * r + i, cc * r + j), w)

    if module is not None:
        d = module.invariant_factors
        scaled = module.action.copy()
        for i in range(r):
            for j in range(r):
                scaled[:, i, j] = scaled[:, i, j] * d[j] // d[i]
        add(g[1:], 1, scaled[g[0]])
    else:
        add(g[1:], 1)
    for i in range(1, n + 1):
        add(g[: i - 1] + [T[g[i - 1], g[i]]] + g[i + 1:], (-1) ** i)
    add(g[:n], (-1) ** (n + 1))
    return M


# ---------------------------------------------------------------------------
# cohomology groups


@dataclass(eq=False)
class CohomologyGroup:
    group: FiniteGroup
    degree: int
    coeffs: Coefficients
    invariant_factors: tuple[int, ...]
    basis: list[Cochain]
    k: int
    _solve: Callable[[Cochain], Optional[np.ndarray]] = field(repr=False, default=None)

    @property
    def size(self) -> int:
        return math.prod(self.invariant_factors)

    def coordinates(self, f: Cochain) -> tuple[int, ...]:
        return class_coordinates(self, f)

    def element(self, coords: Sequence[int]) -> Cochain:
        acc = Cochain.zero(self.group, self.degree, self.coeffs, self.k)
        for c, b in zip(coords, self.basis):
            if c:
                acc = acc + b.scale(c)
        return acc

    def elements(self) -> Iterator[tuple[int, ...]]:
        return itertools.product(*[range(d) for d in self.invariant_factors])

    def order_of(self, coords: Sequence[int]) -> int:
        o = 1
        for c, d in zip(coords, self.invariant_factors):
            o = math.lcm(o, d // math.gcd(int(c), d))
        return o

    def reduce(self, coords: Sequence[int]) -> tuple[int, ...]:
        return tuple(int(c) % d for c, d in zip(coords, self.invariant_factors))

    def add(self, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
        return self.reduce([x + y for x, y in zip(a, b)])


def class_coordinates(H: CohomologyGroup, f: Cochain) -> tuple[int, ...]:
    """Coordinates of the class of f in the basis of H."""
    if f.degree != H.degree or coeff_label(f.coeffs) != coeff_label(H.coeffs):
        raise ValueError("cochain does not match the cohomology group")
    if f.group is not H.group and not np.array_equal(f.group.table, H.group.table):
        raise ValueError("cochain lives on a different group")
    if not is_cocycle(f):
        raise NotACocycle(f"degree-{f.degree} cochain is not a cocycle")
    if not H.invariant_factors:
        return ()
    c = H._solve(f)
    if c is None:
        raise NotInGroup("coordinate solver infeasible for a cocycle")
    return H.reduce(c)


def _torsion_positions(diagonal: Sequence[int], k: int) -> list[tuple[int, int]]:
    return [(i, int(d)) for i, d in enumerate(diagonal) if d not in (0, 1)]


def _torus_from_snf(G: FiniteGroup, n: int, k: int) -> tuple[tuple[int, ...], list[np.ndarray]]:
    """Invariant factors of torsion(coker delta_n) and the columns v_i mod d_i."""
    M = coboundary_matrix(G, n)
    snf = smith_mod2k(M, k, want_u=False, want_v=True)
    pos = _torsion_positions(snf.diagonal, k)
    facs = tuple(d for _, d in pos)
    cols = [snf.V[:, i] % d for i, d in pos]
    return facs, cols


def _torus_group(G: FiniteGroup, n: int, k: int, basis_vecs=None, facs=None, stabilize=True) -> CohomologyGroup:
    if n < 1:
        raise ValueError("torus cohomology is only finite in positive degree")
    if basis_vecs is None:
        facs, cols = _torus_from_snf(G, n, k)
        if stabilize:
            facs2, _ = _torus_from_snf(G, n, k + 1)
            if facs2 != facs:
                raise StabilizationError(f"H^{n}({G.name}, torus): {facs} at k={k} but {facs2} at k={k + 1}")
        if facs and max(facs) >= (1 << (k - 1)):
            raise StabilizationError("invariant factor too close to the working modulus")
        basis_vecs = [(v * ((1 << k) // d)) % (1 << k) for v, d in zip(cols, facs)]
    basis = [Cochain.from_normalized_vector(G, n, TORUS, v, k) for v in basis_vecs]
    r = len(basis)
    # combined system [basis | delta_{n-1}] over 2^(k+3): room for witnesses with larger denominators
    ks = k + 3
    prev = coboundary_matrix(G, n - 1)
    cols = [b.normalized_vector()[:, None] * 8 for b in basis]
    sysmat = np.concatenate(cols + [prev], axis=1)
    solver = ModSolver(sysmat, ks)

    def solve(f: Cochain):
        x = solver.solve(f.at_exp(k).normalized_vector() * 8)
        return None if x is None else x[:r]

    return CohomologyGroup(G, n, TORUS, tuple(facs), basis, k, solve)


def _integral_group(G: FiniteGroup, n: int, k: int, stabilize=True) -> CohomologyGroup:
    if n < 1:
        raise ValueError("integral H^0 is Z, not a finite group")
    if n == 1:
        return CohomologyGroup(G, 1, INT, (), [], k, lambda f: np.zeros(0, dtype=np.int64))
    T = torus_cohomology(G, n - 1, k, stabilize=stabilize)
    # Bockstein: the integral lift of v/d has coboundary delta(v)/d
    dm = coboundary_matrix(G, n - 1)
    basis = []
    for b, d in zip(T.basis, T.invariant_factors):
        v = b.normalized_vector() // ((1 << k) // d)
        w = dm @ v
        assert not np.any(w % d)
        basis.append(Cochain.from_normalized_vector(G, n, INT, w // d))
    solver_box: dict = {}
    e = max(T.invariant_factors, default=1)

    def solve(f: Cochain):
        # connecting inverse: rational f~ with delta f~ = c, via delta w = e c mod 2^(k+3)
        if "s" not in solver_box:
            solver_box["s"] = ModSolver(dm, k + 3)
        w = solver_box["s"].solve(f.normalized_vector() * e)
        if w is None:
            return None
        tor = Cochain.from_normalized_vector(G, n - 1, TORUS, (w % e) * ((1 << k) // e), k)
        return np.array(class_coordinates(T, tor), dtype=np.int64)

    return CohomologyGroup(G, n, INT, T.invariant_factors, basis, k, solve)


def _module_group(G: FiniteGroup, n: int, A: FiniteModule, k: int, stabilize=True) -> CohomologyGroup:
    if A.acting_group is not G and not np.array_equal(A.acting_group.table, G.table):
        raise ValueError("module is not over this group")
    if any(d & (d - 1) for d in A.invariant_factors):
        raise ValueError("only 2-power invariant factors are supported")
    if A.rank == 0:
        return CohomologyGroup(G, n, A, (), [], k, lambda f: np.zeros(0, dtype=np.int64))
    facs, basis_vecs, solve = _module_subquotient(G, n, A, k)
    if stabilize:
        facs2, _, _ = _module_subquotient(G, n, A, k + 1)
        if facs2 != facs:
            raise StabilizationError(f"H^{n}({G.name}, {A}): {facs} at k={k} but {facs2} at k={k + 1}")
    basis = [Cochain.from_normalized_vector(G, n, A, v) for v in basis_vecs]
    return CohomologyGroup(G, n, A, facs, basis, k, solve)


def _module_subquotient(G: FiniteGroup, n: int, A: FiniteModule, k: int):
    w = max(k, int(A.exponent).bit_length() - 1)
    N = 1 << w
    r = A.rank
    scale = np.array([N // d for d in A.invariant_factors], dtype=np.int64)
    s_n = np.tile(scale, (G.order - 1) ** n)
    E_n = coboundary_matrix(G, n, A)
    Kx = ModSolver(E_n * s_n[None, :], w).kernel()           # x with E_n(s x) = 0
    P = (s_n[:, None] * Kx.T) % N                              # embedded cocycles, as columns
    if n > 0:
        s_prev = np.tile(scale, (G.order - 1) ** (n - 1))
        R = (coboundary_matrix(G, n - 1, A) * s_prev[None, :]) % N
    else:
        R = np.zeros((P.shape[0], 0), dtype=np.int64)
    Psolver = ModSolver(P, w)
    p = P.shape[1]
    T = []
    for j in range(R.shape[1]):
        t = Psolver.solve(R[:, j])
        assert t is not None, "coboundary outside the cocycles"
        T.append(t)
    if p == 0:
        return (), [], lambda f: np.zeros(0, dtype=np.int64)
    relations = [Psolver.kernel()] + ([np.array(T, dtype=np.int64)] if T else [])
    W = np.concatenate(relations, axis=0).T
    snf = smith_mod2k(W, w, want_u=True, want_v=False, want_u_inv=True)
    facs, gens, rows = [], [], []
    for i in range(p):
        d = snf.diagonal[i] if i < len(snf.diagonal) else 0
        f = N if d == 0 else math.gcd(int(d), N)
        if f > 1:
            facs.append(f)
            gens.append(mulmod(P, snf.U_inv[:, [i]], N)[:, 0])
            rows.append(i)
    basis_vecs = [(g // s_n) % np.tile(A.moduli, len(g) // r) for g in gens]
    for g in gens:
        assert not np.any(g % s_n), "generator outside the module"
    U_rows = snf.U[rows] if rows else np.zeros((0, p), dtype=np.int64)

    def solve(f: Cochain):
        y = (f.normalized_vector() * s_n) % N
        t = Psolver.solve(y)
        if t is None:
            return None
        return mulmod(U_rows, t[:, None], N)[:, 0]

    return tuple(facs), basis_vecs, solve


_MEMO: dict = {}


def cohomology_group(G: FiniteGroup, n: int, coeffs: Coefficients = TORUS, k: int = DEFAULT_K,
                     stabilize: bool = True, cache_dir: Optional[str] = None) -> CohomologyGroup:
    """H^n(G, coeffs) with basis representatives and a coordinate solver."""
    key = (G.key, n, coeff_label(coeffs), k)
    if key in _MEMO:
        return _MEMO[key]
    if coeffs == TORUS:
        H = torus_cohomology(G, n, k, stabilize=stabilize, cache_dir=cache_dir)
    elif coeffs == INT:
        H = _integral_group(G, n, k, stabilize=stabilize)
    elif isinstance(coeffs, FiniteModule):
        H = _module_group(G, n, coeffs, k, stabilize=stabilize)
    else:
        raise ValueError(f"unknown coefficients {coeffs!r}")
    _MEMO[key] = H
    return H


def torus_cohomology(G: FiniteGroup, n: int, k: int = DEFAULT_K, stabilize: bool = True,
                     cache_dir: Optional[str] = None) -> CohomologyGroup:
    key = (G.key, n, TORUS, k)
    if key in _MEMO:
        return _MEMO[key]
    H = None
    if cache_dir:
        H = _load_cached(G, n, k, cache_dir)
    if H is None:
        H = _torus_group(G, n, k, stabilize=stabilize)
        if cache_dir:
            _save_cached(H, cache_dir)
    _MEMO[key] = H
    return H


def torus_h3(G: FiniteGroup, k: int = DEFAULT_K, cache_dir: Optional[str] = None) -> CohomologyGroup:
    return torus_cohomology(G, 3, k, cache_dir=cache_dir)


def clear_memo():
    _MEMO.clear()


# ---------------------------------------------------------------------------
# cache files


def _cache_path(cache_dir: str, G: FiniteGroup, n: int, k: int) -> str:
    return os.path.join(cache_dir, f"h{n}_{G.key}_torus_k{k}.json")


def _save_cached(H: CohomologyGroup, cache_dir: str):
    os.makedirs(cache_dir, exist_ok=True)
    doc = {
        "group_hash": H.group.key,
        "degree": H.degree,
        "coeffs": TORUS,
        "k": H.k,
        "invariant_factors": list(H.invariant_factors),
        "basis": [
            {
                "values": [[list(map(int, idx)), int(b.values[idx])] for idx in zip(*np.nonzero(b.values))],
                "denominator_exp": b.denom_exp,
            }
            for b in H.basis
        ],
    }
    fd, tmp = tempfile.mkstemp(dir=cache_dir, suffix=".tmp")
    with os.fdopen(fd, "w") as fh:
        json.dump(doc, fh)
    os.replace(tmp, _cache_path(cache_dir, H.group, H.degree, H.k))


def _load_cached(G: FiniteGroup, n: int, k: int, cache_dir: str) -> Optional[CohomologyGroup]:
    path = _cache_path(cache_dir, G, n, k)
    if not os.path.exists(path):
        return None
    with open(path) as fh:
        doc = json.load(fh)
    if doc["group_hash"] != G.key or doc["degree"] != n or doc["k"] != k:
        return None
    vecs = []
    for b in doc["basis"]:
        c = Cochain.zero(G, n, TORUS, k)
        vals = c.values.copy()
        for idx, num in b["values"]:
            vals[tuple(idx)] = num
        vecs.append(c.with_values(vals).normalized_vector())
    H = _torus_group(G, n, k, basis_vecs=vecs, facs=tuple(doc["invariant_factors"]))
    for b in H.basis:
        if not is_cocycle(b):
            log.warning("cache entry %s is corrupt; recomputing", path)
            return None
    log.debug("loaded %s", path)
    return H


# ---------------------------------------------------------------------------
# functoriality


def pullback(phi: GroupMap, f: Cochain) -> Cochain:
    """(phi^* f)(h_1..h_n) = f(phi h_1, .., phi h_n)."""
    if phi.target is not f.group and not np.array_equal(phi.target.table, f.group.table):
        raise ValueError("map target is not the cochain's group")
    im = phi.images
    n = f.degree
    vals = f.values[np.ix_(*([im] * n))] if n else f.values
    coeffs = f.coeffs
    if isinstance(coeffs, FiniteModule):
        from .groups import make_module

        coeffs = make_module(coeffs.invariant_factors, phi.source, coeffs.action[im])
    return Cochain(phi.source, n, coeffs, np.array(vals), f.denom_exp)


def inflation(pi: GroupMap, f: Cochain) -> Cochain:
    if len(set(pi.images.tolist())) != pi.target.order:
        raise ValueError("inflation needs a surjective projection")
    return pullback(pi, f)


def restriction(G: FiniteGroup, subgroup: Sequence[int], f: Cochain) -> tuple[FiniteGroup, Cochain]:
    """Restrict f to the subgroup on the given elements (relabeled in sorted order)."""
    S, inc = G.subgroup(subgroup, name=f"{G.name}|{len(subgroup)}")
    return S, pullback(inc, f)


# ---------------------------------------------------------------------------
# Q8 periodic resolution


def q8_periodic_complex():
    """Differentials of the periodic free resolution of Z over Z[Q8].

    Ring elements are dicts {element index: coefficient} in the catalog
    ordering 1, -1, i, -i, j, -j, k, -k.  Maps act by right multiplication
    on row vectors: a -> a M.
    """
    one, i, j = 0, 2, 4
    from .groups import quaternion8

    Q = quaternion8()
    ij = int(Q.table[i, j])

    def el(*terms):
        d: dict = {}
        for c, g in terms:
            d[g] = d.get(g, 0) + c
        return d

    N = {g: 1 for g in range(8)}
    d1 = [[el((1, i), (-1, one))], [el((1, j), (-1, one))]]
    d2 = [[el((1, i), (1, one)), el((-1, j), (-1, one))],
          [el((1, ij), (1, one)), el((1, i), (-1, one))]]
    d3 = [[el((1, i), (-1, one)), el((-1, ij), (1, one))]]
    d4 = [[N]]
    return Q, {1: d1, 2: d2, 3: d3, 4: d4}


def _ring_mul(Q: FiniteGroup, a: dict, b: dict) -> dict:
    out: dict = {}
    for g, x in a.items():
        for h, y in b.items():
            gh = int(Q.table[g, h])
            out[gh] = out.get(gh, 0) + x * y
    return {g: c for g, c in out.items() if c}


def ring_matmul(Q: FiniteGroup, A: list, B: list) -> list:
    rows, inner, cols = len(A), len(B), len(B[0])
    out = []
    for r in range(rows):
        row = []
        for c in range(cols):
            acc: dict = {}
            for t in range(inner):
                for g, x in _ring_mul(Q, A[r][t], B[t][c]).items():
                    acc[g] = acc.get(g, 0) + x
            row.append({g: v for g, v in acc.items() if v})
        out.append(row)
    return out


def q8_periodic_h(n: int) -> list[int]:
    """H^n(Q8, Z) for n >= 1 from the periodic resolution: invariant factors."""
    Q, d = q8_periodic_complex()

    def hom_matrix(i):
        # Hom_{ZQ8}(-, Z) turns a -> a M into the augmentation matrix acting on cochains
        i = (i - 1) % 4 + 1
        M = d[i]
        return [[sum(e.values()) for e in row] for row in M]

    # P_n -> P_{n-1} is delta_{((n-1) mod 4) + 1}; cochain map C^{n-1} -> C^n is its augmentation matrix
    def coboundary_into(n):
        return hom_matrix(n)  # rows: generators of P_n, cols: generators of P_{n-1}

    into = coboundary_into(n)        # C^{n-1} -> C^n, shape rank(P_n) x rank(P_{n-1})
    out = coboundary_into(n + 1)     # C^n -> C^{n+1}
    # kernel of `out` (as a map on column vectors of length rank P_n) modulo image of `into`
    out_snf = smith_normal_form(out)
    rank_n = len(into)
    ker_dim = rank_n - out_snf.rank
    # kernel basis = last columns of V; express im(into) in those coordinates via V^-1
    into_np = np.array(into, dtype=object)
    Vinv = _int_inverse(out_snf.V)
    coords = _matmul_obj_list(Vinv, into_np)[out_snf.rank:, :]
    if coords.size == 0:
        return [0] * ker_dim
    snf = smith_normal_form(coords)
    facs = [int(x) for x in snf.diagonal if x not in (0, 1)]
    free = ker_dim - snf.rank
    return facs + [0] * free


def q8_periodic_h4() -> list[int]:
    return q8_periodic_h(4)


def _matmul_obj_list(a, b):
    from .exactlinalg import _matmul_obj

    return _matmul_obj(np.array(a, dtype=object), np.array(b, dtype=object))


def _int_inverse(V: np.ndarray) -> np.ndarray:
    """Inverse of a unimodular integer matrix by exact Gauss-Jordan over Q."""
    n = V.shape[0]
    A = [[Fraction(int(V[i, j])) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for c in range(n):
        p = next(r for r in range(c, n) if A[r][c] != 0)
        A[c], A[p] = A[p], A[c]
        pv = A[c][c]
        A[c] = [x / pv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    inv = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            x = A[i][n + j]
            assert x.denominator == 1
            inv[i, j] = int(x)
    return inv
