"""Exact linear algebra over Z and over the chain rings Z/2^k.

Matrices are numpy arrays: ``dtype=object`` (Python ints) for the integer
Smith form, ``int64`` residues in [0, 2^k) for everything modular.  With
k <= 20 and the matrix sizes used here, int64 products never overflow.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass
from typing import Optional

import numpy as np

MAX_EXP = 24

# when on, every decomposition is re-multiplied against its input
_VERIFY = {"on": False, "checked": 0}


@contextmanager
def verified_decompositions():
    """Check U A V == D on every Smith decomposition made inside the block.

    Yields a dict whose ``checked`` entry counts the decompositions verified.
    """
    prev = _VERIFY["on"]
    _VERIFY["on"] = True
    start = _VERIFY["checked"]
    stats = {"checked": 0}
    try:
        yield stats
    finally:
        stats["checked"] = _VERIFY["checked"] - start
        _VERIFY["on"] = prev


def _verify(snf: "SmithDecomposition", A) -> None:
    snf.check(A)
    _VERIFY["checked"] += 1


@dataclass
class SmithDecomposition:
    """U @ A @ V == D, with D diagonal (d_1 | d_2 | ...) padded by zeros.

    ``modulus`` is None over Z, else 2^k.  ``U_inv`` is only filled when asked for.
    """

    diagonal: list
    U: Optional[np.ndarray]
    V: Optional[np.ndarray]
    shape: tuple[int, int]
    modulus: Optional[int] = None
    U_inv: Optional[np.ndarray] = None

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)

    @property
    def invariant_factors(self) -> list:
        return [d for d in self.diagonal if d != 0]

    def D(self) -> np.ndarray:
        m, n = self.shape
        dtype = object if self.modulus is None else np.int64
        D = np.zeros((m, n), dtype=dtype)
        for i, d in enumerate(self.diagonal):
            D[i, i] = d
        return D

    def check(self, A) -> bool:
        """Re-multiply and compare; raises AssertionError on mismatch."""
        if self.U is None or self.V is None:
            raise ValueError("transforms were not recorded")
        if self.modulus is None:
            prod = _matmul_obj(_matmul_obj(self.U, np.asarray(A, dtype=object)), self.V)
            ok = np.array_equal(prod, self.D())
        else:
            prod = mulmod(mulmod(self.U, np.asarray(A, dtype=np.int64) % self.modulus, self.modulus), self.V, self.modulus)
            ok = np.array_equal(prod, self.D())
        assert ok, "U A V != D"
        if self.U_inv is not None and self.modulus is not None:
            eye = mulmod(self.U, self.U_inv, self.modulus)
            assert np.array_equal(eye, np.eye(self.shape[0], dtype=np.int64)), "U_inv is not an inverse"
        return True


def _matmul_obj(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    m, k = a.shape
    k2, n = b.shape
    assert k == k2
    out = np.empty((m, n), dtype=object)
    for i in range(m):
        for j in range(n):
            out[i, j] = sum((a[i, t] * b[t, j] for t in range(k)), 0)
    return out


def mulmod(a: np.ndarray, b: np.ndarray, modulus: int) -> np.ndarray:
    """(a @ b) mod modulus without int64 overflow for modulus <= 2^MAX_EXP."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.shape[-1] == 0:
        return np.zeros(a.shape[:-1] + b.shape[1:], dtype=np.int64)
    # split b into 12-bit halves so each partial product stays below 2^63
    lo = b & 0xFFF
    hi = b >> 12
    r = (a @ lo) % modulus
    r = (r + ((a @ hi) % modulus) * 4096) % modulus
    return r


# ---------------------------------------------------------------------------
# Smith normal form over Z


def smith_normal_form(A) -> SmithDecomposition:
    """Integer Smith normal form with transforms.

    Pivot rule: least absolute value among the remaining entries, ties broken
    by lowest (row, column).  Entries are Python ints, so nothing overflows.
    """
    A = np.array(A, dtype=object)
    if A.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    m, n = A.shape
    M = A.copy()
    U = np.eye(m, dtype=object) if m else np.zeros((0, 0), dtype=object)
    V = np.eye(n, dtype=object) if n else np.zeros((0, 0), dtype=object)
    for i in range(m):
        for j in range(n):
            M[i, j] = int(M[i, j])
    for i in range(m):
        U[i, i] = 1
    for j in range(n):
        V[j, j] = 1
    diag = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = M[i, j]
                if v != 0 and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        _, i, j = best
        M[[t, i]] = M[[i, t]]
        U[[t, i]] = U[[i, t]]
        M[:, [t, j]] = M[:, [j, t]]
        V[:, [t, j]] = V[:, [j, t]]
        while True:
            p = M[t, t]
            dirty = False
            for i in range(t + 1, m):
                if M[i, t] != 0:
                    q = M[i, t] // p
                    M[i] = M[i] - q * M[t]
                    U[i] = U[i] - q * U[t]
                    if M[i, t] != 0:
                        dirty = True
            for j in range(t + 1, n):
                if M[t, j] != 0:
                    q = M[t, j] // p
                    M[:, j] = M[:, j] - q * M[:, t]
                    V[:, j] = V[:, j] - q * V[:, t]
                    if M[t, j] != 0:
                        dirty = True
            if dirty:
                # move the smallest remainder in row/column t to the pivot
                best = (abs(p), t, t)
                for i in range(t + 1, m):
                    if M[i, t] != 0 and abs(M[i, t]) < best[0]:
                        best = (abs(M[i, t]), i, t)
                for j in range(t + 1, n):
                    if M[t, j] != 0 and abs(M[t, j]) < best[0]:
                        best = (abs(M[t, j]), t, j)
                _, i, j = best
                if i != t:
                    M[[t, i]] = M[[i, t]]
                    U[[t, i]] = U[[i, t]]
                if j != t:
                    M[:, [t, j]] = M[:, [j, t]]
                    V[:, [t, j]] = V[:, [j, t]]
                continue
            # divisibility of the remaining block
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if M[i, j] % p != 0:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            M[t] = M[t] + M[bad]
            U[t] = U[t] + U[bad]
        if M[t, t] < 0:
            M[t] = -M[t]
            U[t] = -U[t]
        diag.append(M[t, t])
        t += 1
    diag += [0] * (min(m, n) - len(diag))
    out = SmithDecomposition(diag, U, V, (m, n), None)
    if _VERIFY["on"]:
        _verify(out, A)
    return out


# ---------------------------------------------------------------------------
# Z/2^k


def valuation(x: np.ndarray, k: int) -> np.ndarray:
    """2-adic valuation of residues mod 2^k; zero has valuation k."""
    x = np.asarray(x, dtype=np.int64)
    low = x & (-x)
    v = np.zeros(x.shape, dtype=np.int64)
    nz = low != 0
    v[nz] = np.log2(low[nz]).astype(np.int64)
    v[~nz] = k
    return v


def smith_mod2k(A, k: int, want_u: bool = True, want_v: bool = True, want_u_inv: bool = False) -> SmithDecomposition:
    """Smith normal form over Z/2^k with optional transforms.

    Pivot: least 2-adic valuation among the remaining entries, ties broken by
    lowest (row, column).  Diagonal entries come out as powers of two (or 0).
    """
    if not 1 <= k <= MAX_EXP:
        raise ValueError(f"k must be in [1, {MAX_EXP}]")
    N = 1 << k
    M = np.array(A, dtype=np.int64) % N
    if M.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    checking = _VERIFY["on"]
    if checking:
        A0 = M.copy()
        keep = (want_u, want_v)
        want_u = want_v = True
    m, n = M.shape
    U = np.eye(m, dtype=np.int64) if want_u else None
    Ui = np.eye(m, dtype=np.int64) if want_u_inv else None
    V = np.eye(n, dtype=np.int64) if want_v else None
    diag = []
    for t in range(min(m, n)):
        sub = M[t:, t:]
        if not sub.any():
            break
        vals = valuation(sub, k)
        flat = int(np.argmin(vals))
        i, j = divmod(flat, sub.shape[1])
        i += t
        j += t
        a = int(vals.flat[flat])
        if i != t:
            M[[t, i]] = M[[i, t]]
            if U is not None:
                U[[t, i]] = U[[i, t]]
            if Ui is not None:
                Ui[:, [t, i]] = Ui[:, [i, t]]
        if j != t:
            M[:, [t, j]] = M[:, [j, t]]
            if V is not None:
                V[:, [t, j]] = V[:, [j, t]]
        unit = int(M[t, t]) >> a
        if unit != 1:
            inv = pow(unit, -1, N)
            M[t] = (M[t] * inv) % N
            if U is not None:
                U[t] = (U[t] * inv) % N
            if Ui is not None:
                Ui[:, t] = (Ui[:, t] * unit) % N
        # clear column t below the pivot
        col = M[t + 1:, t]
        rows = np.flatnonzero(col) + t + 1
        if len(rows):
            q = (M[rows, t] >> a).astype(np.int64)
            M[rows] = (M[rows] - q[:, None] * M[t][None, :]) % N
            if U is not None:
                U[rows] = (U[rows] - q[:, None] * U[t][None, :]) % N
            if Ui is not None:
                Ui[:, t] = (Ui[:, t] + mulmod(Ui[:, rows], q[:, None], N)[:, 0]) % N
        # clear row t right of the pivot (only row t changes in M)
        cols = np.flatnonzero(M[t, t + 1:]) + t + 1
        if len(cols):
            q = (M[t, cols] >> a).astype(np.int64)
            M[t, cols] = 0
            if V is not None:
                V[:, cols] = (V[:, cols] - V[:, [t]] * q[None, :]) % N
        diag.append(1 << a)
    diag += [0] * (min(m, n) - len(diag))
    out = SmithDecomposition(diag, U, V, (m, n), N, Ui)
    if checking:
        _verify(out, A0)
        out.U = U if keep[0] else None
        out.V = V if keep[1] else None
    return out


class ModSolver:
    """Repeated solves of A x = b (mod 2^k) from one Smith decomposition."""

    def __init__(self, A, k: int, verify: bool = True):
        self.k = k
        self.N = 1 << k
        self.A = np.array(A, dtype=np.int64) % self.N
        self.verify = verify
        self.snf = smith_mod2k(self.A, k, want_u=True, want_v=True)
        self.vals = np.array([valuation(np.array(d), k) if d else k for d in self.snf.diagonal], dtype=np.int64)

    def solve(self, b) -> Optional[np.ndarray]:
        N = self.N
        m, n = self.A.shape
        b = np.asarray(b, dtype=np.int64) % N
        c = mulmod(self.snf.U, b[:, None], N)[:, 0] if m else b
        y = np.zeros(n, dtype=np.int64)
        r = len(self.snf.diagonal)
        for i in range(r):
            a = int(self.vals[i])
            ci = int(c[i])
            if a >= self.k:
                if ci != 0:
                    return None
                continue
            if ci & ((1 << a) - 1):
                return None
            y[i] = ci >> a
        if np.any(c[r:] != 0):
            return None
        x = mulmod(self.snf.V, y[:, None], N)[:, 0] if n else y
        if self.verify:
            assert np.array_equal(mulmod(self.A, x[:, None], N)[:, 0] if n else np.zeros(m, dtype=np.int64), b), "solve_mod substitution failed"
        return x

    def kernel(self) -> np.ndarray:
        """Generators of {x : A x = 0} as rows (before Howell normalization)."""
        n = self.A.shape[1]
        gens = []
        for i in range(n):
            a = int(self.vals[i]) if i < len(self.vals) else self.k
            scale = 1 << (self.k - a) if a < self.k else 1
            if scale == self.N:
                continue
            gens.append((self.snf.V[:, i] * scale) % self.N)
        if not gens:
            return np.zeros((0, n), dtype=np.int64)
        return np.array(gens, dtype=np.int64)


def solve_mod(A, b, k: int) -> Optional[np.ndarray]:
    """Some x with A x = b (mod 2^k), or None."""
    return ModSolver(A, k).solve(b)


def howell_form(A, k: int) -> np.ndarray:
    """Howell normal form (reduced, zero rows removed) of the row span of A over Z/2^k.

    Pivots are powers of two, entries above a pivot are reduced below it, and
    for every row with pivot 2^a the row times 2^(k-a) lies in the span of the
    rows below it, which makes the form canonical for the row module.
    """
    N = 1 << k
    A = np.array(A, dtype=np.int64) % N
    ncols = A.shape[1]
    pool = [r for r in A if r.any()]
    out = []
    pivots = []
    for c in range(ncols):
        live = [r for r in pool if r[c] != 0]
        if not live:
            continue
        rest = [r for r in pool if r[c] == 0]
        vals = [int(valuation(np.array(r[c]), k)) for r in live]
        best = min(range(len(live)), key=lambda i: vals[i])
        a = vals[best]
        p = live[best].copy()
        unit = int(p[c]) >> a
        p = (p * pow(unit, -1, N)) % N
        for idx, r in enumerate(live):
            if idx == best:
                continue
            q = int(r[c]) >> a
            r2 = (r - q * p) % N
            if r2.any():
                rest.append(r2)
        if a > 0:
            ann = (p << (k - a)) % N
            if ann.any():
                rest.append(ann)
        out.append(p)
        pivots.append((c, a))
        pool = rest
    # reduce above pivots
    for idx, (c, a) in enumerate(pivots):
        mod = 1 << a
        for j in range(idx):
            q = int(out[j][c]) // mod
            if q:
                out[j] = (out[j] - q * out[idx]) % N
    if not out:
        return np.zeros((0, ncols), dtype=np.int64)
    return np.array(out, dtype=np.int64)


def kernel_mod(A, k: int) -> np.ndarray:
    """Generators (rows, in Howell form) of {x : A x = 0 mod 2^k}."""
    A = np.asarray(A, dtype=np.int64)
    solver = ModSolver(A, k)
    gens = solver.kernel()
    H = howell_form(gens, k) if len(gens) else gens
    if len(H):
        assert not (mulmod(A % (1 << k), H.T, 1 << k)).any(), "kernel_mod substitution failed"
    return H


def in_rowspan_howell(H: np.ndarray, x, k: int) -> bool:
    """Membership test against a Howell form."""
    N = 1 << k
    x = np.asarray(x, dtype=np.int64) % N
    for row in H:
        c = int(np.flatnonzero(row)[0])
        a = int(valuation(np.array(row[c]), k))
        if x[c] % (1 << a):
            return False
        x = (x - (int(x[c]) >> a) * row) % N
    return not x.any()
