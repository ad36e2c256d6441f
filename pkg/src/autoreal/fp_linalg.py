"""Dense exact linear algebra over a prime field F_p.

Matrices are row-major int64 arrays with entries reduced into [0, p).  The
modulus is capped at 2**16 so a dot product of up to a few thousand terms
fits in a machine word before reduction.

Vectors crossing the public API are plain tuples of ints.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import DimensionError, InvariantError

MAX_MODULUS = 1 << 16

Vector = tuple


@lru_cache(maxsize=None)
def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def check_prime(p: int) -> int:
    if not isinstance(p, (int, np.integer)) or not is_prime(int(p)):
        raise InvariantError(f"modulus {p!r} is not prime")
    if p > MAX_MODULUS:
        raise InvariantError(f"modulus {p} exceeds {MAX_MODULUS}")
    return int(p)


def as_vector(p: int, values: Iterable[int]) -> Vector:
    return tuple(int(v) % p for v in values)


class FpMatrix:
    """Immutable matrix over F_p."""

    __slots__ = ("p", "_a")

    def __init__(self, p: int, entries, cols: Optional[int] = None):
        self.p = check_prime(p)
        a = np.array(entries, dtype=np.int64)
        if a.size == 0:
            rows = a.shape[0] if a.ndim >= 1 else 0
            a = np.zeros((rows, cols if cols is not None else 0), dtype=np.int64)
        if a.ndim != 2:
            raise DimensionError(f"expected a 2-d array, got shape {a.shape}")
        a %= self.p
        a.setflags(write=False)
        self._a = a

    @classmethod
    def _wrap(cls, p: int, a: np.ndarray) -> "FpMatrix":
        # trusted constructor: a is already reduced and owned
        m = object.__new__(cls)
        m.p = p
        a.setflags(write=False)
        m._a = a
        return m

    @classmethod
    def identity(cls, p: int, n: int) -> "FpMatrix":
        return cls._wrap(check_prime(p), np.eye(n, dtype=np.int64))

    @classmethod
    def zeros(cls, p: int, rows: int, cols: int) -> "FpMatrix":
        return cls._wrap(check_prime(p), np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def from_columns(cls, p: int, columns: Sequence[Sequence[int]], rows: int) -> "FpMatrix":
        if not columns:
            return cls.zeros(p, rows, 0)
        a = np.array(columns, dtype=np.int64).T.copy()
        if a.shape[0] != rows:
            raise DimensionError("column length does not match row count")
        return cls(p, a)

    @property
    def entries(self) -> np.ndarray:
        return self._a

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._a.shape

    @property
    def T(self) -> "FpMatrix":
        return FpMatrix._wrap(self.p, self._a.T.copy())

    def tolist(self) -> list[list[int]]:
        return self._a.tolist()

    def column(self, k: int) -> Vector:
        return tuple(int(x) for x in self._a[:, k])

    def __repr__(self) -> str:
        return f"FpMatrix(p={self.p}, {self.tolist()})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, FpMatrix):
            return NotImplemented
        return self.p == other.p and self.shape == other.shape and bool(np.array_equal(self._a, other._a))

    def __hash__(self) -> int:
        return hash((self.p, self.shape, self._a.tobytes()))

    def _same_field(self, other: "FpMatrix") -> None:
        if self.p != other.p:
            raise DimensionError(f"field mismatch: F_{self.p} vs F_{other.p}")

    def __add__(self, other: "FpMatrix") -> "FpMatrix":
        self._same_field(other)
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")
        return FpMatrix._wrap(self.p, (self._a + other._a) % self.p)

    def __sub__(self, other: "FpMatrix") -> "FpMatrix":
        self._same_field(other)
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")
        return FpMatrix._wrap(self.p, (self._a - other._a) % self.p)

    def __neg__(self) -> "FpMatrix":
        return FpMatrix._wrap(self.p, (-self._a) % self.p)

    def scale(self, c: int) -> "FpMatrix":
        return FpMatrix._wrap(self.p, (self._a * (int(c) % self.p)) % self.p)

    def __matmul__(self, other):
        if isinstance(other, FpMatrix):
            self._same_field(other)
            if self.cols != other.rows:
                raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
            return FpMatrix._wrap(self.p, (self._a @ other._a) % self.p)
        v = np.asarray(other, dtype=np.int64)
        if v.ndim != 1 or v.shape[0] != self.cols:
            raise DimensionError(f"vector of length {v.shape} does not fit {self.shape}")
        return tuple(int(x) for x in (self._a @ (v % self.p)) % self.p)

    def power(self, k: int) -> "FpMatrix":
        if self.rows != self.cols:
            raise DimensionError("power of a non-square matrix")
        if k < 0:
            return self.inverse().power(-k)
        result = np.eye(self.rows, dtype=np.int64)
        base = self._a
        while k:
            if k & 1:
                result = (result @ base) % self.p
            k >>= 1
            if k:
                base = (base @ base) % self.p
        return FpMatrix._wrap(self.p, result)

    def is_zero(self) -> bool:
        return not self._a.any()

    def is_identity(self) -> bool:
        return self.rows == self.cols and bool(np.array_equal(self._a, np.eye(self.rows, dtype=np.int64)))

    def inverse(self) -> "FpMatrix":
        if self.rows != self.cols:
            raise DimensionError("inverse of a non-square matrix")
        n = self.rows
        aug = np.concatenate([self._a, np.eye(n, dtype=np.int64)], axis=1)
        red, pivots = _rref(aug, self.p, limit=n)
        if len(pivots) < n:
            raise InvariantError("matrix is singular")
        return FpMatrix._wrap(self.p, red[:, n:].copy())


def block_diag(blocks: Sequence[FpMatrix], p: Optional[int] = None) -> FpMatrix:
    if not blocks:
        return FpMatrix.zeros(p, 0, 0)
    p = blocks[0].p
    n = sum(b.rows for b in blocks)
    m = sum(b.cols for b in blocks)
    a = np.zeros((n, m), dtype=np.int64)
    r = c = 0
    for b in blocks:
        a[r:r + b.rows, c:c + b.cols] = b.entries
        r += b.rows
        c += b.cols
    return FpMatrix._wrap(p, a)


def _rref(a: np.ndarray, p: int, limit: Optional[int] = None) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of a copy of `a`; pivots searched in the first `limit` columns."""
    a = a.copy()
    rows, cols = a.shape
    limit = cols if limit is None else limit
    pivots: list[int] = []
    r = 0
    for c in range(limit):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = (a[r] * pow(int(a[r, c]), -1, p)) % p
        col = a[:, c].copy()
        col[r] = 0
        if col.any():
            a = (a - np.outer(col, a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rref(m: FpMatrix) -> tuple[FpMatrix, list[int]]:
    red, pivots = _rref(m.entries, m.p)
    return FpMatrix._wrap(m.p, red), pivots


def rank(m: FpMatrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    return len(_rref(m.entries, m.p)[1])


def kernel_basis(m: FpMatrix) -> list[Vector]:
    """Right null space basis, one vector per free column in ascending order.

    Each basis vector has a 1 in its free column and zeros in all other free
    columns, so the output is canonical for a given matrix.
    """
    p, cols = m.p, m.cols
    if m.rows == 0:
        return [tuple(int(i == k) for i in range(cols)) for k in range(cols)]
    red, pivots = _rref(m.entries, p)
    pivot_set = set(pivots)
    basis = []
    for f in range(cols):
        if f in pivot_set:
            continue
        x = np.zeros(cols, dtype=np.int64)
        x[f] = 1
        for i, pc in enumerate(pivots):
            x[pc] = (-red[i, f]) % p
        basis.append(tuple(int(v) for v in x))
    return basis


def solve(m: FpMatrix, b: Sequence[int]) -> Optional[Vector]:
    """Some x with m @ x == b, free variables set to zero; None if inconsistent."""
    if len(b) != m.rows:
        raise DimensionError(f"right-hand side has length {len(b)}, expected {m.rows}")
    p, cols = m.p, m.cols
    rhs = np.asarray(b, dtype=np.int64).reshape(-1, 1) % p
    aug = np.concatenate([m.entries, rhs], axis=1)
    red, pivots = _rref(aug, p)
    if pivots and pivots[-1] == cols:
        return None
    if not pivots and rhs.any():
        return None
    x = np.zeros(cols, dtype=np.int64)
    for i, pc in enumerate(pivots):
        x[pc] = red[i, cols]
    return tuple(int(v) for v in x)


def image_basis(m: FpMatrix) -> list[Vector]:
    """Basis of the column space: the pivot columns of m, in order."""
    if m.rows == 0 or m.cols == 0:
        return []
    _, pivots = _rref(m.entries, m.p)
    return [m.column(c) for c in pivots]


class EchelonBasis:
    """Incrementally grown span inside F_p^dim.

    Vectors are reduced against the stored rows in insertion order; a stored
    row is zero at every earlier pivot, which keeps the reduction exact.
    """

    def __init__(self, p: int, dim: int, vectors: Iterable[Sequence[int]] = ()):
        self.p = p
        self.dim = dim
        self._rows: list[tuple[int, np.ndarray]] = []
        for v in vectors:
            self.add(v)

    def __len__(self) -> int:
        return len(self._rows)

    def reduce(self, v: Sequence[int]) -> np.ndarray:
        w = np.asarray(v, dtype=np.int64) % self.p
        for pc, row in self._rows:
            c = w[pc]
            if c:
                w = (w - c * row) % self.p
        return w

    def contains(self, v: Sequence[int]) -> bool:
        return not self.reduce(v).any()

    def add(self, v: Sequence[int]) -> bool:
        w = self.reduce(v)
        nz = np.flatnonzero(w)
        if nz.size == 0:
            return False
        pc = int(nz[0])
        w = (w * pow(int(w[pc]), -1, self.p)) % self.p
        self._rows.append((pc, w))
        return True
