"""The group ring R = F_p[G] for G cyclic of order p^n, and its quotients M_j.

Elements are stored in the rho-power basis, rho = sigma - 1.  Since
rho^(p^n) = 0 in characteristic p, R is the truncated polynomial ring
F_p[rho]/(rho^(p^n)) and M_j is F_p[rho]/(rho^j).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Sequence

import numpy as np

from .errors import BoundError, DimensionError, InvariantError, ParseError
from .fp_linalg import FpMatrix, check_prime, solve

DEFAULT_ORDER_BOUND = 3**5


@dataclass(frozen=True)
class GroupRingContext:
    p: int
    n: int
    bound: int = DEFAULT_ORDER_BOUND

    def __post_init__(self):
        check_prime(self.p)
        if not isinstance(self.n, int) or self.n < 1:
            raise InvariantError(f"n must be a positive integer, got {self.n!r}")
        if self.p**self.n > self.bound:
            raise BoundError(f"p^n = {self.p ** self.n} exceeds the bound {self.bound}")

    @property
    def order(self) -> int:
        return self.p**self.n

    def element(self, coeffs_rho: Sequence[int]) -> "GroupRingElement":
        return GroupRingElement(self, tuple(coeffs_rho))

    def one(self) -> "GroupRingElement":
        return self.rho_power(0)

    def rho_power(self, k: int) -> "GroupRingElement":
        c = [0] * self.order
        if k < self.order:
            c[k] = 1
        return GroupRingElement(self, tuple(c))

    def quotient(self, j: int) -> "QuotientRing":
        return QuotientRing(self, j)


@dataclass(frozen=True)
class GroupRingElement:
    ctx: GroupRingContext
    coeffs_rho: tuple

    def __post_init__(self):
        if len(self.coeffs_rho) != self.ctx.order:
            raise DimensionError(f"expected {self.ctx.order} coefficients, got {len(self.coeffs_rho)}")
        object.__setattr__(self, "coeffs_rho", tuple(int(c) % self.ctx.p for c in self.coeffs_rho))

    def __mul__(self, other: "GroupRingElement") -> "GroupRingElement":
        return mul(self, other)

    def __add__(self, other: "GroupRingElement") -> "GroupRingElement":
        _same_ctx(self, other)
        return GroupRingElement(self.ctx, tuple(a + b for a, b in zip(self.coeffs_rho, other.coeffs_rho)))

    def __sub__(self, other: "GroupRingElement") -> "GroupRingElement":
        _same_ctx(self, other)
        return GroupRingElement(self.ctx, tuple(a - b for a, b in zip(self.coeffs_rho, other.coeffs_rho)))

    def is_zero(self) -> bool:
        return not any(self.coeffs_rho)

    def coeffs_sigma(self) -> tuple:
        return rho_to_sigma(self.ctx, self.coeffs_rho)


def _same_ctx(a: GroupRingElement, b: GroupRingElement) -> None:
    if a.ctx.p != b.ctx.p or a.ctx.n != b.ctx.n:
        raise DimensionError("group ring elements live in different rings")


@lru_cache(maxsize=None)
def _sigma_to_rho_matrix(p: int, order: int) -> np.ndarray:
    # column k holds sigma^k = (1 + rho)^k
    return np.array([[comb(k, a) % p for k in range(order)] for a in range(order)], dtype=np.int64)


@lru_cache(maxsize=None)
def _rho_to_sigma_matrix(p: int, order: int) -> np.ndarray:
    # column a holds rho^a = (sigma - 1)^a
    return np.array(
        [[(comb(a, k) * (-1) ** (a - k)) % p if k <= a else 0 for a in range(order)] for k in range(order)],
        dtype=np.int64,
    )


def sigma_to_rho(ctx: GroupRingContext, coeffs_sigma: Sequence[int]) -> GroupRingElement:
    """Convert coefficients of sigma^0..sigma^(p^n-1) into a rho-basis element."""
    if len(coeffs_sigma) != ctx.order:
        raise DimensionError(f"expected {ctx.order} sigma-coefficients, got {len(coeffs_sigma)}")
    m = _sigma_to_rho_matrix(ctx.p, ctx.order)
    c = (m @ (np.asarray(coeffs_sigma, dtype=np.int64) % ctx.p)) % ctx.p
    return GroupRingElement(ctx, tuple(int(x) for x in c))


def rho_to_sigma(ctx: GroupRingContext, coeffs_rho: Sequence[int]) -> tuple:
    if len(coeffs_rho) != ctx.order:
        raise DimensionError(f"expected {ctx.order} rho-coefficients, got {len(coeffs_rho)}")
    m = _rho_to_sigma_matrix(ctx.p, ctx.order)
    c = (m @ (np.asarray(coeffs_rho, dtype=np.int64) % ctx.p)) % ctx.p
    return tuple(int(x) for x in c)


def _truncated_product(a: Sequence[int], b: Sequence[int], length: int, p: int) -> tuple:
    prod = np.convolve(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))[:length] % p
    out = [0] * length
    out[: len(prod)] = (int(x) for x in prod)
    return tuple(out)


def mul(a: GroupRingElement, b: GroupRingElement) -> GroupRingElement:
    _same_ctx(a, b)
    return GroupRingElement(a.ctx, _truncated_product(a.coeffs_rho, b.coeffs_rho, a.ctx.order, a.ctx.p))


@dataclass(frozen=True)
class QuotientRing:
    """M_j = R / (rho^j); elements are length-j rho-power coefficient tuples."""

    ctx: GroupRingContext
    j: int

    def __post_init__(self):
        if not 1 <= self.j <= self.ctx.order:
            raise InvariantError(f"j must lie in [1, {self.ctx.order}], got {self.j}")

    @property
    def p(self) -> int:
        return self.ctx.p

    def _check(self, a: Sequence[int]) -> tuple:
        if len(a) != self.j:
            raise DimensionError(f"element of M_{self.j} must have length {self.j}, got {len(a)}")
        return tuple(int(x) % self.p for x in a)

    def basis(self, k: int) -> tuple:
        return tuple(int(i == k) for i in range(self.j))

    def mul(self, a: Sequence[int], b: Sequence[int]) -> tuple:
        return _truncated_product(self._check(a), self._check(b), self.j, self.p)

    def reduce(self, x: GroupRingElement) -> tuple:
        """Image of a group ring element in M_j."""
        return x.coeffs_rho[: self.j]

    def sigma_matrix(self) -> FpMatrix:
        """Action of sigma = 1 + rho on the rho-power basis (ones below the diagonal)."""
        return FpMatrix(self.p, np.eye(self.j, dtype=np.int64) + np.eye(self.j, k=-1, dtype=np.int64))

    def mul_matrix(self, a: Sequence[int]) -> FpMatrix:
        a = self._check(a)
        cols = [self.mul(a, self.basis(k)) for k in range(self.j)]
        return FpMatrix.from_columns(self.p, cols, self.j)

    def ideal_basis(self, k: int) -> list[tuple]:
        """F_p-basis of the ideal rho^k M_j."""
        return [self.basis(i) for i in range(k, self.j)]

    def inverse(self, a: Sequence[int]):
        """Multiplicative inverse of a, or None when a lies in the maximal ideal."""
        return solve(self.mul_matrix(a), self.basis(0))


def lam(mj: QuotientRing, a: Sequence[int]) -> int:
    """The functional M_j -> F_p reading off the top rho-power coefficient."""
    return mj._check(a)[mj.j - 1]


def form_q(mj: QuotientRing, a: Sequence[int], b: Sequence[int]) -> int:
    return lam(mj, mj.mul(a, b))


def psi_matrix(mj: QuotientRing) -> FpMatrix:
    """Gram matrix of Q in the rho-power basis; row u is the functional psi(rho^u)."""
    rows = [[form_q(mj, mj.basis(u), mj.basis(v)) for v in range(mj.j)] for u in range(mj.j)]
    return FpMatrix(mj.p, rows, cols=mj.j)


def element_to_json(x: GroupRingElement, basis: str = "rho") -> dict:
    if basis == "rho":
        coeffs = list(x.coeffs_rho)
    elif basis == "sigma":
        coeffs = list(x.coeffs_sigma())
    else:
        raise ValueError(f"unknown basis {basis!r}")
    return {"p": x.ctx.p, "n": x.ctx.n, "basis": basis, "coeffs": coeffs}


def element_from_json(obj: dict, bound: int = DEFAULT_ORDER_BOUND) -> GroupRingElement:
    try:
        ctx = GroupRingContext(int(obj["p"]), int(obj["n"]), bound)
        basis = obj.get("basis", "rho")
        coeffs = [int(c) for c in obj["coeffs"]]
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, (BoundError, InvariantError)):
            raise
        raise ParseError(f"malformed group ring element: {exc}") from exc
    if basis == "rho":
        return GroupRingElement(ctx, tuple(coeffs))
    if basis == "sigma":
        return sigma_to_rho(ctx, coeffs)
    raise ParseError(f"unknown basis {basis!r}")
