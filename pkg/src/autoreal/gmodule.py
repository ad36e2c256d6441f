"""Finite F_p[G]-modules given by a matrix for sigma.

rho = sigma - I acts nilpotently, so a module is the same thing as a
nilpotent matrix of nilpotency index at most p^n.  Indecomposables are the
cyclic quotients M_j; in a chain basis (g, rho g, ..., rho^(j-1) g) the
action of sigma is the identity plus ones directly below the diagonal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Optional, Sequence

import numpy as np

from .errors import InvariantError, ParseError, PreconditionError
from .fp_linalg import EchelonBasis, FpMatrix, block_diag, kernel_basis, rank, solve
from .group_ring import DEFAULT_ORDER_BOUND, GroupRingContext


@dataclass(frozen=True)
class EpsilonStructure:
    """A commuting semisimple automorphism of order s together with the eigenvalue t.

    z is derived from z*s*t^(s-1) = 1 (mod p).  We also require t^s = 1 so the
    averaging operator built from (s, t, z) is an idempotent.
    """

    matrix: FpMatrix
    s: int
    t: int

    def __post_init__(self):
        p = self.matrix.p
        if self.s < 1 or gcd(self.s, p) != 1:
            raise InvariantError(f"s = {self.s} must be positive and prime to p = {p}")
        object.__setattr__(self, "t", self.t % p)
        if self.t == 0:
            raise InvariantError("t must be nonzero mod p")
        if pow(self.t, self.s, p) != 1:
            raise InvariantError(f"t = {self.t} does not satisfy t^s = 1 mod {p}")
        if not self.matrix.power(self.s).is_identity():
            raise InvariantError(f"epsilon^{self.s} is not the identity")

    @property
    def z(self) -> int:
        p = self.matrix.p
        return pow(self.s * pow(self.t, self.s - 1, p), -1, p)


@dataclass(frozen=True)
class GModule:
    ctx: GroupRingContext
    sigma: FpMatrix
    epsilon: Optional[EpsilonStructure] = None

    def __post_init__(self):
        p = self.ctx.p
        if self.sigma.p != p:
            raise InvariantError(f"sigma is over F_{self.sigma.p}, context is F_{p}")
        if self.sigma.rows != self.sigma.cols:
            raise InvariantError("sigma must be square")
        if not self.rho.power(self.ctx.order).is_zero():
            raise InvariantError(f"(sigma - I)^{self.ctx.order} is not zero")
        if self.epsilon is not None:
            eps = self.epsilon.matrix
            if eps.shape != self.sigma.shape or eps.p != p:
                raise InvariantError("epsilon has the wrong shape or field")
            if eps @ self.sigma != self.sigma @ eps:
                raise InvariantError("epsilon does not commute with sigma")

    @property
    def p(self) -> int:
        return self.ctx.p

    @property
    def dim(self) -> int:
        return self.sigma.rows

    @property
    def rho(self) -> FpMatrix:
        return self.sigma - FpMatrix.identity(self.p, self.dim)

    def rho_apply(self, v: Sequence[int], k: int = 1) -> tuple:
        w = tuple(v)
        r = self.rho
        for _ in range(k):
            w = r @ w
        return w


@dataclass(frozen=True)
class Decomposition:
    module: GModule
    generators: list
    type: list
    basis_change: FpMatrix
    chains: list = field(default_factory=list, repr=False)


def canonical_block(p: int, length: int) -> FpMatrix:
    return FpMatrix(p, np.eye(length, dtype=np.int64) + np.eye(length, k=-1, dtype=np.int64), cols=length)


def module_from_type(ctx: GroupRingContext, lengths: Sequence[int]) -> GModule:
    """Direct sum of canonical blocks M_l, l in lengths, in the given order."""
    blocks = [canonical_block(ctx.p, l) for l in lengths]
    return GModule(ctx, block_diag(blocks, ctx.p))


def rank_sequence(m: GModule) -> list[int]:
    """r_k = rank(rho^k) for k = 0, 1, ... up to and including the first zero."""
    seq = [m.dim]
    r = m.rho
    power = FpMatrix.identity(m.p, m.dim)
    while seq[-1] > 0:
        power = power @ r
        seq.append(rank(power))
    return seq


def jordan_type(m: GModule) -> list[int]:
    seq = rank_sequence(m) + [0]
    lengths = []
    for k in range(len(seq) - 2, 0, -1):
        mult = seq[k - 1] - 2 * seq[k] + seq[k + 1]
        lengths.extend([k] * mult)
    return lengths


def rho_length(m: GModule, v: Sequence[int]) -> int:
    """Smallest k with rho^k v = 0."""
    w = tuple(int(x) % m.p for x in v)
    k = 0
    r = m.rho
    while any(w):
        w = r @ w
        k += 1
    return k


def chain(m: GModule, v: Sequence[int]) -> list[tuple]:
    """The vectors v, rho v, ..., up to the last nonzero one."""
    out = []
    w = tuple(int(x) % m.p for x in v)
    r = m.rho
    while any(w):
        out.append(w)
        w = r @ w
    return out


def decompose(m: GModule) -> Decomposition:
    """Split m into cyclic summands.

    Levels are processed from the longest block down.  At level k the new
    generators extend a basis of ker rho^(k-1) plus the depth-k members of the
    chains already chosen to a basis of ker rho^k; candidates are taken from
    the canonical kernel basis, so the output is deterministic.
    """
    p, dim = m.p, m.dim
    typ = jordan_type(m)
    if dim == 0:
        return Decomposition(m, [], [], FpMatrix.zeros(p, 0, 0), [])
    r = m.rho
    powers = {0: FpMatrix.identity(p, dim)}
    for k in range(1, typ[0] + 1):
        powers[k] = powers[k - 1] @ r

    mult = {}
    for length in typ:
        mult[length] = mult.get(length, 0) + 1

    chosen: list[tuple[tuple, int]] = []
    for k in sorted(mult, reverse=True):
        span = EchelonBasis(p, dim, kernel_basis(powers[k - 1]))
        for g, length in chosen:
            span.add(powers[length - k] @ g)
        picked = 0
        for cand in kernel_basis(powers[k]):
            if span.add(cand):
                chosen.append((cand, k))
                picked += 1
                if picked == mult[k]:
                    break
        if picked != mult[k]:
            raise InvariantError(f"could not find {mult[k]} generators of height {k}")

    chains = [chain(m, g) for g, _ in chosen]
    columns = [v for c in chains for v in c]
    basis_change = FpMatrix.from_columns(p, columns, dim)
    return Decomposition(m, [g for g, _ in chosen], [l for _, l in chosen], basis_change, chains)


def canonical_form(d: Decomposition) -> FpMatrix:
    return block_diag([canonical_block(d.module.p, l) for l in d.type], d.module.p)


def cyclic_submodule(m: GModule, v: Sequence[int]) -> tuple[GModule, int]:
    """The span of v, rho v, rho^2 v, ... as a module in that chain basis."""
    length = rho_length(m, v)
    return GModule(m.ctx, canonical_block(m.p, length)), length


def restrict(m: GModule, basis: Sequence[Sequence[int]]) -> GModule:
    """Restriction of m to a sigma-stable subspace with the given basis."""
    p = m.p
    b = FpMatrix.from_columns(p, list(basis), m.dim)
    cols = []
    for v in basis:
        x = solve(b, m.sigma @ v)
        if x is None:
            raise InvariantError("subspace is not sigma-stable")
        cols.append(x)
    sub_sigma = FpMatrix.from_columns(p, cols, len(basis))
    eps = None
    if m.epsilon is not None:
        ecols = []
        for v in basis:
            x = solve(b, m.epsilon.matrix @ v)
            if x is None:
                raise InvariantError("subspace is not epsilon-stable")
            ecols.append(x)
        eps = EpsilonStructure(FpMatrix.from_columns(p, ecols, len(basis)), m.epsilon.s, m.epsilon.t)
    return GModule(m.ctx, sub_sigma, eps)


def dual_module(m: GModule) -> GModule:
    """Dual module with (sigma f)(x) = f(sigma x): the transpose in the dual basis."""
    eps = None
    if m.epsilon is not None:
        eps = EpsilonStructure(m.epsilon.matrix.T, m.epsilon.s, m.epsilon.t)
    return GModule(m.ctx, m.sigma.T, eps)


def _require_epsilon(m: GModule) -> EpsilonStructure:
    if m.epsilon is None:
        raise PreconditionError("module carries no epsilon action")
    return m.epsilon


def epsilon_projector(m: GModule) -> FpMatrix:
    """T = z * sum_{i=1..s} t^(s-i) eps^(i-1), the projection onto the t-eigenspace."""
    eps = _require_epsilon(m)
    p, s, t = m.p, eps.s, eps.t
    total = FpMatrix.zeros(p, m.dim, m.dim)
    e_pow = FpMatrix.identity(p, m.dim)
    for i in range(1, s + 1):
        total = total + e_pow.scale(pow(t, s - i, p))
        e_pow = e_pow @ eps.matrix
    return total.scale(eps.z)


def eigenspace_basis(m: GModule) -> list[tuple]:
    eps = _require_epsilon(m)
    return kernel_basis(eps.matrix - FpMatrix.identity(m.p, m.dim).scale(eps.t))


def eigenspace(m: GModule) -> GModule:
    return restrict(m, eigenspace_basis(m))


def module_to_json(m: GModule) -> dict:
    out = {"p": m.p, "n": m.ctx.n, "dim": m.dim, "sigma": m.sigma.tolist()}
    if m.epsilon is not None:
        out["epsilon"] = {"matrix": m.epsilon.matrix.tolist(), "s": m.epsilon.s, "t": m.epsilon.t}
    return out


def module_from_json(obj: dict, bound: int = DEFAULT_ORDER_BOUND) -> GModule:
    try:
        p, n, dim = int(obj["p"]), int(obj["n"]), int(obj["dim"])
        sigma_rows = [[int(x) for x in row] for row in obj["sigma"]]
        eps_obj = obj.get("epsilon")
        if eps_obj is not None:
            eps_rows = [[int(x) for x in row] for row in eps_obj["matrix"]]
            s, t = int(eps_obj["s"]), int(eps_obj["t"])
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise ParseError(f"malformed module JSON: {exc}") from exc
    if len(sigma_rows) != dim or any(len(row) != dim for row in sigma_rows):
        raise ParseError(f"sigma is not {dim}x{dim}")
    ctx = GroupRingContext(p, n, bound)
    eps = None
    if eps_obj is not None:
        if len(eps_rows) != dim or any(len(row) != dim for row in eps_rows):
            raise ParseError(f"epsilon matrix is not {dim}x{dim}")
        eps = EpsilonStructure(FpMatrix(p, eps_rows, cols=dim), s, t)
    return GModule(ctx, FpMatrix(p, sigma_rows, cols=dim), eps)


def random_invertible(p: int, dim: int, rng: np.random.Generator) -> FpMatrix:
    while True:
        a = FpMatrix(p, rng.integers(0, p, size=(dim, dim)), cols=dim)
        if rank(a) == dim:
            return a


def scramble(m: GModule, P: FpMatrix) -> GModule:
    """The isomorphic module P sigma P^-1 (vectors transform as x -> P x)."""
    Pinv = P.inverse()
    eps = None
    if m.epsilon is not None:
        eps = EpsilonStructure(P @ m.epsilon.matrix @ Pinv, m.epsilon.s, m.epsilon.t)
    return GModule(m.ctx, P @ m.sigma @ Pinv, eps)


def random_type(order: int, dim: int, rng: np.random.Generator) -> list[int]:
    lengths = []
    left = dim
    while left > 0:
        l = int(rng.integers(1, min(order, left) + 1))
        lengths.append(l)
        left -= l
    return lengths


def random_module(ctx: GroupRingContext, dim: int, rng: np.random.Generator) -> tuple[GModule, list[int]]:
    """A scrambled direct sum of random canonical blocks; returns the planted type too."""
    lengths = random_type(ctx.order, dim, rng)
    base = module_from_type(ctx, lengths)
    return scramble(base, random_invertible(ctx.p, dim, rng)), sorted(lengths, reverse=True)
