"""Modules carrying an index functional, their exceptional-summand
decomposition, and the realization step driven by that decomposition.

The index e is stored as a full row vector on J; only its restriction to
A = ker rho^(p^n - 1) carries meaning.  Multiplicative notation from Kummer
theory (gamma/beta, rho chi) is written additively here.

r = None encodes r = -infinity, i.e. an exceptional summand of length 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import gmodule as gm
from .errors import (
    DegenerateError,
    InternalContradiction,
    InvariantError,
    MinimalityError,
    ParseError,
    PreconditionError,
    ShapeError,
)
from .fp_linalg import EchelonBasis, FpMatrix, kernel_basis
from .group_ring import DEFAULT_ORDER_BOUND, GroupRingContext


def u_length(p: int, r: Optional[int]) -> int:
    return 1 if r is None else p**r + 1


def r_to_json(r: Optional[int]):
    return "-inf" if r is None else r


def r_from_json(value) -> Optional[int]:
    if value is None or value == "-inf" or value == float("-inf"):
        return None
    return int(value)


def group_label(length: int, full_ring: bool = False) -> str:
    return "F_p[G] ⋊ G" if full_ring else f"M_{length} ⋊ G"


@dataclass(frozen=True)
class IndexedModule:
    j_eps: gm.GModule
    e_functional: tuple

    def __post_init__(self):
        if len(self.e_functional) != self.j_eps.dim:
            raise InvariantError(
                f"index functional has length {len(self.e_functional)}, module has dimension {self.j_eps.dim}"
            )
        object.__setattr__(self, "e_functional", tuple(int(x) % self.p for x in self.e_functional))

    @property
    def p(self) -> int:
        return self.j_eps.p

    @property
    def n(self) -> int:
        return self.j_eps.ctx.n

    @property
    def dim(self) -> int:
        return self.j_eps.dim

    def e(self, v: Sequence[int]) -> int:
        return int(sum(a * int(b) for a, b in zip(self.e_functional, v))) % self.p


@dataclass(frozen=True)
class AxiomViolation:
    message: str
    witness: tuple


@dataclass
class JepsilonDecomposition:
    u_generator: tuple
    r: Optional[int]
    v_summands: list  # (generator, i) with summand isomorphic to M_(p^i)
    raw_generators: list = field(default_factory=list)
    raw_index_values: list = field(default_factory=list)

    def u_length(self, p: int) -> int:
        return u_length(p, self.r)


@dataclass(frozen=True)
class RealizationWitness:
    case: str  # "full-ring" | "correction" | "exceptional"
    w_generator: tuple
    realized_length: int
    realized_group: str
    target_group: str


def annihilator_A(im: IndexedModule) -> list[tuple]:
    ctx = im.j_eps.ctx
    return kernel_basis(im.j_eps.rho.power(ctx.order - 1))


def check_axioms(im: IndexedModule) -> list[AxiomViolation]:
    """Violations of: e kills rho J (note rho J lies inside A), and epsilon acts by t."""
    m = im.j_eps
    p, dim = im.p, im.dim
    out = []
    seen = EchelonBasis(p, dim)
    rho = m.rho
    for k in range(dim):
        w = rho.column(k)
        if not seen.add(w):
            continue
        val = im.e(w)
        if val:
            out.append(AxiomViolation(f"e(rho x) = {val} != 0 for rho x = {list(w)}", w))
    if m.epsilon is not None:
        scalar = FpMatrix.identity(p, dim).scale(m.epsilon.t)
        if m.epsilon.matrix != scalar:
            for k in range(dim):
                col = m.epsilon.matrix.column(k)
                if col != scalar.column(k):
                    out.append(AxiomViolation(f"epsilon does not act by t = {m.epsilon.t}", col))
                    break
    return out


def _require_hypothesis(p: int, n: int) -> None:
    if p == 2 and n == 1:
        raise PreconditionError("the decomposition needs p > 2 or n > 1")


def _invert_r(p: int, n: int, length: int) -> Optional[int]:
    if length == 1:
        return None
    for r in range(n):
        if p**r + 1 == length:
            return r
    raise ShapeError(f"exceptional summand has length {length}, not of the form p^r + 1 with r < {n}")


def _p_exponent(p: int, n: int, length: int) -> int:
    for i in range(n + 1):
        if p**i == length:
            return i
    raise ShapeError(f"summand of length {length} is not isomorphic to any M_(p^i)")


def decompose_jepsilon(im: IndexedModule) -> JepsilonDecomposition:
    """U + sum V_alpha decomposition with e nonzero exactly on U.

    U is the shortest summand whose generator carries a nonzero index (ties go
    to the earlier generator).  Every other generator gamma with e(gamma) != 0
    is replaced by gamma - beta, beta the multiple of the U generator with the
    same index; this keeps the chain length and kills the index.
    """
    p, n = im.p, im.n
    _require_hypothesis(p, n)
    violations = check_axioms(im)
    if violations:
        raise PreconditionError("index axioms fail: " + "; ".join(v.message for v in violations))
    if not any(im.e(a) for a in annihilator_A(im)):
        raise DegenerateError("the index vanishes on A")

    m = im.j_eps
    dec = gm.decompose(m)
    full = p**n
    values = [im.e(g) for g in dec.generators]
    candidates = [k for k, (l, v) in enumerate(zip(dec.type, values)) if v and l < full]
    u_idx = min(candidates, key=lambda k: (dec.type[k], k))
    u = dec.generators[u_idx]
    ul = dec.type[u_idx]
    r = _invert_r(p, n, ul)
    e_u_inv = pow(values[u_idx], -1, p)

    vs = []
    for k, (g, l) in enumerate(zip(dec.generators, dec.type)):
        if k == u_idx:
            continue
        if values[k]:
            coef = values[k] * e_u_inv % p
            g = tuple((a - coef * b) % p for a, b in zip(g, u))
            if gm.rho_length(m, g) != l:
                raise InvariantError("index correction changed the length of a summand")
        vs.append((g, l))

    span = EchelonBasis(p, m.dim)
    for g, _ in [(u, ul)] + vs:
        for w in gm.chain(m, g):
            span.add(w)
    if len(span) != m.dim:
        raise InvariantError("corrected generators do not span the module directly")

    v_summands = []
    for g, l in vs:
        i = _p_exponent(p, n, l)
        if l < ul and any(im.e(w) for w in gm.chain(m, g)):
            raise MinimalityError(f"summand M_{l} shorter than U = M_{ul} carries a nonzero index")
        v_summands.append((g, i))
    return JepsilonDecomposition(u, r, v_summands, list(dec.generators), values)


def verify_decomposition(im: IndexedModule, d: JepsilonDecomposition) -> list[str]:
    """The four structural clauses plus directness; returns failure messages."""
    m, p, n = im.j_eps, im.p, im.n
    bad = []
    for g, i in d.v_summands:
        if not 0 <= i <= n or gm.rho_length(m, g) != p**i:
            bad.append(f"V generator {g} is not a generator of M_{p ** i}")
    if d.r is not None and not 0 <= d.r < n:
        bad.append(f"r = {d.r} out of range")
    if gm.rho_length(m, d.u_generator) != d.u_length(p):
        bad.append("U generator has the wrong length")
    if im.e(d.u_generator) == 0:
        bad.append("e(U) = 0")
    ceiling = -1 if d.r is None else d.r
    for g, i in d.v_summands:
        if i <= ceiling and any(im.e(w) for w in gm.chain(m, g)):
            bad.append(f"e is nonzero on V = M_{p ** i} with i <= r")
    span = EchelonBasis(p, m.dim)
    for g in [d.u_generator] + [g for g, _ in d.v_summands]:
        for w in gm.chain(m, g):
            span.add(w)
    total = d.u_length(p) + sum(p**i for _, i in d.v_summands)
    if len(span) != m.dim or total != m.dim:
        bad.append("summands do not form a direct sum decomposition")
    return bad


def realize_step(im: IndexedModule, i: int, c: int, gamma: Sequence[int]) -> RealizationWitness:
    """From a cyclic submodule of length p^i + c with trivial index, produce a
    cyclic submodule with trivial index whose group maps onto M_(p^(i+1)) x| G."""
    p, n = im.p, im.n
    m = im.j_eps
    if not 0 <= i < n:
        raise PreconditionError(f"i = {i} must satisfy 0 <= i < n = {n}")
    if not 1 <= c < p ** (i + 1) - p**i:
        raise PreconditionError(f"c = {c} must satisfy 1 <= c < {p ** (i + 1) - p ** i}")
    if len(gamma) != m.dim:
        raise PreconditionError(f"gamma has length {len(gamma)}, module has dimension {m.dim}")
    gamma = tuple(int(x) % p for x in gamma)
    violations = check_axioms(im)
    if violations:
        raise PreconditionError("index axioms fail: " + "; ".join(v.message for v in violations))
    length = gm.rho_length(m, gamma)
    if length != p**i + c:
        raise PreconditionError(f"gamma generates M_{length}, expected M_{p ** i + c}")
    if im.e(gamma) != 0:
        raise PreconditionError(f"e(gamma) = {im.e(gamma)} must be 0")

    d = decompose_jepsilon(im)
    target = group_label(p ** (i + 1))
    u = d.u_generator
    e_u_inv = pow(im.e(u), -1, p)

    full = [g for g, j in d.v_summands if j == n]
    middle = sorted((j, k) for k, (g, j) in enumerate(d.v_summands) if i < j < n)
    if full:
        case, w, wl = "full-ring", full[0], p**n
    elif middle:
        j, k = middle[0]
        g = d.v_summands[k][0]
        coef = im.e(g) * e_u_inv % p
        case, wl = "correction", p**j
        w = tuple((a - coef * b) % p for a, b in zip(g, u))
    else:
        if d.r is None or d.r <= i:
            raise InternalContradiction(
                f"no summand M_(p^j) with j > {i} and r = {r_to_json(d.r)} <= i; the input cannot come from a field"
            )
        case, wl = "exceptional", p**d.r
        w = m.rho_apply(u)

    if im.e(w) != 0 or gm.rho_length(m, w) != wl:
        raise InvariantError(f"witness for case {case} fails its postconditions")
    return RealizationWitness(case, w, wl, group_label(wl, case == "full-ring"), target)


@dataclass
class SyntheticInstance:
    module: IndexedModule
    r: Optional[int]
    profile: list
    basis_change: FpMatrix
    canonical_generators: list  # images of the block generators, U first


def synthetic_instance(
    p: int, n: int, r: Optional[int], v_profile: Sequence[int], seed: int, bound: int = DEFAULT_ORDER_BOUND
) -> SyntheticInstance:
    _require_hypothesis(p, n)
    ctx = GroupRingContext(p, n, bound)
    if r is not None and not 0 <= r < n:
        raise PreconditionError(f"r = {r} must be -inf or in [0, {n - 1}]")
    profile = [int(i) for i in v_profile]
    if any(not 0 <= i <= n for i in profile):
        raise PreconditionError(f"V exponents must lie in [0, {n}]")
    rng = np.random.default_rng(seed)
    lengths = [u_length(p, r)] + [p**i for i in profile]
    base = gm.module_from_type(ctx, lengths)
    dim = base.dim

    e = np.zeros(dim, dtype=np.int64)
    offsets = np.cumsum([0] + lengths[:-1])
    e[offsets[0]] = rng.integers(1, p)
    ceiling = -1 if r is None else r
    for off, i in zip(offsets[1:], profile):
        if i > ceiling:
            e[off] = rng.integers(0, p)

    P = gm.random_invertible(p, dim, rng)
    Pinv = P.inverse()
    sigma = P @ base.sigma @ Pinv
    e_scrambled = tuple(int(x) for x in (e @ Pinv.entries) % p)
    im = IndexedModule(gm.GModule(ctx, sigma), e_scrambled)
    gens = [P.column(int(off)) for off in offsets]
    return SyntheticInstance(im, r, profile, P, gens)


def generate_synthetic(
    p: int, n: int, r: Optional[int], v_profile: Sequence[int], seed: int, bound: int = DEFAULT_ORDER_BOUND
) -> IndexedModule:
    """A scrambled instance with U = M_(p^r+1) and V summands M_(p^i), i in v_profile."""
    return synthetic_instance(p, n, r, v_profile, seed, bound).module


def synthetic_realization_input(
    p: int, n: int, i: int, c: int, seed: int, case: Optional[str] = None
) -> tuple[IndexedModule, tuple, SyntheticInstance]:
    """A random legal input to realize_step: an instance plus gamma of length p^i + c, e(gamma) = 0.

    `case` steers the planted shape toward one branch of the case split
    ("full-ring", "correction" or "exceptional"); None picks at random.
    """
    rng = np.random.default_rng(seed)
    L = p**i + c
    cases = ["full-ring", "correction", "exceptional"]
    if i + 1 >= n:
        cases.remove("correction")
    if i + 1 > n - 1:
        cases.remove("exceptional")
    if case is None:
        case = cases[int(rng.integers(len(cases)))]
    elif case not in cases:
        raise PreconditionError(f"case {case!r} is impossible for p={p}, n={n}, i={i}")

    if case == "exceptional":
        r = int(rng.integers(i + 1, n))
        profile = [int(x) for x in rng.integers(0, i + 1, size=int(rng.integers(0, 3)))]
    else:
        r_choices = [None] + list(range(n))
        r = r_choices[int(rng.integers(len(r_choices)))]
        if case == "full-ring":
            profile = [n] + [int(x) for x in rng.integers(0, n + 1, size=int(rng.integers(0, 2)))]
        else:
            profile = [int(rng.integers(i + 1, n))]
            profile += [int(x) for x in rng.integers(0, n, size=int(rng.integers(0, 2)))]
    inst = synthetic_instance(p, n, r, profile, int(rng.integers(2**31)))
    m = inst.module.j_eps
    lengths = [u_length(p, r)] + [p**x for x in profile]

    # gamma: a depth-L element of a summand longer than L, plus index-free short noise
    longer = [k for k, l in enumerate(lengths) if l > L]
    k = longer[int(rng.integers(len(longer)))]
    gamma = np.array(m.rho_apply(inst.canonical_generators[k], lengths[k] - L), dtype=np.int64)
    for k2, l2 in enumerate(lengths):
        if k2 == k or rng.integers(2) == 0:
            continue
        depth = max(l2 - L + 1, 1)  # a rho-image of length < L carries no index
        if depth < l2:
            gamma = gamma + int(rng.integers(p)) * np.array(m.rho_apply(inst.canonical_generators[k2], depth))
    gamma = tuple(int(x) % p for x in gamma)
    return inst.module, gamma, inst


def indexed_to_json(im: IndexedModule) -> dict:
    out = gm.module_to_json(im.j_eps)
    out["e"] = list(im.e_functional)
    return out


def indexed_from_json(obj: dict, bound: int = DEFAULT_ORDER_BOUND) -> IndexedModule:
    m = gm.module_from_json(obj, bound)
    try:
        e = [int(x) for x in obj["e"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed index functional: {exc}") from exc
    if len(e) != m.dim:
        raise ParseError(f"index functional has length {len(e)}, expected {m.dim}")
    return IndexedModule(m, tuple(e))


def decomposition_to_json(im: IndexedModule, d: JepsilonDecomposition) -> dict:
    return {
        "r": r_to_json(d.r),
        "u_length": d.u_length(im.p),
        "u_generator": list(d.u_generator),
        "v_summands": [{"generator": list(g), "i": i, "length": im.p**i} for g, i in d.v_summands],
        "index_values": list(d.raw_index_values),
    }


def witness_to_json(w: RealizationWitness) -> dict:
    return {
        "case": w.case,
        "w_generator": list(w.w_generator),
        "realized_length": w.realized_length,
        "realized_group": w.realized_group,
        "target_group": w.target_group,
    }
