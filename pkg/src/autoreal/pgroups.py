"""The metacyclic p-groups H_{j,e} = M_j . G and brute-force group theory on them.

An element (m, k), m in M_j (rho-power coordinates), k in Z/p^n, is encoded
as the integer k * p^j + sum_a m_a p^a, so the identity is 0.  All group
algorithms work on numpy arrays of such indices; the multiplication is

    (m1, k1)(m2, k2) = (m1 + sigma^k1 m2 + carry(k1, k2) e rho^(j-1), k1 + k2)

with carry = 1 exactly when k1 + k2 >= p^n.  The carry term makes the lift
of sigma satisfy (lift)^(p^n) = e rho^(j-1); e = 0 is the semidirect product.
"""

from __future__ import annotations

import re
from dataclasses import asdict, dataclass
from functools import lru_cache
from math import comb
from typing import Optional, Sequence

import numpy as np

from .errors import BoundError, ParseError, PreconditionError
from .fp_linalg import check_prime

DEFAULT_GROUP_BOUND = 3**8
WITT_BOUND = 3**11
ISOMORPHISM_BOUND = 128
TABLE_EXPORT_BOUND = 512

# Mutation hook for the self-test: when set, newly built groups drop the cocycle term.
INJECT_COCYCLE_FAULT = False


class FiniteGroup:
    """Index-encoded finite group; subclasses supply mul, inv and generators."""

    order: int
    p: int
    generators: tuple

    def mul(self, a, b) -> np.ndarray:
        raise NotImplementedError

    def inv(self, a) -> np.ndarray:
        raise NotImplementedError

    def all(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    def table(self) -> np.ndarray:
        x = self.all()
        return self.mul(x[:, None], x[None, :])


class MetacyclicPGroup(FiniteGroup):
    def __init__(self, p: int, n: int, j: int, e: int = 0, bound: int = DEFAULT_GROUP_BOUND):
        self.p = check_prime(p)
        if n < 1:
            raise PreconditionError(f"n must be positive, got {n}")
        self.n, self.j = n, j
        self.pn = p**n
        if not 1 <= j <= self.pn:
            raise PreconditionError(f"j must lie in [1, {self.pn}], got {j}")
        if not 0 <= e < p:
            raise PreconditionError(f"e must lie in [0, {p}), got {e}")
        self.e = e
        self.pj = p**j
        self.order = self.pj * self.pn
        if self.order > bound:
            raise BoundError(f"|H_({j},{e})| = {p}^{j + n} exceeds the bound {bound}")
        self._tail = 0 if INJECT_COCYCLE_FAULT else e
        self._binom = np.array([[comb(k, a) % p for a in range(j)] for k in range(self.pn)], dtype=np.int64)
        self._pows = p ** np.arange(j, dtype=np.int64)
        self.generators = (self.encode([0] * j, 1), self.encode([1] + [0] * (j - 1), 0))

    def __repr__(self) -> str:
        return f"MetacyclicPGroup(p={self.p}, n={self.n}, j={self.j}, e={self.e})"

    @property
    def params(self) -> tuple:
        return (self.p, self.n, self.j, self.e)

    def encode(self, m: Sequence[int], k: int) -> int:
        return int(k % self.pn) * self.pj + sum((int(x) % self.p) * self.p**a for a, x in enumerate(m))

    def decode(self, idx) -> tuple[np.ndarray, np.ndarray]:
        idx = np.asarray(idx, dtype=np.int64)
        k = idx // self.pj
        m = (idx[..., None] % self.pj) // self._pows % self.p
        return m, k

    def pair(self, idx: int) -> tuple[tuple, int]:
        m, k = self.decode(idx)
        return tuple(int(x) for x in m), int(k)

    def _encode_arrays(self, m: np.ndarray, k: np.ndarray) -> np.ndarray:
        return (k % self.pn) * self.pj + m @ self._pows

    def _act(self, k: np.ndarray, m: np.ndarray) -> np.ndarray:
        # sigma^k m = sum_s C(k, s) rho^s m, rho shifting coordinates up by one
        out = m.copy()
        coef = self._binom[k]
        for s in range(1, self.j):
            out[..., s:] += coef[..., s, None] * m[..., : self.j - s]
        return out

    def mul(self, a, b) -> np.ndarray:
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        ma, ka = self.decode(a)
        mb, kb = self.decode(b)
        m = ma + self._act(ka, mb)
        if self._tail:
            m[..., self.j - 1] += self._tail * (ka + kb >= self.pn)
        return self._encode_arrays(m % self.p, ka + kb)

    def inv(self, a) -> np.ndarray:
        m, k = self.decode(a)
        k2 = (-k) % self.pn
        m = -m
        if self._tail:
            m[..., self.j - 1] -= self._tail * (k != 0)
        return self._encode_arrays(self._act(k2, m % self.p) % self.p, k2)

    def subgroup_rho_power(self, t: int, k_multiple_of: int = 0) -> np.ndarray:
        """Mask of {(m, k) : m in rho^t M_j, k = 0} (or k divisible by the given modulus)."""
        m, k = self.decode(self.all())
        mask = ~m[:, :t].any(axis=1)
        if k_multiple_of:
            return mask & (k % k_multiple_of == 0)
        return mask & (k == 0)


class TableGroup(FiniteGroup):
    """A finite group given by its Cayley table, indices 0..N-1 with 0 the identity."""

    def __init__(self, table, header: Optional[dict] = None):
        t = np.array(table, dtype=np.int64)
        n = t.shape[0]
        if t.shape != (n, n) or n == 0:
            raise ParseError("a Cayley table must be square and nonempty")
        ref = np.arange(n)
        if not (np.array_equal(t[0], ref) and np.array_equal(t[:, 0], ref)):
            raise ParseError("index 0 must be the identity")
        if not all(np.array_equal(np.sort(row), ref) for row in t):
            raise ParseError("rows of the table are not permutations")
        self._t = t
        self.order = n
        self.header = header or {}
        self.p = _smallest_prime_factor(n) if n > 1 else 1
        self._inv = np.argmin(t, axis=1)  # position of the identity 0 in each row
        self.generators = tuple(_greedy_generators(self))

    def mul(self, a, b) -> np.ndarray:
        return self._t[np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)]

    def inv(self, a) -> np.ndarray:
        return self._inv[np.asarray(a, dtype=np.int64)]

    def table(self) -> np.ndarray:
        return self._t


def _smallest_prime_factor(n: int) -> int:
    d = 2
    while n % d:
        d += 1
    return d


def _greedy_generators(g: FiniteGroup) -> list[int]:
    orders = element_orders(g)
    gens: list[int] = []
    mask = closure(g, gens)
    for x in sorted(range(g.order), key=lambda x: (-orders[x], x)):
        if not mask[x]:
            gens.append(x)
            mask = closure(g, gens)
    return gens


def make_group(p: int, n: int, j: int, e: int = 0, bound: int = DEFAULT_GROUP_BOUND) -> MetacyclicPGroup:
    return MetacyclicPGroup(p, n, j, e, bound)


# -- subgroup machinery ------------------------------------------------------


def closure(g: FiniteGroup, gens: Sequence[int]) -> np.ndarray:
    """Boolean mask of the subgroup generated by gens."""
    mask = np.zeros(g.order, dtype=bool)
    mask[0] = True
    gens = [int(x) for x in gens if x != 0]
    frontier = np.array([0], dtype=np.int64)
    while frontier.size and gens:
        new = np.unique(np.concatenate([g.mul(frontier, s) for s in gens]))
        new = new[~mask[new]]
        mask[new] = True
        frontier = new
    return mask


def generated_subgroup(g: FiniteGroup, candidates, normal: bool = False) -> np.ndarray:
    """Subgroup (or normal subgroup) generated by a possibly large candidate set."""
    rem = np.unique(np.asarray(candidates, dtype=np.int64))
    gens: list[int] = []
    mask = closure(g, gens)
    while True:
        rem = rem[~mask[rem]]
        if rem.size:
            gens.append(int(rem[0]))
            mask = closure(g, gens)
            continue
        if not normal:
            return mask
        members = np.flatnonzero(mask)
        conj = np.concatenate([g.mul(g.mul(g.inv(t), members), t) for t in g.generators])
        rem = np.unique(conj[~mask[conj]])
        if not rem.size:
            return mask


def element_orders(g: FiniteGroup) -> np.ndarray:
    x = g.all()
    cur = x.copy()
    orders = np.ones(g.order, dtype=np.int64)
    k = 1
    live = cur != 0
    while live.any():
        k += 1
        cur = np.where(live, g.mul(cur, x), 0)
        orders[live] = k
        live = cur != 0
    return orders


def power(g: FiniteGroup, a, k: int) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    result = np.zeros_like(a)
    base = a
    while k:
        if k & 1:
            result = g.mul(result, base)
        k >>= 1
        if k:
            base = g.mul(base, base)
    return result


def commutator(g: FiniteGroup, a, b) -> np.ndarray:
    return g.mul(g.mul(g.inv(a), g.inv(b)), g.mul(a, b))


def lower_central_series(g: FiniteGroup) -> list[np.ndarray]:
    series = [np.ones(g.order, dtype=bool)]
    while True:
        members = np.flatnonzero(series[-1])
        comms = np.concatenate([commutator(g, members, s) for s in g.generators])
        nxt = generated_subgroup(g, comms, normal=True)
        if nxt.sum() == series[-1].sum():
            return series  # not nilpotent; cannot happen for p-groups
        series.append(nxt)
        if nxt.sum() == 1:
            return series


def nilpotency_class(g: FiniteGroup) -> int:
    return len(lower_central_series(g)) - 1


def frattini(g: FiniteGroup) -> np.ndarray:
    """Subgroup generated by all p-th powers and all commutators (p-groups only)."""
    x = g.all()
    pth = power(g, x, g.p)
    comms = np.concatenate([commutator(g, x, s) for s in g.generators])
    return generated_subgroup(g, np.concatenate([pth, comms]))


def is_central(g: FiniteGroup, mask: np.ndarray) -> bool:
    x = g.all()
    for z in np.flatnonzero(mask):
        if not np.array_equal(g.mul(z, x), g.mul(x, z)):
            return False
    return True


def _log(p: int, n: int) -> int:
    k = 0
    while n > 1:
        if n % p:
            raise ValueError(f"{n} is not a power of {p}")
        n //= p
        k += 1
    return k


@dataclass(frozen=True)
class GroupInvariants:
    order: int
    exponent: int
    nilpotency_class: int
    rank: int
    frattini_order: int

    def to_json(self) -> dict:
        return asdict(self)


def invariants(g: FiniteGroup) -> GroupInvariants:
    if isinstance(g, MetacyclicPGroup) and not INJECT_COCYCLE_FAULT:
        return _cached_invariants(*g.params)
    return _compute_invariants(g)


def _compute_invariants(g: FiniteGroup) -> GroupInvariants:
    phi = int(frattini(g).sum())
    return GroupInvariants(
        order=g.order,
        exponent=int(element_orders(g).max()),
        nilpotency_class=nilpotency_class(g),
        rank=_log(g.p, g.order // phi),
        frattini_order=phi,
    )


@lru_cache(maxsize=None)
def _cached_invariants(p: int, n: int, j: int, e: int) -> GroupInvariants:
    return _compute_invariants(MetacyclicPGroup(p, n, j, e, bound=WITT_BOUND))


def predicted_invariants(p: int, n: int, j: int, e: int = 0) -> dict:
    """Values the structure theory predicts; None where it makes no claim."""
    pn = p**n
    split = e == 0
    return {
        "order": p ** (j + n),
        "exponent": p**n if (j < pn and split) else p ** (n + 1),
        "nilpotency_class": j if split else None,
        "rank": 2 if split else None,
        "frattini_order": p ** (j - 1 + n - 1) if split else None,
    }


def predicted_frattini(g: MetacyclicPGroup) -> np.ndarray:
    """(rho M_j) x| G^p as a mask."""
    return g.subgroup_rho_power(1, k_multiple_of=g.p)


# -- quotients ---------------------------------------------------------------


def quotient_to(g: MetacyclicPGroup, j_target: int) -> MetacyclicPGroup:
    """The image of reduction mod rho^j_target; the cocycle dies unless j_target = j."""
    if not 1 <= j_target <= g.j:
        raise PreconditionError(f"j_target must lie in [1, {g.j}], got {j_target}")
    e = g.e if j_target == g.j else 0
    return MetacyclicPGroup(g.p, g.n, j_target, e, bound=max(g.order, DEFAULT_GROUP_BOUND))


def quotient_map(g: MetacyclicPGroup, target: MetacyclicPGroup, x=None) -> np.ndarray:
    x = g.all() if x is None else np.asarray(x, dtype=np.int64)
    m, k = g.decode(x)
    return target._encode_arrays(m[..., : target.j], k)


def quotient_kernel(g: MetacyclicPGroup, j_target: int) -> np.ndarray:
    return g.subgroup_rho_power(j_target)


# -- isomorphism -------------------------------------------------------------


def _spanning_tree(g: FiniteGroup, gens: Sequence[int]) -> list[tuple[int, int, int]]:
    """BFS order of (x, parent, generator slot) with x = parent * gens[slot]."""
    seen = {0}
    order = []
    frontier = [0]
    while frontier:
        nxt = []
        for y in frontier:
            for slot, s in enumerate(gens):
                x = int(g.mul(y, s))
                if x not in seen:
                    seen.add(x)
                    order.append((x, y, slot))
                    nxt.append(x)
        frontier = nxt
    return order


def brute_isomorphic(g1: FiniteGroup, g2: FiniteGroup, bound: int = ISOMORPHISM_BOUND) -> Optional[np.ndarray]:
    """An isomorphism g1 -> g2 as an index array, or None.

    Backtracks over images of a generating set of g1, restricted to elements
    of matching order; each assignment is extended along a spanning tree of
    the Cayley graph and accepted only if it is a bijective homomorphism.
    """
    if g1.order != g2.order:
        return None
    if g1.order > bound:
        raise BoundError(f"isomorphism search capped at order {bound}, got {g1.order}")
    N = g1.order
    t1, t2 = g1.table(), g2.table()
    o1, o2 = element_orders(g1), element_orders(g2)
    if not np.array_equal(np.sort(o1), np.sort(o2)):
        return None
    gens = [int(s) for s in g1.generators]
    tree = _spanning_tree(g1, gens)
    if len(tree) != N - 1:
        raise PreconditionError("generators do not generate the group")
    same = np.array_equal(t1, t2)
    cands = []
    for s in gens:
        c = [int(x) for x in np.flatnonzero(o2 == o1[s])]
        c.sort(key=lambda x: (not (same and x == s), x))
        cands.append(c)
    gen_cols = [t1[:, s] for s in gens]

    def attempt(images: list[int]) -> Optional[np.ndarray]:
        phi = np.zeros(N, dtype=np.int64)
        for x, y, slot in tree:
            phi[x] = t2[phi[y], images[slot]]
        if np.unique(phi).size != N:
            return None
        for slot, col in enumerate(gen_cols):
            if not np.array_equal(phi[col], t2[phi, images[slot]]):
                return None
        return phi

    def backtrack(images: list[int]) -> Optional[np.ndarray]:
        depth = len(images)
        if depth == len(gens):
            return attempt(images)
        for c in cands[depth]:
            # products of already-placed generators must keep their orders
            if any(o1[t1[gens[d], gens[depth]]] != o2[t2[images[d], c]] for d in range(depth)):
                continue
            found = backtrack(images + [c])
            if found is not None:
                return found
        return None

    return backtrack([])


def is_homomorphism(g1: FiniteGroup, g2: FiniteGroup, phi: np.ndarray) -> bool:
    t1, t2 = g1.table(), g2.table()
    return bool(np.array_equal(phi[t1], t2[phi[:, None], phi[None, :]]))


# -- complements and the Witt chain ------------------------------------------


def find_complement(g: FiniteGroup, kernel: np.ndarray) -> Optional[np.ndarray]:
    """A subgroup C with C n K = 1 and |C| |K| = |G|, or None.

    Any complement maps isomorphically onto G/K, so it is generated by one
    lift of each generator of G; all |K|^(#gens) lift tuples are tried.
    """
    K = np.flatnonzero(kernel)
    want = g.order // K.size
    lifts = [g.mul(s, K) for s in g.generators]
    grids = np.meshgrid(*lifts, indexing="ij")
    for combo in zip(*(x.ravel() for x in grids)):
        C = closure(g, [int(c) for c in combo])
        if C.sum() == want and not (C & kernel)[1:].any():
            return C
    return None


@dataclass
class WittStep:
    k: int
    big: tuple  # (p, n, j, e) of the extension group
    small: tuple
    kernel_order: int
    kernel_is_quotient_kernel: bool
    central: bool
    rank_big: int
    rank_small: int
    complement_searched: bool
    complement_found: Optional[bool]

    @property
    def nonsplit_by_rank(self) -> bool:
        return self.rank_big == self.rank_small

    @property
    def ok(self) -> bool:
        return (
            self.kernel_order == self.big[0]
            and self.kernel_is_quotient_kernel
            and self.central
            and self.rank_big == self.rank_small == 2
            and self.complement_found is not True
        )

    def to_json(self) -> dict:
        out = asdict(self)
        out["nonsplit_by_rank"] = self.nonsplit_by_rank
        out["ok"] = self.ok
        return out


def witt_chain(
    p: int, n: int, i: int, c: int, bound: int = WITT_BOUND, complement_bound: int = ISOMORPHISM_BOUND
) -> list[WittStep]:
    """Central extensions 1 -> F_p -> H_(L+1) -> H_L -> 1 for L = p^i + c + k.

    c = p^(i+1) - p^i is accepted and gives the empty chain.
    """
    if not 1 <= i < n:
        raise PreconditionError(f"i = {i} must satisfy 1 <= i < n = {n}")
    cmax = p ** (i + 1) - p**i
    if not 1 <= c <= cmax:
        raise PreconditionError(f"c = {c} must satisfy 1 <= c < {cmax}")
    steps = []
    for k in range(cmax - c):
        L = p**i + c + k
        big = MetacyclicPGroup(p, n, L + 1, 0, bound)
        small = MetacyclicPGroup(p, n, L, 0, bound)
        kernel = big.subgroup_rho_power(L)
        image = quotient_map(big, small)
        searched = big.order <= complement_bound
        steps.append(
            WittStep(
                k=k,
                big=big.params,
                small=small.params,
                kernel_order=int(kernel.sum()),
                kernel_is_quotient_kernel=bool(np.array_equal(kernel, image == 0)),
                central=is_central(big, kernel),
                rank_big=invariants(big).rank,
                rank_small=invariants(small).rank,
                complement_searched=searched,
                complement_found=(find_complement(big, kernel) is not None) if searched else None,
            )
        )
    return steps


# -- export / import ---------------------------------------------------------


def export_group(g: MetacyclicPGroup, fmt: str = "table") -> str:
    if fmt == "table":
        if g.order > TABLE_EXPORT_BOUND:
            raise BoundError(f"table export capped at order {TABLE_EXPORT_BOUND}")
        lines = [f"{g.p} {g.n} {g.j} {g.e}", str(g.order)]
        lines += [" ".join(str(int(x)) for x in row) for row in g.table()]
        return "\n".join(lines) + "\n"
    if fmt == "pc":
        return _export_pc(g)
    raise PreconditionError(f"unknown export format {fmt!r}")


def _word(exps: Sequence[int]) -> str:
    parts = [f"b{a}" if x == 1 else f"b{a}^{x}" for a, x in enumerate(exps) if x]
    return " ".join(parts) if parts else "1"


def _export_pc(g: MetacyclicPGroup) -> str:
    p, n, j, e = g.params
    bs = [f"b{a}" for a in range(j)]
    lines = [
        f"# H_({j},{e}): a lifts sigma, b_s = rho^s in M_{j}; elements are b^m a^k",
        f"p {p}",
        f"n {n}",
        "generators a " + " ".join(bs),
        f"relative_order a {p ** n}",
    ]
    tail = [0] * j
    tail[j - 1] = e
    lines.append(f"power a^{p ** n} = {_word(tail)}")
    for b in bs:
        lines.append(f"power {b}^{p} = 1")
    for a in range(j):
        img = [0] * j
        img[a] = 1
        if a + 1 < j:
            img[a + 1] = 1
        lines.append(f"conj a*b{a}*a^-1 = {_word(img)}")
    for a in range(j):
        for b in range(a + 1, j):
            lines.append(f"comm b{a} b{b} = 1")
    return "\n".join(lines) + "\n"


def parse_table(text: str) -> TableGroup:
    rows = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
    try:
        header = dict(zip("pnje", (int(x) for x in rows[0])))
        order = int(rows[1][0])
        table = [[int(x) for x in r] for r in rows[2:]]
    except (IndexError, ValueError) as exc:
        raise ParseError(f"malformed table export: {exc}") from exc
    if len(table) != order or any(len(r) != order for r in table):
        raise ParseError(f"table is not {order}x{order}")
    return TableGroup(table, header)


_WORD = re.compile(r"b(\d+)(?:\^(\d+))?")


def _parse_word(word: str, j: int, p: int) -> np.ndarray:
    v = np.zeros(j, dtype=np.int64)
    if word.strip() == "1":
        return v
    for tok in word.split():
        mt = _WORD.fullmatch(tok)
        if not mt:
            raise ParseError(f"cannot parse word token {tok!r}")
        v[int(mt.group(1))] += int(mt.group(2) or 1)
    return v % p


def parse_pc(text: str) -> TableGroup:
    """Rebuild the Cayley table from a pc-style presentation.

    The b-generators span an elementary abelian normal subgroup on which a
    acts by the matrix read off the conjugation relations; a^(p^n) is the
    tail word.  Elements are indexed as in the table export.
    """
    p = n = None
    gens: list[str] = []
    conj: dict[int, str] = {}
    tail = None
    try:
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, _, rest = line.partition(" ")
            if key == "p":
                p = int(rest)
            elif key == "n":
                n = int(rest)
            elif key == "generators":
                gens = rest.split()[1:]
            elif key == "conj":
                lhs, rhs = rest.split("=")
                conj[int(re.search(r"b(\d+)", lhs).group(1))] = rhs
            elif key == "power" and rest.startswith("a^"):
                tail = rest.split("=")[1]
    except (ValueError, AttributeError) as exc:
        raise ParseError(f"malformed pc presentation: {exc}") from exc
    if p is None or n is None or not gens or tail is None:
        raise ParseError("pc presentation lacks p, n, generators or the power relation of a")
    j = len(gens)
    action = np.zeros((j, j), dtype=np.int64)
    for a in range(j):
        action[:, a] = _parse_word(conj[a], j, p)
    w = _parse_word(tail, j, p)
    pn, pj = p**n, p**j
    powers = [np.eye(j, dtype=np.int64)]
    for _ in range(pn - 1):
        powers.append(action @ powers[-1] % p)
    N = pj * pn
    idx = np.arange(N)
    k = idx // pj
    m = (idx[:, None] % pj) // (p ** np.arange(j)) % p
    place = p ** np.arange(j)
    table = np.zeros((N, N), dtype=np.int64)
    for x in range(N):
        acted = m @ powers[k[x]].T
        prod = (m[x] + acted + np.outer(k[x] + k >= pn, w)) % p
        table[x] = ((k[x] + k) % pn) * pj + prod @ place
    return TableGroup(table, {"p": p, "n": n, "j": j})
