"""A concrete Kummer module over a tower of finite fields.

F = F_q, F^ = F(xi_p) = F_(q^s), K = F_(q^(p^n)), K^ = F_(q^(s p^n)).  All four
live inside one field representation of K^.  sigma = Frob_q^s generates
Gal(K^/F^), epsilon = Frob_q^(p^n) generates Gal(K^/K).

Since K^x is cyclic of order divisible by p, J = K^x / K^xp is one
dimensional.  The index is computed twice: once by exponent arithmetic with
respect to the stored generator, and once from field elements with discrete
logarithms to a second, independently found generator.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import gcd
from typing import Optional

from . import gmodule as gm
from .errors import BoundError, DegenerateError, InvariantError, PreconditionError
from .ffield import GF, find_irreducible, multiplicative_order, prime_power
from .fp_linalg import FpMatrix, is_prime
from .group_ring import GroupRingContext
from .indexed_module import IndexedModule, decompose_jepsilon, r_to_json

FIELD_BOUND = 2**20


@dataclass
class FiniteFieldTower:
    q: int
    p: int
    n: int
    s: int
    t: int
    field: GF
    generator: int
    xi: int  # the fixed primitive p-th root of unity, generator^((Q-1)/p)
    degrees: dict = field(default_factory=dict)  # degree over the prime field of F, F^, K, K^
    seed: int = 0

    @property
    def Q(self) -> int:
        return self.field.size

    def sigma(self, x: int) -> int:
        return self.field.pow(x, self.q**self.s)

    def epsilon(self, x: int) -> int:
        return self.field.pow(x, self.q ** (self.p**self.n))

    def norm(self, x: int) -> int:
        """N_(K^/F^)(x) as the product of the p^n conjugates."""
        out, y = 1, x
        for _ in range(self.p**self.n):
            out = self.field.mul(out, y)
            y = self.sigma(y)
        return out

    def second_generator(self) -> int:
        rng = random.Random(self.seed + 1)
        return self.field.find_generator(rng, avoid=(self.generator,)) if self.Q > 3 else self.generator


def build_tower(q: int, p: int, n: int, seed: int = 0, bound: int = FIELD_BOUND) -> FiniteFieldTower:
    pp = prime_power(q)
    if pp is None:
        raise PreconditionError(f"q = {q} is not a prime power")
    if not is_prime(p):
        raise PreconditionError(f"p = {p} is not prime")
    if n < 1:
        raise PreconditionError("n must be positive")
    if gcd(q, p) != 1:
        raise PreconditionError(f"q = {q} is not prime to p = {p}")
    l, f = pp
    s = multiplicative_order(q, p)
    d = f * s * p**n
    if l**d > bound:
        raise BoundError(f"|K^| = {l}^{d} exceeds the bound {bound}")
    rng = random.Random(seed)
    K = GF(l, find_irreducible(l, d, rng))
    g = K.find_generator(rng)
    Q = K.size
    xi = K.pow(g, (Q - 1) // p)
    t = pow(q, p**n, p)
    tower = FiniteFieldTower(
        q, p, n, s, t, K, g, xi, {"F": f, "F_hat": f * s, "K": f * p**n, "K_hat": d}, seed
    )
    # xi is a primitive p-th root lying in F^, and epsilon raises it to the t-th power
    if xi == 1 or K.pow(xi, p) != 1:
        raise InvariantError("xi_p is not a primitive p-th root of unity")
    if tower.sigma(xi) != xi:
        raise InvariantError("xi_p is not fixed by sigma, so it is not in F^")
    if tower.epsilon(xi) != K.pow(xi, t):
        raise InvariantError("epsilon(xi_p) != xi_p^t")
    if tower.sigma(tower.epsilon(g)) != tower.epsilon(tower.sigma(g)):
        raise InvariantError("sigma and epsilon do not commute")
    return tower


def j_class(tower: FiniteFieldTower, x: int, gen: Optional[int] = None) -> int:
    """Coordinate of [x] in J on the basis [gen]: the a with x = gen^a mod p-th powers."""
    K, p = tower.field, tower.p
    gen = tower.generator if gen is None else gen
    probe = K.pow(x, (tower.Q - 1) // p)
    root = K.pow(gen, (tower.Q - 1) // p)
    y = 1
    for a in range(p):
        if y == probe:
            return a
        y = K.mul(y, root)
    raise InvariantError("p-th power class lookup failed")


def index_from_exponent(tower: FiniteFieldTower, a: int, root: int = 0) -> int:
    """e(g^a) by exponent arithmetic in the cyclic group <g> = K^x."""
    p, Q = tower.p, tower.Q
    order = Q - 1
    span = sum(tower.q ** (tower.s * k) for k in range(p**tower.n))  # N(g) = g^span
    norm_exp = a * span % order
    if norm_exp % p:
        raise InvariantError("norm is not a p-th power although its class must be trivial")
    root_exp = norm_exp // p + root * (order // p)
    rho_exp = root_exp * (tower.q**tower.s - 1) % order
    xi_exp = order // p
    if rho_exp % xi_exp:
        raise InvariantError("rho of the root is not a p-th root of unity")
    return rho_exp // xi_exp % p


def index_of_element(tower: FiniteFieldTower, gamma: int, gen: int, root: int = 0) -> int:
    """e(gamma) from field elements: norm, a p-th root via log_gen, then rho, matched against xi."""
    K, p = tower.field, tower.p
    order = tower.Q - 1
    nm = tower.norm(gamma)
    log = K.dlog(gen, nm)
    if log % p:
        raise InvariantError("norm class is nontrivial")
    y = K.pow(gen, log // p + root * (order // p))
    if K.pow(y, p) != nm:
        raise InvariantError("p-th root extraction failed")
    z = K.mul(tower.sigma(y), K.inv(y))
    w = 1
    for e in range(p):
        if w == z:
            return e
        w = K.mul(w, tower.xi)
    raise InvariantError("rho of the root is not a power of xi_p")


def compute_J(tower: FiniteFieldTower) -> IndexedModule:
    """J on the basis [g], with the sigma and epsilon scalars read off from field elements."""
    g = tower.generator
    ctx = GroupRingContext(tower.p, tower.n)
    sigma_c = j_class(tower, tower.sigma(g))
    eps_c = j_class(tower, tower.epsilon(g))
    eps = gm.EpsilonStructure(FpMatrix(tower.p, [[eps_c]]), tower.s, tower.t)
    module = gm.GModule(ctx, FpMatrix(tower.p, [[sigma_c]]), eps)
    return IndexedModule(module, (index_from_exponent(tower, 1),))


@dataclass
class TowerChecks:
    dim_J: int
    sigma_trivial: bool
    epsilon_is_t: bool
    e_linear: bool
    e_well_defined: bool
    e_values: list

    @property
    def ok(self) -> bool:
        return self.dim_J == 1 and self.sigma_trivial and self.epsilon_is_t and self.e_linear and self.e_well_defined


def check_tower(tower: FiniteFieldTower, samples: int = 2) -> TowerChecks:
    p, K = tower.p, tower.field
    im = compute_J(tower)
    m = im.j_eps
    values = [index_from_exponent(tower, a) for a in range(p)]
    linear = all(values[a] == a * values[1] % p for a in range(p))

    # recompute on random representatives with a second generator and every root choice
    rng = random.Random(tower.seed + 2)
    g2 = tower.second_generator()
    well_defined = True
    for a in range(p):
        for _ in range(samples):
            h = K.pow(tower.generator, rng.randrange(1, tower.Q - 1))
            gamma = K.mul(K.pow(tower.generator, a), K.pow(h, p))
            expected = values[a]
            for root in range(p):
                if index_of_element(tower, gamma, g2, root) != expected:
                    well_defined = False
                if index_from_exponent(tower, a + p * K.dlog(tower.generator, h), root) != expected:
                    well_defined = False
    return TowerChecks(
        dim_J=m.dim,
        sigma_trivial=m.sigma.is_identity(),
        epsilon_is_t=m.epsilon.matrix == FpMatrix(p, [[tower.t]]),
        e_linear=linear,
        e_well_defined=well_defined,
        e_values=values,
    )


def end_to_end_check(tower: FiniteFieldTower, samples: int = 2) -> dict:
    checks = check_tower(tower, samples)
    report = {
        "q": tower.q,
        "p": tower.p,
        "n": tower.n,
        "s": tower.s,
        "t": tower.t,
        "dimJ": checks.dim_J,
        "r": None,
        "e_values": checks.e_values,
        "sigma_trivial": checks.sigma_trivial,
        "epsilon_is_t": checks.epsilon_is_t,
        "e_linear": checks.e_linear,
        "e_well_defined": checks.e_well_defined,
        "decomposition": None,
    }
    if tower.p == 2 and tower.n == 1:
        report["decomposition"] = "excluded: needs p > 2 or n > 1"
        return report
    im = compute_J(tower)
    try:
        d = decompose_jepsilon(im)
    except DegenerateError:
        report["decomposition"] = "degenerate: e vanishes on A"
        return report
    report["r"] = r_to_json(d.r)
    report["decomposition"] = {"u_length": d.u_length(tower.p), "v_lengths": [tower.p**i for _, i in d.v_summands]}
    return report


def kummer_grid(max_q: int = 9, primes=(2, 3, 5), ns=(1, 2), bound: int = FIELD_BOUND) -> list[tuple[int, int, int]]:
    out = []
    for q in range(2, max_q + 1):
        pp = prime_power(q)
        if pp is None:
            continue
        for p in primes:
            if q % p == 0:
                continue
            s = multiplicative_order(q, p)
            for n in ns:
                if pp[0] ** (pp[1] * s * p**n) <= bound:
                    out.append((q, p, n))
    return out
