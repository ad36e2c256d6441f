"""The acceptance suites, shared by `autoreal selftest` and the test suite.

Each suite returns a SuiteResult with a list of failure messages; a suite
passes when that list is empty.  `max_pn` restricts every grid to p^n <= max_pn.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import gmodule as gm
from . import indexed_module as im_mod
from . import kummer_ff as kf
from . import oracles
from . import pgroups as pg
from .fp_linalg import FpMatrix, is_prime, rank
from .group_ring import GroupRingContext, QuotientRing, psi_matrix


@dataclass
class SuiteResult:
    number: int
    name: str
    checks: int = 0
    failures: list = field(default_factory=list)
    seconds: float = 0.0
    skipped: bool = False

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, msg: str) -> None:
        self.failures.append(msg)

    def expect(self, cond: bool, msg: str) -> None:
        self.checks += 1
        if not cond:
            self.failures.append(msg)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = " (empty under this bound)" if self.skipped else ""
        head = f"[{status}] {self.number:2d} {self.name}: {self.checks} checks in {self.seconds:.2f}s{extra}"
        if self.failures:
            head += f"; first failure: {self.failures[0]}"
        return head

    def to_json(self) -> dict:
        return {
            "number": self.number,
            "name": self.name,
            "passed": self.passed,
            "checks": self.checks,
            "seconds": round(self.seconds, 3),
            "failures": self.failures[:20],
        }


def _allowed(p: int, n: int, max_pn: Optional[int]) -> bool:
    return max_pp(max_pn) >= p**n


def max_pp(max_pn: Optional[int]) -> float:
    return float("inf") if max_pn is None else max_pn


def _group_grid(max_pn):
    for p in (2, 3):
        for n in (1, 2):
            if not _allowed(p, n, max_pn):
                continue
            for j in range(1, p**n + 1):
                if p ** (j + n) <= pg.DEFAULT_GROUP_BOUND:
                    yield p, n, j


# -- 1 ------------------------------------------------------------------------


def suite_invariants(res: SuiteResult, max_pn, seed) -> None:
    for p, n, j in _group_grid(max_pn):
        g = pg.make_group(p, n, j, 0)
        got = pg.invariants(g)
        pred = pg.predicted_invariants(p, n, j, 0)
        tag = f"H_{j} (p={p}, n={n})"
        res.expect(got.order == pred["order"], f"{tag}: order {got.order} != {pred['order']}")
        res.expect(got.exponent == pred["exponent"], f"{tag}: exponent {got.exponent} != {pred['exponent']}")
        res.expect(got.nilpotency_class == j, f"{tag}: class {got.nilpotency_class} != {j}")
        res.expect(got.rank == 2, f"{tag}: rank {got.rank} != 2")
        res.expect(
            np.array_equal(pg.frattini(g), pg.predicted_frattini(g)),
            f"{tag}: Frattini subgroup differs from (rho M_j) x| G^p",
        )
        if g.order <= 729:
            res.expect(oracles.group_exponent(g.table()) == got.exponent, f"{tag}: exponent oracle disagrees")


# -- 2 ------------------------------------------------------------------------


def suite_isomorphism(res: SuiteResult, max_pn, seed) -> None:
    if _allowed(2, 1, max_pn):
        res.expect(
            pg.brute_isomorphic(pg.make_group(2, 1, 1, 1), pg.make_group(2, 1, 1, 0)) is None,
            "H_(1,1) found isomorphic to H_1 for p=2, n=1",
        )
        g1, g2 = pg.make_group(2, 1, 2, 1), pg.make_group(2, 1, 2, 0)
        phi = pg.brute_isomorphic(g1, g2)
        res.expect(phi is not None, "no isomorphism H_(2,1) -> H_2 for p=2, n=1")
        if phi is not None:
            res.expect(
                pg.is_homomorphism(g1, g2, phi) and len(set(phi.tolist())) == g2.order,
                "claimed isomorphism H_(2,1) -> H_2 is not a bijective homomorphism",
            )
    if _allowed(2, 2, max_pn):
        for j in range(1, 4):
            twisted, split = pg.make_group(2, 2, j, 1), pg.make_group(2, 2, j, 0)
            et, es = oracles.group_exponent(twisted.table()), oracles.group_exponent(split.table())
            res.expect(et != es, f"exponent does not separate H_({j},1) from H_{j} at p=2, n=2 ({et} vs {es})")
            if twisted.order <= pg.ISOMORPHISM_BOUND:
                res.expect(pg.brute_isomorphic(twisted, split) is None, f"H_({j},1) found isomorphic to H_{j}")


# -- 3 ------------------------------------------------------------------------


def suite_quotients(res: SuiteResult, max_pn, seed) -> None:
    rng = np.random.default_rng(seed)
    for p, n, k in _group_grid(max_pn):
        big = pg.make_group(p, n, k, 0)
        for j in range(1, k + 1):
            small = pg.quotient_to(big, j)
            tag = f"H_{k} -> H_{j} (p={p}, n={n})"
            kernel = pg.quotient_kernel(big, j)
            res.expect(int(kernel.sum()) == p ** (k - j), f"{tag}: kernel order {int(kernel.sum())}")
            image = pg.quotient_map(big, small)
            res.expect(np.array_equal(kernel, image == 0), f"{tag}: kernel is not the preimage of 1")
            res.expect(len(np.unique(image)) == small.order, f"{tag}: map is not onto")
            a = rng.integers(0, big.order, size=500)
            b = rng.integers(0, big.order, size=500)
            res.expect(
                np.array_equal(image[big.mul(a, b)], small.mul(image[a], image[b])),
                f"{tag}: map is not a homomorphism",
            )
            res.expect(
                pg.invariants(small) == pg.invariants(pg.make_group(p, n, j, 0)),
                f"{tag}: image invariants differ from those of H_{j}",
            )


# -- 4 ------------------------------------------------------------------------


def suite_witt(res: SuiteResult, max_pn, seed) -> None:
    for p, n, i, c in ((2, 2, 1, 1), (3, 2, 1, 1), (3, 2, 1, 2)):
        if not _allowed(p, n, max_pn):
            continue
        steps = pg.witt_chain(p, n, i, c)
        tag = f"p={p}, n={n}, i={i}, c={c}"
        res.expect(len(steps) == p ** (i + 1) - p**i - c, f"{tag}: chain has {len(steps)} steps")
        for st in steps:
            big = pg.make_group(*st.big, bound=pg.WITT_BOUND)
            kernel = big.subgroup_rho_power(st.small[2])
            res.expect(st.kernel_order == p, f"{tag} step {st.k}: kernel order {st.kernel_order}")
            res.expect(st.central, f"{tag} step {st.k}: kernel not central")
            if big.order <= 729:
                res.expect(
                    oracles.is_central_subset(big.table(), np.flatnonzero(kernel).tolist()),
                    f"{tag} step {st.k}: centrality oracle disagrees",
                )
            res.expect(st.rank_big == 2 and st.rank_small == 2, f"{tag} step {st.k}: ranks {st.rank_big}, {st.rank_small}")
            res.expect(st.complement_found is not True, f"{tag} step {st.k}: a complement exists")
            res.expect(st.ok, f"{tag} step {st.k}: step check failed")


# -- 5 ------------------------------------------------------------------------


def suite_decomposition(res: SuiteResult, max_pn, seed, count: int = 200, max_dim: int = 40) -> None:
    for p in (2, 3, 5):
        for n in (1, 2):
            if not _allowed(p, n, max_pn):
                continue
            ctx = GroupRingContext(p, n)
            rng = np.random.default_rng([seed, p, n])
            for k in range(count):
                dim = int(rng.integers(1, max_dim + 1))
                m, planted = gm.random_module(ctx, dim, rng)
                d = gm.decompose(m)
                tag = f"p={p}, n={n}, #{k}"
                res.expect(d.type == oracles.sigma_type(m.sigma.tolist(), p), f"{tag}: type != rank-sequence oracle")
                res.expect(d.type == planted, f"{tag}: type != planted type")
                P = d.basis_change
                res.expect(P.inverse() @ m.sigma @ P == gm.canonical_form(d), f"{tag}: basis change is not canonical")


# -- 6 ------------------------------------------------------------------------


def suite_duality(res: SuiteResult, max_pn, seed, count: int = 200) -> None:
    limit = min(27, max_pp(max_pn))
    for p in range(2, 28):
        if not is_prime(p):
            continue
        n = 1
        while p**n <= limit:
            ctx = GroupRingContext(p, n)
            for j in range(1, p**n + 1):
                mj = QuotientRing(ctx, j)
                psi, s = psi_matrix(mj), mj.sigma_matrix()
                tag = f"M_{j} (p={p}, n={n})"
                res.expect(oracles.rank_mod_p(psi.tolist(), p) == j, f"{tag}: psi is singular")
                res.expect(psi == psi.T, f"{tag}: psi is not symmetric")
                res.expect(s.T @ psi == psi @ s, f"{tag}: psi is not G-equivariant")
            n += 1
    pairs = [(p, n) for p in (2, 3, 5) for n in (1, 2) if _allowed(p, n, max_pn)]
    if not pairs:
        return
    rng = np.random.default_rng([seed, 6])
    for k in range(count):
        p, n = pairs[k % len(pairs)]
        m, _ = gm.random_module(GroupRingContext(p, n), int(rng.integers(1, 25)), rng)
        res.expect(gm.jordan_type(gm.dual_module(m)) == gm.jordan_type(m), f"dual changes the type (p={p}, n={n}, #{k})")


# -- 7 ------------------------------------------------------------------------


def random_commuting_pair(p: int, n: int, s: int, rng: np.random.Generator) -> gm.GModule:
    """A scrambled module with an epsilon of order dividing s that commutes with sigma.

    On canonical form epsilon scales each block by an s-th root of unity and
    may swap pairs of equal-length blocks; both commute with the block action.
    """
    ctx = GroupRingContext(p, n)
    roots = [c for c in range(1, p) if pow(c, s, p) == 1]
    lengths = gm.random_type(ctx.order, int(rng.integers(1, 16)), rng)
    if rng.integers(2):
        lengths = lengths + [lengths[0]]
    base = gm.module_from_type(ctx, lengths)
    dim = base.dim
    offs = np.cumsum([0] + lengths[:-1])
    eps = np.zeros((dim, dim), dtype=np.int64)
    used = set()
    for a in range(len(lengths)):
        if a in used:
            continue
        mate = next((b for b in range(a + 1, len(lengths)) if b not in used and lengths[b] == lengths[a]), None)
        c = roots[int(rng.integers(len(roots)))]
        L = lengths[a]
        if mate is not None and s % 2 == 0 and rng.integers(2):
            used.update((a, mate))
            oa, ob = offs[a], offs[mate]
            eps[oa : oa + L, ob : ob + L] = c * np.eye(L, dtype=np.int64)
            eps[ob : ob + L, oa : oa + L] = c * np.eye(L, dtype=np.int64)
        else:
            used.add(a)
            eps[offs[a] : offs[a] + L, offs[a] : offs[a] + L] = c * np.eye(L, dtype=np.int64)
    t = roots[int(rng.integers(len(roots)))]
    structure = gm.EpsilonStructure(FpMatrix(p, eps, cols=dim), s, t)
    return gm.scramble(gm.GModule(ctx, base.sigma, structure), gm.random_invertible(p, dim, rng))


def suite_projector(res: SuiteResult, max_pn, seed, count: int = 100) -> None:
    combos = [(p, n, s) for p in (3, 5) for n in (1, 2) for s in (2, 4) if _allowed(p, n, max_pn)]
    if not combos:
        return
    rng = np.random.default_rng([seed, 7])
    for k in range(count):
        p, n, s = combos[k % len(combos)]
        m = random_commuting_pair(p, n, s, rng)
        T = gm.epsilon_projector(m)
        eps, t = m.epsilon.matrix, m.epsilon.t
        tag = f"p={p}, n={n}, s={s}, #{k}"
        res.expect(T @ T == T, f"{tag}: T^2 != T")
        res.expect(m.sigma @ T == T @ m.sigma, f"{tag}: T does not commute with sigma")
        res.expect((FpMatrix.identity(p, m.dim).scale(t) - eps) @ T == FpMatrix.zeros(p, m.dim, m.dim), f"{tag}: (tI - eps)T != 0")
        eig = gm.eigenspace_basis(m)
        image_rank = rank(T)
        joint = oracles.rank_mod_p(T.T.tolist() + [list(v) for v in eig], p)
        res.expect(image_rank == len(eig) == joint, f"{tag}: image(T) != t-eigenspace")


# -- 8 ------------------------------------------------------------------------


def suite_recovery(res: SuiteResult, max_pn, seed, count: int = 200) -> None:
    pairs = [(p, n) for p, n in ((3, 1), (3, 2), (5, 1), (5, 2), (2, 2), (2, 3)) if _allowed(p, n, max_pn)]
    if not pairs:
        return
    rng = np.random.default_rng([seed, 8])
    for k in range(count):
        p, n = pairs[k % len(pairs)]
        r_choices = [None] + list(range(n))
        r = r_choices[int(rng.integers(len(r_choices)))]
        profile = sorted(int(x) for x in rng.integers(0, n + 1, size=int(rng.integers(0, 5))))
        inst = im_mod.synthetic_instance(p, n, r, profile, int(rng.integers(2**31)))
        tag = f"p={p}, n={n}, r={im_mod.r_to_json(r)}, V={profile}"
        res.expect(not im_mod.check_axioms(inst.module), f"{tag}: generated instance violates the axioms")
        d = im_mod.decompose_jepsilon(inst.module)
        res.expect(d.r == r, f"{tag}: recovered r = {im_mod.r_to_json(d.r)}")
        res.expect(sorted(i for _, i in d.v_summands) == profile, f"{tag}: recovered V exponents differ")
        bad = im_mod.verify_decomposition(inst.module, d)
        res.expect(not bad, f"{tag}: {bad[:1]}")


# -- 9 ------------------------------------------------------------------------


def realization_fixture(case: str, seed: int = 0):
    """The three worked realization inputs, as (module, i, c, gamma)."""
    if case == "full-ring":
        p, n, r, profile, i, c, source, depth = 3, 1, 0, [1], 0, 1, 1, 1
    elif case == "correction":
        p, n, r, profile, i, c, source, depth = 3, 2, 1, [1], 0, 1, 0, 2
    elif case == "exceptional":
        p, n, r, profile, i, c, source, depth = 2, 3, 2, [], 1, 1, 0, 2
    else:
        raise ValueError(f"unknown case {case!r}")
    inst = im_mod.synthetic_instance(p, n, r, profile, seed)
    gamma = inst.module.j_eps.rho_apply(inst.canonical_generators[source], depth)
    return inst.module, i, c, gamma


def legal_realization_params(max_pn=None) -> list[tuple[int, int, int, int]]:
    out = []
    for p in (2, 3):
        for n in (1, 2, 3):
            if (p, n) == (2, 1) or not _allowed(p, n, max_pn):
                continue
            for i in range(n):
                for c in range(1, p ** (i + 1) - p**i):
                    out.append((p, n, i, c))
    return out


def _check_witness(res: SuiteResult, im, i, w, tag: str) -> None:
    p, n = im.p, im.n
    res.expect(im.e(w.w_generator) == 0, f"{tag}: e(witness) != 0")
    res.expect(gm.rho_length(im.j_eps, w.w_generator) == w.realized_length, f"{tag}: witness length mismatch")
    res.expect(
        w.realized_length >= p ** (i + 1) and w.realized_length in [p**j for j in range(i + 1, n + 1)],
        f"{tag}: realized length {w.realized_length}",
    )
    res.expect(w.target_group == im_mod.group_label(p ** (i + 1)), f"{tag}: wrong target label")
    res.expect(w.realized_group == im_mod.group_label(w.realized_length, w.case == "full-ring"), f"{tag}: wrong realized label")
    if p ** (w.realized_length + n) <= pg.DEFAULT_GROUP_BOUND:
        big = pg.make_group(p, n, w.realized_length, 0)
        target = p ** (i + 1)
        small = pg.quotient_to(big, target)
        res.expect(
            int(pg.quotient_kernel(big, target).sum()) == p ** (w.realized_length - target)
            and pg.invariants(small) == pg.invariants(pg.make_group(p, n, target, 0)),
            f"{tag}: target is not confirmed as a quotient of the realized group",
        )


def suite_realization(res: SuiteResult, max_pn, seed, count: int = 100) -> None:
    for case, (p, n) in (("full-ring", (3, 1)), ("correction", (3, 2)), ("exceptional", (2, 3))):
        if not _allowed(p, n, max_pn):
            continue
        im, i, c, gamma = realization_fixture(case, seed)
        w = im_mod.realize_step(im, i, c, gamma)
        res.expect(w.case == case, f"fixture {case}: got case {w.case}")
        _check_witness(res, im, i, w, f"fixture {case}")
    params = legal_realization_params(max_pn)
    if not params:
        return
    seen = set()
    for k in range(count):
        p, n, i, c = params[k % len(params)]
        im, gamma, _ = im_mod.synthetic_realization_input(p, n, i, c, seed * 100003 + k)
        w = im_mod.realize_step(im, i, c, gamma)
        seen.add(w.case)
        _check_witness(res, im, i, w, f"p={p}, n={n}, i={i}, c={c}, #{k}")
    if max_pn is None or max_pn >= 8:
        res.expect(seen == {"full-ring", "correction", "exceptional"}, f"random runs only reached cases {sorted(seen)}")


# -- 10 -----------------------------------------------------------------------


def suite_kummer(res: SuiteResult, max_pn, seed) -> None:
    for q, p, n in kf.kummer_grid():
        if not _allowed(p, n, max_pn):
            continue
        tower = kf.build_tower(q, p, n, seed=seed)
        rep = kf.end_to_end_check(tower)
        tag = f"q={q}, p={p}, n={n}"
        res.expect(rep["dimJ"] == 1, f"{tag}: dim J = {rep['dimJ']}")
        res.expect(rep["sigma_trivial"], f"{tag}: sigma acts nontrivially on J")
        res.expect(rep["epsilon_is_t"], f"{tag}: epsilon does not act by t")
        res.expect(rep["e_linear"], f"{tag}: e is not linear")
        res.expect(rep["e_well_defined"], f"{tag}: e depends on the generator or root")
        if any(rep["e_values"]) and not (p == 2 and n == 1):
            res.expect(rep["r"] == "-inf", f"{tag}: r = {rep['r']} although e != 0")


SUITES: list[tuple[int, str, Callable]] = [
    (1, "group invariants of H_j", suite_invariants),
    (2, "nonisomorphism and isomorphism", suite_isomorphism),
    (3, "quotient chain", suite_quotients),
    (4, "Witt chain", suite_witt),
    (5, "decomposition oracle", suite_decomposition),
    (6, "duality", suite_duality),
    (7, "eigenspace projector", suite_projector),
    (8, "generate-scramble-recover", suite_recovery),
    (9, "realization step", suite_realization),
    (10, "finite-field end to end", suite_kummer),
]


def run_suite(number: int, max_pn: Optional[int] = None, seed: int = 0) -> SuiteResult:
    _, name, fn = SUITES[number - 1]
    res = SuiteResult(number, name)
    start = time.perf_counter()
    try:
        fn(res, max_pn, seed)
    except Exception as exc:  # any crash is a failed criterion, reported not raised
        res.fail(f"{type(exc).__name__}: {exc}")
    res.seconds = time.perf_counter() - start
    res.skipped = res.checks == 0 and res.passed
    return res


def run_all(max_pn: Optional[int] = None, seed: int = 0, only=None, echo=None) -> list[SuiteResult]:
    out = []
    for number, _, _ in SUITES:
        if only and number not in only:
            continue
        res = run_suite(number, max_pn, seed)
        if echo is not None:
            echo(res.line())
        out.append(res)
    return out
