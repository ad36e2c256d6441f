import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from autoreal import pgroups as pg
from autoreal.errors import BoundError, ParseError, PreconditionError
from autoreal.oracles import element_order, group_exponent, is_central_subset

from strategies import seeds

SMALL_GRID = [(p, n, j, e) for p in (2, 3) for n in (1, 2) for j in range(1, p**n + 1) for e in range(p) if p ** (j + n) <= 729]


def is_abelian(g):
    t = g.table()
    return np.array_equal(t, t.T)


class TestConstruction:
    def test_klein_four(self):
        g = pg.make_group(2, 1, 1, 0)
        assert g.order == 4 and is_abelian(g) and group_exponent(g.table()) == 2

    def test_cyclic_four(self):
        g = pg.make_group(2, 1, 1, 1)
        assert group_exponent(g.table()) == 4
        assert pg.invariants(g).rank == 1

    def test_dihedral_eight(self):
        g = pg.make_group(2, 1, 2, 0)
        assert g.order == 8 and group_exponent(g.table()) == 4 and not is_abelian(g)

    def test_bound(self):
        with pytest.raises(BoundError):
            pg.make_group(3, 2, 9, 0)
        with pytest.raises(PreconditionError):
            pg.make_group(2, 1, 3, 0)

    @pytest.mark.parametrize("params", SMALL_GRID)
    def test_group_axioms(self, params):
        g = pg.make_group(*params)
        x = g.all()
        assert np.array_equal(g.mul(0, x), x) and np.array_equal(g.mul(x, 0), x)
        assert np.array_equal(g.mul(x, g.inv(x)), np.zeros_like(x))
        rng = np.random.default_rng(0)
        a, b, c = (rng.integers(0, g.order, size=10_000) for _ in range(3))
        assert np.array_equal(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)))


class TestInvariants:
    def test_h2_over_f2(self):
        inv = pg.invariants(pg.make_group(2, 1, 2, 0))
        assert (inv.order, inv.exponent, inv.nilpotency_class, inv.rank) == (8, 4, 2, 2)

    def test_h1_over_f3(self):
        g = pg.make_group(3, 1, 1, 0)
        inv = pg.invariants(g)
        assert (inv.order, inv.exponent, inv.nilpotency_class) == (9, 3, 1) and is_abelian(g)

    def test_h3_over_z4(self):
        g = pg.make_group(2, 2, 3, 0)
        inv = pg.invariants(g)
        assert (inv.order, inv.exponent, inv.nilpotency_class, inv.rank) == (32, 4, 3, 2)
        assert np.array_equal(pg.frattini(g), pg.predicted_frattini(g))

    @pytest.mark.parametrize("params", SMALL_GRID)
    def test_exponent_rule(self, params):
        p, n, j, e = params
        g = pg.make_group(*params)
        expected = p**n if (j < p**n and e == 0) else p ** (n + 1)
        assert pg.invariants(g).exponent == group_exponent(g.table()) == expected

    @pytest.mark.parametrize("params", SMALL_GRID)
    def test_rank_formula(self, params):
        g = pg.make_group(*params)
        inv = pg.invariants(g)
        assert g.p**inv.rank * inv.frattini_order == inv.order

    def test_element_orders_match_oracle(self):
        g = pg.make_group(3, 1, 3, 1)
        t = g.table()
        orders = pg.element_orders(g)
        assert all(orders[x] == element_order(t, x) for x in range(g.order))


class TestQuotients:
    def test_h3_to_h2(self):
        assert int(pg.quotient_kernel(pg.make_group(2, 2, 3, 0), 2).sum()) == 2

    def test_identity_quotient(self):
        g = pg.make_group(3, 1, 2, 0)
        assert np.array_equal(pg.quotient_map(g, pg.quotient_to(g, 2)), g.all())

    def test_twisted_quotient(self):
        g = pg.make_group(2, 1, 2, 1)
        small = pg.quotient_to(g, 1)
        assert small.e == 0
        assert pg.invariants(small) == pg.invariants(pg.make_group(2, 1, 1, 0))
        image = pg.quotient_map(g, small)
        t = g.table()
        assert np.array_equal(image[t], small.table()[image[:, None], image[None, :]])

    def test_range(self):
        with pytest.raises(PreconditionError):
            pg.quotient_to(pg.make_group(2, 1, 1, 0), 2)


class TestIsomorphism:
    def test_twisted_h1_not_isomorphic(self):
        assert pg.brute_isomorphic(pg.make_group(2, 1, 1, 1), pg.make_group(2, 1, 1, 0)) is None

    def test_full_length_twist_is_isomorphic(self):
        g1, g2 = pg.make_group(2, 1, 2, 1), pg.make_group(2, 1, 2, 0)
        phi = pg.brute_isomorphic(g1, g2)
        assert phi is not None and pg.is_homomorphism(g1, g2, phi)
        assert sorted(phi.tolist()) == list(range(8))

    def test_self_gives_identity(self):
        g = pg.make_group(2, 2, 3, 0)
        assert np.array_equal(pg.brute_isomorphic(g, g), g.all())

    def test_bound(self):
        g = pg.make_group(2, 2, 4, 0)
        assert pg.brute_isomorphic(g, g) is not None
        big = pg.make_group(3, 2, 3, 0)
        with pytest.raises(BoundError):
            pg.brute_isomorphic(big, big)


class TestWitt:
    def test_single_step(self):
        (step,) = pg.witt_chain(2, 2, 1, 1)
        assert step.big == (2, 2, 4, 0) and step.small == (2, 2, 3, 0)
        assert step.central and step.kernel_order == 2 and step.complement_found is False and step.ok

    def test_empty_chain_at_largest_c(self):
        assert pg.witt_chain(3, 2, 1, 6) == []

    @pytest.mark.parametrize("c", [3, 4, 5])
    def test_lengths_for_p3(self, c):
        steps = pg.witt_chain(3, 2, 1, c)
        assert len(steps) == 6 - c
        assert all(s.kernel_order == 3 and s.central and s.ok for s in steps)

    def test_kernel_centrality_by_enumeration(self):
        big = pg.make_group(2, 2, 4, 0)
        kernel = np.flatnonzero(big.subgroup_rho_power(3)).tolist()
        assert is_central_subset(big.table(), kernel)

    def test_ranges(self):
        with pytest.raises(PreconditionError):
            pg.witt_chain(2, 2, 0, 1)
        with pytest.raises(PreconditionError):
            pg.witt_chain(2, 2, 1, 3)


class TestExport:
    def test_klein_table_is_latin_square(self):
        text = pg.export_group(pg.make_group(2, 1, 1, 0), "table")
        lines = text.splitlines()
        assert lines[0] == "2 1 1 0" and lines[1] == "4"
        rows = [[int(x) for x in ln.split()] for ln in lines[2:]]
        assert all(sorted(r) == [0, 1, 2, 3] for r in rows)
        assert all(sorted(c) == [0, 1, 2, 3] for c in zip(*rows))
        assert all(rows[x][x] == 0 for x in range(4))

    @pytest.mark.parametrize("params", [(2, 1, 2, 0), (2, 2, 3, 1), (3, 1, 2, 1), (2, 2, 4, 1)])
    def test_pc_round_trip(self, params):
        g = pg.make_group(*params)
        rebuilt = pg.parse_pc(pg.export_group(g, "pc"))
        assert np.array_equal(rebuilt.table(), g.table())

    @pytest.mark.parametrize("params", [(2, 1, 2, 0), (3, 1, 2, 1), (2, 2, 3, 0)])
    def test_table_round_trip(self, params):
        g = pg.make_group(*params)
        h = pg.parse_table(pg.export_group(g, "table"))
        assert h.header == dict(zip("pnje", params))
        assert pg.brute_isomorphic(h, g) is not None
        assert pg.invariants(h) == pg.invariants(g)

    def test_parse_errors(self):
        with pytest.raises(ParseError):
            pg.parse_table("2 1 1 0\n4\n0 1\n")
        with pytest.raises(ParseError):
            pg.parse_table("1 1 1 1\n2\n1 0\n0 1\n")
        with pytest.raises(ParseError):
            pg.parse_pc("p 2\n")

    def test_table_export_bound(self):
        with pytest.raises(BoundError):
            pg.export_group(pg.make_group(3, 2, 4, 0), "table")


@given(st.sampled_from(SMALL_GRID), seeds)
def test_quotient_is_homomorphism(params, seed):
    p, n, j, e = params
    g = pg.make_group(*params)
    rng = np.random.default_rng(seed)
    target = int(rng.integers(1, j + 1))
    small = pg.quotient_to(g, target)
    image = pg.quotient_map(g, small)
    a, b = rng.integers(0, g.order, size=(2, 200))
    assert np.array_equal(image[g.mul(a, b)], small.mul(image[a], image[b]))
    if target < j or e == 0:
        assert np.array_equal(pg.quotient_kernel(g, target), image == 0)


def test_fault_hook_makes_twisted_group_split(monkeypatch):
    monkeypatch.setattr(pg, "INJECT_COCYCLE_FAULT", True)
    g = pg.make_group(2, 1, 1, 1)
    assert group_exponent(g.table()) == 2
