import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from autoreal import gmodule as gm
from autoreal.errors import InvariantError, ParseError, PreconditionError
from autoreal.fp_linalg import FpMatrix, kernel_basis, rank
from autoreal.group_ring import GroupRingContext
from autoreal.oracles import sigma_type

from strategies import group_ring_params, seeds


def identity_module(p, n, dim):
    return gm.GModule(GroupRingContext(p, n), FpMatrix.identity(p, dim))


def test_trivial_action_type():
    assert gm.jordan_type(identity_module(3, 1, 5)) == [1, 1, 1, 1, 1]


def test_single_block_type():
    assert gm.jordan_type(gm.module_from_type(GroupRingContext(2, 2), [4])) == [4]


def test_canonical_block_is_identity_plus_subdiagonal():
    assert gm.canonical_block(3, 3).tolist() == [[1, 0, 0], [1, 1, 0], [0, 1, 1]]


def test_random_module_matches_oracle():
    rng = np.random.default_rng(7)
    m, planted = gm.random_module(GroupRingContext(3, 2), 10, rng)
    assert gm.jordan_type(m) == sigma_type(m.sigma.tolist(), 3) == planted


def test_zero_dimensional_module():
    m = gm.GModule(GroupRingContext(2, 1), FpMatrix.zeros(2, 0, 0))
    d = gm.decompose(m)
    assert d.type == [] and d.generators == []


def test_already_split_module():
    m = gm.module_from_type(GroupRingContext(2, 2), [3, 1])
    d = gm.decompose(m)
    assert d.type == [3, 1]
    assert d.basis_change.inverse() @ m.sigma @ d.basis_change == m.sigma


def test_generators_are_first_vectors_of_their_blocks():
    rng = np.random.default_rng(3)
    m, _ = gm.random_module(GroupRingContext(3, 2), 14, rng)
    d = gm.decompose(m)
    col = 0
    for g, length in zip(d.generators, d.type):
        assert d.basis_change.column(col) == g
        col += length


def test_non_unipotent_sigma_rejected():
    with pytest.raises(InvariantError):
        gm.GModule(GroupRingContext(3, 1), FpMatrix(3, [[2, 0], [0, 1]]))


def test_cyclic_submodule_lengths():
    m = gm.module_from_type(GroupRingContext(3, 1), [3, 2])
    assert gm.cyclic_submodule(m, (0,) * 5)[1] == 0
    assert gm.cyclic_submodule(m, (0, 0, 1, 0, 0))[1] == 1
    sub, length = gm.cyclic_submodule(m, (1, 0, 0, 0, 0))
    assert length == 3 and gm.jordan_type(sub) == [3]


def test_cyclic_submodule_of_scrambled_generator():
    rng = np.random.default_rng(11)
    base = gm.module_from_type(GroupRingContext(2, 3), [5, 8, 2])
    P = gm.random_invertible(2, base.dim, rng)
    m = gm.scramble(base, P)
    assert gm.cyclic_submodule(m, P.column(5))[1] == 8


def test_dual_examples():
    ctx = GroupRingContext(5, 1)
    assert gm.jordan_type(gm.dual_module(gm.module_from_type(ctx, [1]))) == [1]
    assert gm.jordan_type(gm.dual_module(gm.module_from_type(ctx, [4]))) == [4]


def test_projector_trivial_epsilon():
    ctx = GroupRingContext(3, 1)
    eps = gm.EpsilonStructure(FpMatrix.identity(3, 2), 1, 1)
    m = gm.GModule(ctx, gm.canonical_block(3, 2), eps)
    assert gm.epsilon_projector(m) == FpMatrix.identity(3, 2)


def test_projector_p3_s2():
    ctx = GroupRingContext(3, 1)
    eps_m = FpMatrix(3, [[2, 0, 0], [0, 2, 0], [0, 0, 1]])
    structure = gm.EpsilonStructure(eps_m, 2, 2)
    assert structure.z == 1
    m = gm.GModule(ctx, gm.module_from_type(ctx, [2, 1]).sigma, structure)
    T = gm.epsilon_projector(m)
    assert T == FpMatrix.identity(3, 3).scale(2) + eps_m
    assert (FpMatrix.identity(3, 3).scale(2) - eps_m) @ T == FpMatrix.zeros(3, 3, 3)
    assert kernel_basis(eps_m - FpMatrix.identity(3, 3).scale(2)) == [(1, 0, 0), (0, 1, 0)]
    assert rank(T) == 2


def test_eigenspace_examples():
    ctx = GroupRingContext(5, 1)
    base = gm.module_from_type(ctx, [3, 2])
    whole = gm.GModule(ctx, base.sigma, gm.EpsilonStructure(FpMatrix.identity(5, 5).scale(4), 2, 4))
    assert gm.eigenspace(whole).dim == 5
    none = gm.GModule(ctx, base.sigma, gm.EpsilonStructure(FpMatrix.identity(5, 5).scale(4), 2, 1))
    assert gm.eigenspace(none).dim == 0


def test_epsilon_structure_validation():
    with pytest.raises(InvariantError):
        gm.EpsilonStructure(FpMatrix.identity(3, 1), 3, 1)  # s divisible by p
    with pytest.raises(InvariantError):
        gm.EpsilonStructure(FpMatrix.identity(5, 1), 2, 2)  # 2^2 != 1 mod 5
    with pytest.raises(PreconditionError):
        gm.epsilon_projector(identity_module(3, 1, 2))


def test_json_round_trip_and_errors():
    ctx = GroupRingContext(3, 1)
    m = gm.GModule(ctx, gm.canonical_block(3, 2), gm.EpsilonStructure(FpMatrix.identity(3, 2).scale(2), 2, 2))
    assert gm.module_from_json(gm.module_to_json(m)) == m
    with pytest.raises(ParseError):
        gm.module_from_json({"p": 3, "n": 1, "dim": 2, "sigma": [[1, 0]]})
    with pytest.raises(ParseError):
        gm.module_from_json({"p": 3, "dim": 1})


@given(group_ring_params(), seeds, st.integers(1, 30))
def test_decompose_recovers_planted_type(params, seed, dim):
    p, n = params
    rng = np.random.default_rng(seed)
    m, planted = gm.random_module(GroupRingContext(p, n), dim, rng)
    d = gm.decompose(m)
    assert d.type == planted == sigma_type(m.sigma.tolist(), p)
    assert sum(d.type) == m.dim
    assert d.basis_change.inverse() @ m.sigma @ d.basis_change == gm.canonical_form(d)


@given(group_ring_params(), seeds, st.integers(1, 20))
def test_type_invariant_under_conjugation(params, seed, dim):
    p, n = params
    rng = np.random.default_rng(seed)
    m, _ = gm.random_module(GroupRingContext(p, n), dim, rng)
    again = gm.scramble(m, gm.random_invertible(p, dim, rng))
    assert gm.jordan_type(again) == gm.jordan_type(m)
    assert gm.jordan_type(gm.dual_module(m)) == gm.jordan_type(m)


@given(group_ring_params(), seeds, st.integers(1, 20))
def test_nilpotency(params, seed, dim):
    p, n = params
    m, _ = gm.random_module(GroupRingContext(p, n), dim, np.random.default_rng(seed))
    assert m.rho.power(p**n).is_zero()
    assert m.sigma.power(p**n).is_identity()


@given(st.sampled_from([(3, 1), (3, 2), (5, 1), (5, 2)]), st.sampled_from([2, 4]), seeds)
def test_projector_properties(pn, s, seed):
    from autoreal.acceptance import random_commuting_pair

    p, n = pn
    m = random_commuting_pair(p, n, s, np.random.default_rng(seed))
    T = gm.epsilon_projector(m)
    I = FpMatrix.identity(p, m.dim)
    assert T @ T == T
    assert T @ m.sigma == m.sigma @ T
    assert (I.scale(m.epsilon.t) - m.epsilon.matrix) @ T == FpMatrix.zeros(p, m.dim, m.dim)
    assert rank(T) + rank(I - T) == m.dim
    for v in gm.eigenspace_basis(m):
        assert T @ v == v
    sub = gm.eigenspace(m)
    assert sub.dim == rank(T)
