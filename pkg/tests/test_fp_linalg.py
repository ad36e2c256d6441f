import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from autoreal.errors import InvariantError
from autoreal.fp_linalg import EchelonBasis, FpMatrix, block_diag, image_basis, kernel_basis, rank, rref, solve
from autoreal.oracles import rank_mod_p

from strategies import matrices


class TestExamples:
    def test_rank_identity_f2(self):
        assert rank(FpMatrix.identity(2, 3)) == 3

    def test_rank_zero_f3(self):
        assert rank(FpMatrix.zeros(3, 2, 2)) == 0

    def test_rank_equal_rows(self):
        assert rank(FpMatrix(2, [[1, 1], [1, 1]])) == 1

    def test_kernel_of_identity_is_empty(self):
        assert kernel_basis(FpMatrix.identity(5, 4)) == []

    def test_kernel_of_zero_is_standard_basis(self):
        assert kernel_basis(FpMatrix.zeros(2, 2, 2)) == [(1, 0), (0, 1)]

    def test_kernel_of_sum_row(self):
        assert kernel_basis(FpMatrix(2, [[1, 1]])) == [(1, 1)]

    def test_solve_identity(self):
        assert solve(FpMatrix.identity(7, 3), (3, 9, 13)) == (3, 2, 6)

    def test_solve_inconsistent(self):
        assert solve(FpMatrix.zeros(3, 2, 2), (1, 0)) is None

    def test_solve_sets_free_variables_to_zero(self):
        assert solve(FpMatrix(2, [[1, 1]]), (1,)) == (1, 0)


def test_entries_are_reduced_and_immutable():
    m = FpMatrix(5, [[7, -1], [10, 4]])
    assert m.tolist() == [[2, 4], [0, 4]]
    with pytest.raises(ValueError):
        m.entries[0, 0] = 1


def test_non_prime_modulus_rejected():
    with pytest.raises(InvariantError):
        FpMatrix(4, [[1]])


def test_singular_inverse_raises():
    with pytest.raises(InvariantError):
        FpMatrix(3, [[1, 2], [2, 1]]).inverse()


def test_negative_power_uses_inverse():
    a = FpMatrix(5, [[1, 2], [3, 4]])
    assert a.power(-2) @ a.power(2) == FpMatrix.identity(5, 2)


def test_block_diag_layout():
    d = block_diag([FpMatrix(3, [[1, 1], [0, 1]]), FpMatrix(3, [[2]])])
    assert d.tolist() == [[1, 1, 0], [0, 1, 0], [0, 0, 2]]


def test_rref_pivots():
    r, piv = rref(FpMatrix(3, [[0, 2, 1], [0, 1, 2]]))
    assert piv == [1]
    assert r.tolist()[0] == [0, 1, 2]


@given(matrices())
def test_rank_matches_oracle(m):
    assert rank(m) == rank_mod_p(m.tolist(), m.p)


@given(matrices())
def test_rank_of_transpose(m):
    assert rank(m) == rank(m.T)


@given(matrices())
def test_rank_nullity(m):
    ker = kernel_basis(m)
    assert m.cols == rank(m) + len(ker)
    for v in ker:
        assert not any(m @ v)


@given(matrices())
def test_kernel_basis_is_independent(m):
    ker = kernel_basis(m)
    assert rank_mod_p([list(v) for v in ker], m.p) == len(ker) if ker else True


@given(matrices(), st.data())
def test_solve_by_substitution(m, data):
    x = data.draw(st.lists(st.integers(0, m.p - 1), min_size=m.cols, max_size=m.cols))
    b = m @ tuple(x)
    sol = solve(m, b)
    assert sol is not None
    assert m @ sol == b


@given(matrices(square=True))
def test_inverse_round_trip(m):
    if rank(m) < m.rows:
        return
    inv = m.inverse()
    assert inv @ m == FpMatrix.identity(m.p, m.rows)
    assert m @ inv == FpMatrix.identity(m.p, m.rows)


@given(matrices())
def test_image_basis_spans_column_space(m):
    basis = image_basis(m)
    assert len(basis) == rank(m)
    joint = [list(v) for v in basis] + m.T.tolist()
    assert rank_mod_p(joint, m.p) == rank(m) if m.rows else True


@given(matrices(max_rows=6, max_cols=6))
def test_echelon_basis_tracks_rank(m):
    eb = EchelonBasis(m.p, m.cols)
    added = sum(eb.add(tuple(row)) for row in m.tolist())
    assert added == len(eb) == rank(m)
    for row in m.tolist():
        assert eb.contains(row)
