import pytest
from hypothesis import given
from hypothesis import strategies as st

from autoreal.errors import BoundError, DimensionError
from autoreal.fp_linalg import rank
from autoreal.group_ring import (
    GroupRingContext,
    QuotientRing,
    element_from_json,
    element_to_json,
    form_q,
    lam,
    psi_matrix,
    rho_to_sigma,
    sigma_to_rho,
)

from strategies import group_ring_params


def test_sigma_is_one_plus_rho():
    assert sigma_to_rho(GroupRingContext(2, 1), [0, 1]).coeffs_rho == (1, 1)


def test_identity_is_fixed_by_basis_change():
    ctx = GroupRingContext(3, 2)
    assert sigma_to_rho(ctx, [1] + [0] * 8).coeffs_rho == (1,) + (0,) * 8


def test_sigma_squared_binomial():
    assert sigma_to_rho(GroupRingContext(3, 1), [0, 0, 1]).coeffs_rho == (1, 2, 1)


def test_rho_times_top_power_vanishes():
    ctx = GroupRingContext(3, 2)
    assert (ctx.rho_power(1) * ctx.rho_power(8)).is_zero()


def test_freshman_square():
    ctx = GroupRingContext(2, 2)
    x = ctx.element([1, 1, 0, 0])
    assert (x * x).coeffs_rho == (1, 0, 1, 0)


def test_norm_element_is_top_rho_power():
    for p, n in [(2, 1), (2, 3), (3, 2), (5, 1), (5, 2)]:
        ctx = GroupRingContext(p, n)
        assert sigma_to_rho(ctx, [1] * ctx.order) == ctx.rho_power(ctx.order - 1)


def test_lambda_examples():
    m3 = QuotientRing(GroupRingContext(3, 1), 3)
    assert lam(m3, (0, 0, 1)) == 1
    assert lam(m3, (1, 1, 0)) == 0
    assert lam(QuotientRing(GroupRingContext(5, 1), 1), (4,)) == 4


def test_form_on_rho_powers():
    mj = QuotientRing(GroupRingContext(3, 2), 5)
    for u in range(5):
        for v in range(5):
            expected = 1 if u + v == 4 else 0
            assert form_q(mj, mj.basis(u), mj.basis(v)) == expected


def test_form_on_m2_over_f2():
    m2 = QuotientRing(GroupRingContext(2, 1), 2)
    assert form_q(m2, (1, 1), (1, 1)) == 0


def test_psi_shape():
    assert psi_matrix(QuotientRing(GroupRingContext(2, 1), 1)).tolist() == [[1]]
    rows = psi_matrix(QuotientRing(GroupRingContext(3, 1), 3)).tolist()
    assert rows == [[0, 0, 1], [0, 1, 0], [1, 0, 0]]


@pytest.mark.parametrize("p,n", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)])
def test_psi_full_rank_and_equivariant(p, n):
    ctx = GroupRingContext(p, n)
    for j in range(1, ctx.order + 1):
        mj = QuotientRing(ctx, j)
        psi, s = psi_matrix(mj), mj.sigma_matrix()
        assert rank(psi) == j
        assert s.T @ psi == psi @ s


@pytest.mark.parametrize("p,n", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)])
def test_no_ideal_inside_kernel_of_lambda(p, n):
    ctx = GroupRingContext(p, n)
    for j in range(1, ctx.order + 1):
        mj = QuotientRing(ctx, j)
        for k in range(j):
            assert any(lam(mj, v) for v in mj.ideal_basis(k))


@pytest.mark.parametrize("p,n", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)])
def test_units_are_exactly_outside_the_maximal_ideal(p, n):
    import itertools

    ctx = GroupRingContext(p, n)
    for j in range(1, min(ctx.order, 4) + 1):
        mj = QuotientRing(ctx, j)
        for a in itertools.product(range(p), repeat=j):
            inv = mj.inverse(a)
            if a[0]:
                assert inv is not None and mj.mul(a, inv) == mj.basis(0)
            else:
                assert inv is None


def test_bound_and_length_errors():
    with pytest.raises(BoundError):
        GroupRingContext(3, 6)
    with pytest.raises(DimensionError):
        GroupRingContext(2, 1).element([1, 0, 0])
    with pytest.raises(DimensionError):
        sigma_to_rho(GroupRingContext(2, 1), [1])


@given(group_ring_params(), st.data())
def test_basis_change_round_trip(params, data):
    p, n = params
    ctx = GroupRingContext(p, n)
    c = data.draw(st.lists(st.integers(0, p - 1), min_size=ctx.order, max_size=ctx.order))
    assert rho_to_sigma(ctx, sigma_to_rho(ctx, c).coeffs_rho) == tuple(c)


@given(group_ring_params(max_order=9), st.data())
def test_multiplication_is_commutative_and_associative(params, data):
    p, n = params
    ctx = GroupRingContext(p, n)
    vec = st.lists(st.integers(0, p - 1), min_size=ctx.order, max_size=ctx.order)
    a, b, c = (ctx.element(data.draw(vec)) for _ in range(3))
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert ctx.one() * a == a


@given(group_ring_params(max_order=9), st.data())
def test_sigma_basis_product_is_convolution_mod_order(params, data):
    p, n = params
    ctx = GroupRingContext(p, n)
    vec = st.lists(st.integers(0, p - 1), min_size=ctx.order, max_size=ctx.order)
    x, y = data.draw(vec), data.draw(vec)
    conv = [0] * ctx.order
    for i, a in enumerate(x):
        for k, b in enumerate(y):
            conv[(i + k) % ctx.order] += a * b
    prod = sigma_to_rho(ctx, x) * sigma_to_rho(ctx, y)
    assert prod.coeffs_sigma() == tuple(v % p for v in conv)


@given(group_ring_params(max_order=9), st.data())
def test_form_is_symmetric_bilinear(params, data):
    p, n = params
    ctx = GroupRingContext(p, n)
    j = data.draw(st.integers(1, ctx.order))
    mj = QuotientRing(ctx, j)
    vec = st.lists(st.integers(0, p - 1), min_size=j, max_size=j)
    a, b, c = data.draw(vec), data.draw(vec), data.draw(vec)
    k = data.draw(st.integers(0, p - 1))
    assert form_q(mj, a, b) == form_q(mj, b, a)
    lhs = form_q(mj, [(x + k * y) % p for x, y in zip(a, c)], b)
    assert lhs == (form_q(mj, a, b) + k * form_q(mj, c, b)) % p


def test_json_round_trip():
    ctx = GroupRingContext(3, 2)
    x = ctx.element([1, 2, 0, 0, 1, 0, 0, 0, 2])
    for basis in ("rho", "sigma"):
        assert element_from_json(element_to_json(x, basis)) == x
