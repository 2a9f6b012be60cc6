import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from htwist.errors import DimError, JacobiFail, ShapeError
from htwist.samples import (abelian, heisenberg, lie_algebras_rank3, random_bracket_twist, random_form,
                            random_invertible, random_rank3_twist, sl2, su2, su2_b_twist, su2_twisted)
from htwist.twistcore import (MultiForm, TwistedLieAlgebra, add_bracket, check_axioms, connection,
                              exterior_derivative, from_rank3_twist, h_tilde, is_lie, trace, transform,
                              twist_residual, unit, wedge)
from oracles import Alg, d_oracle, htilde_oracle

VOL_X2 = MultiForm(3, 3, 1, {((0, 1, 2), (1,)): 1})


def mf(n, p, q, key, c=1):
    return MultiForm(n, p, q, {key: c})


def oracle_of(T):
    return Alg(T.n, T.bracket_dict(), T.twist_dict())


def as_oracle_coeffs(f: MultiForm):
    return {(I, J[0] if J else None): c for (I, J), c in f.coeffs.items()}


# -- axioms


def test_su2_b_is_valid():
    T = su2_twisted()
    rep = check_axioms(T)
    assert rep.valid and rep.jacobi_max == 0 and rep.dH_max == 0
    assert T.twist_form() == VOL_X2


@pytest.mark.parametrize("name", sorted(lie_algebras_rank3()))
def test_lie_algebras_valid(name):
    assert is_lie(lie_algebras_rank3()[name])


def test_wrong_twist_flagged():
    # su(2) Jacobiator vanishes, so the residual is -H = -X1 on (1,2,3)
    T = TwistedLieAlgebra(3, su2().bracket_dict(), {(0, 1, 2, 0): 1})
    rep = check_axioms(T)
    assert not rep.valid
    assert rep.jacobi == {(0, 1, 2): {0: F(-1)}}


def test_bracket_shape_errors():
    with pytest.raises(ShapeError):
        TwistedLieAlgebra(2, {(0, 2, 1): 1})


# -- connection


def test_connection_su2():
    assert connection(su2(), 2, unit(3, 0)) == unit(3, 1)


def test_connection_zero_and_abelian():
    assert not any(connection(su2(), 0, [0, 0, 0]))
    A = abelian(3)
    assert all(not any(connection(A, a, unit(3, b))) for a in range(3) for b in range(3))


# -- D


def test_d_of_b_on_su2():
    assert exterior_derivative(su2(), su2_b_twist()) == VOL_X2


def test_d_of_constant():
    assert exterior_derivative(su2(), mf(3, 0, 0, ((), ()), 7)).is_zero()


def test_d_of_xi1_on_su2():
    got = exterior_derivative(su2(), mf(3, 1, 0, ((0,), ())))
    assert got == mf(3, 2, 0, ((1, 2), ()), -1)
    assert as_oracle_coeffs(got) == d_oracle(oracle_of(su2()), 1, 0, {((0,), None): F(1)})


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(0, 3), st.integers(0, 1))
def test_d_matches_evaluation_oracle(seed, p, q):
    rng = random.Random(seed)
    T = random_rank3_twist(rng)
    f = random_form(rng, 3, p, q, density=0.6)
    got = exterior_derivative(T, f)
    assert as_oracle_coeffs(got) == d_oracle(oracle_of(T), p, q, as_oracle_coeffs(f))


# -- H~ and trace


def test_htilde_su2_b():
    T = su2_twisted()
    assert h_tilde(T, mf(3, 1, 0, ((1,), ()))) == mf(3, 3, 0, ((0, 1, 2), ()), -1)
    assert h_tilde(T, mf(3, 1, 0, ((0,), ()))).is_zero()
    assert h_tilde(T, mf(3, 1, 0, ((2,), ()))).is_zero()


def test_htilde_vanishes_without_twist():
    f = random_form(random.Random(0), 3, 1, 1)
    assert h_tilde(su2(), f).is_zero()


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(0, 2), st.integers(0, 1))
def test_htilde_matches_oracle(seed, p, q):
    rng = random.Random(seed)
    T = random_rank3_twist(rng)
    f = random_form(rng, 3, p, q, density=0.6)
    got = h_tilde(T, f)
    assert as_oracle_coeffs(got) == htilde_oracle(oracle_of(T), p, q, as_oracle_coeffs(f))


def test_trace_examples():
    assert trace(mf(3, 1, 1, ((0,), (0,)))) == mf(3, 0, 0, ((), ()), 1)
    assert trace(mf(3, 1, 1, ((0,), (1,)))).is_zero()
    f = mf(3, 2, 2, ((0, 1), (0, 1)))
    assert trace(trace(f)).is_zero()


def test_trace_needs_slots():
    with pytest.raises(ShapeError):
        trace(mf(3, 1, 0, ((0,), ())))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(2, 3), st.integers(2, 3))
def test_trace_squares_to_zero(seed, p, q):
    f = random_form(random.Random(seed), 4, p, q, density=0.5)
    assert trace(trace(f)).is_zero()


def test_wedge_signs():
    x1, x2 = mf(3, 1, 0, ((0,), ())), mf(3, 1, 0, ((1,), ()))
    assert wedge(x2, x1) == -wedge(x1, x2)
    assert wedge(x1, x1).is_zero()


def test_multiform_alternation_on_construction():
    assert MultiForm(3, 2, 0, {((1, 0), ()): 1}) == mf(3, 2, 0, ((0, 1), ()), -1)
    with pytest.raises(ShapeError):
        MultiForm(3, 2, 0, {((0,), ()): 1})


# -- twist constructions


def test_rank3_twist_example():
    T = from_rank3_twist(su2(), su2_b_twist())
    assert T.twist_dict() == {(0, 1, 2, 1): F(1)}
    assert T.bracket_dict() == add_bracket(su2(), su2_b_twist())


def test_zero_b_keeps_algebra():
    T = from_rank3_twist(sl2(), MultiForm.zero(3, 2, 1))
    assert T.bracket_dict() == sl2().bracket_dict() and T.is_untwisted()


def test_rank3_twist_rejects():
    with pytest.raises(DimError):
        from_rank3_twist(abelian(4), MultiForm.zero(4, 2, 1))
    # [e1,e2] = e3, [e3,e1] = e1 has Jacobiator -e3 on (1,2,3)
    bad = TwistedLieAlgebra(3, {(0, 1, 2): 1, (2, 0, 0): 1})
    with pytest.raises(JacobiFail):
        from_rank3_twist(bad, MultiForm.zero(3, 2, 1))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_random_rank3_twists_valid(seed):
    assert check_axioms(random_rank3_twist(random.Random(seed))).valid


@pytest.mark.parametrize("name", sorted(lie_algebras_rank3()))
def test_rank3_residual_vanishes(name):
    rng = random.Random(len(name))
    for _ in range(5):
        H, res = twist_residual(lie_algebras_rank3()[name], random_form(rng, 3, 2, 1))
        assert res.is_zero()


def test_residual_of_zero_b():
    H, res = twist_residual(heisenberg(), MultiForm.zero(3, 2, 1))
    assert H.is_zero() and res.is_zero()


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_rank4_residual_equals_direct_check(seed):
    rng = random.Random(seed)
    B = random_form(rng, 4, 2, 1, density=0.3, span=2)
    H, res = twist_residual(abelian(4), B)
    T = TwistedLieAlgebra(4, add_bracket(abelian(4), B), {(*I, K[0]): v for (I, K), v in H.coeffs.items()})
    assert check_axioms(T).dH == res


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_transform_preserves_validity(seed):
    rng = random.Random(seed)
    T = random_bracket_twist(rng, 4)
    g, gi = random_invertible(rng, 4)
    assert check_axioms(transform(T, g, gi)).valid
    assert transform(transform(T, g, gi), gi, g).bracket_dict() == T.bracket_dict()
