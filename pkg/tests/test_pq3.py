import random
from fractions import Fraction as F

import pytest

from htwist.errors import (BNotClosed, CourantAxiomFail, InfiniteSlice, NoSolution, NotDegree4,
                           NotNilpotent, ShapeError)
from htwist.gradedpoly import GPoly, poisson_bracket
from htwist.pq3 import (COMPONENTS, KAPPA, NORM, CourantData, PQ3Data, SplitData, build_theta, check_split,
                        courant_theta, derived_structures, lift_courant, lift_data, nilpotence_residual,
                        pq3_space, solve_h_given_B, space_of, split_cohomology, tangent_complex_check,
                        transform_split)
from htwist.samples import (heisenberg5_split, perturb_split, random_invertible, random_split, su2,
                            su2_twisted)
from htwist.twistcore import check_axioms
from oracles import pq3_table, poisson_oracle, words_of_degree


def words(p: GPoly) -> dict:
    return {tuple(i for i, e in enumerate(m) for _ in range(e)): c for m, c in p.terms.items()}


def su2_split(**kw):
    return SplitData(3, su2().bracket_dict(), **kw)


SO3 = CourantData(0, 3, {}, [[F(-1, 2) if i == j else 0 for j in range(3)] for i in range(3)], {(0, 1, 2): -2})
M1N1 = CourantData(1, 1, {(0, 0): {(1,): 1}}, [[1]], {})


# -- split equations


def test_untwisted_split_valid():
    rep = check_split(su2_split())
    assert rep.valid and rep.cross_check
    assert rep.algebra.is_untwisted()


def test_abelian_split_with_orthogonal_b():
    S = SplitData(5, {}, {(0, 1, 2, 3): F(7, 2)}, {(4, 4): 3})
    assert S.twist() == {}
    assert check_split(S).valid


def test_n5_instance_with_twist():
    S = heisenberg5_split()
    rep = check_split(S)
    assert rep.valid and rep.cross_check
    assert S.twist() == {(0, 1, 2, 3): KAPPA}
    h = solve_h_given_B(S.algebra(), S.B)
    assert SplitData(5, S.C, h, S.B).twist() == S.twist()


def test_split_failure_locations():
    S = SplitData(3, {(0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1, (0, 1, 0): 1})
    rep = check_split(S)
    assert rep.jacobi and not rep.valid and rep.cross_check is None


def test_db_residual():
    rep = check_split(su2_split(B={(0, 0): 1}))
    assert rep.dB and not rep.jacobi


def test_split_index_check():
    with pytest.raises(ShapeError):
        SplitData(3, {(0, 1, 3): 1})


# -- solving for h


def test_solve_trivial():
    assert solve_h_given_B(su2(), {}) == {}


def test_rank3_twist_not_splittable():
    with pytest.raises(NoSolution):
        solve_h_given_B(su2_twisted(), {})


def test_rank3_twist_any_b():
    rng = random.Random(4)
    for _ in range(10):
        B = {(a, b): rng.randint(-2, 2) for a in range(3) for b in range(a, 3)}
        with pytest.raises((NoSolution, BNotClosed)):
            solve_h_given_B(su2_twisted(), B)


def test_solve_rejects_open_b():
    with pytest.raises(BNotClosed):
        solve_h_given_B(su2(), {(0, 0): 1})


@pytest.mark.parametrize("lam,mu", [(1, 1), (2, -3), (F(1, 2), 5)])
def test_solve_recovers_constructed_h(lam, mu):
    S = heisenberg5_split(lam, mu)
    h = solve_h_given_B(S.algebra(), S.B)
    S2 = SplitData(5, S.C, h, S.B)
    assert check_split(S2).valid and S2.twist() == S.twist()


# -- Theta


def test_theta_su2():
    sp = pq3_space(0, 3)
    g = sp.gen
    want = (g(sp.xi(1)) * g(sp.xi(2)) * g(sp.b(0)) + g(sp.xi(2)) * g(sp.xi(0)) * g(sp.b(1))
            + g(sp.xi(0)) * g(sp.xi(1)) * g(sp.b(2)))
    assert build_theta(su2_split()) == want


def test_theta_zero():
    assert build_theta(SplitData(3)).is_zero()


def test_theta_polynomial_base():
    sp = pq3_space(1, 1)
    g = sp.gen
    assert build_theta(PQ3Data(1, 1, {(0, 0): {(1,): 1}})) == g(sp.x(0)) * g(sp.theta(0)) * g(sp.xi(0))


def test_theta_degree_four():
    assert build_theta(heisenberg5_split()).degree() == 4


# -- nilpotence


def test_residual_su2_zero():
    assert nilpotence_residual(build_theta(su2_split())).is_zero


def test_perturbed_c_lands_in_jacobi_component():
    S = SplitData(3, {**su2_split().C, (0, 1, 0): 1})
    res = nilpotence_residual(build_theta(S))
    assert res.nonzero_components() == ["xi3_b"]


def test_anchor_condition_component():
    # rho = (1, 0) with [e1, e2] = e1 breaks rho[.,.] = [rho, rho]
    res = nilpotence_residual(build_theta(PQ3Data(1, 2, {(0, 0): 1}, {(0, 1, 0): 1})))
    assert "theta_xi_xi" in res.nonzero_components()


def test_residual_components_cover_total():
    rng = random.Random(7)
    for _ in range(10):
        S, _ = perturb_split(rng, random_split(rng))
        res = nilpotence_residual(build_theta(S))
        acc = res.total.alg.zero()
        for name in res.components:
            assert name in COMPONENTS
            acc = acc + res.components[name]
        assert acc == res.total


@pytest.mark.parametrize("seed", range(8))
def test_residual_matches_word_oracle(seed):
    rng = random.Random(seed)
    S = random_split(rng)
    if seed % 2:
        S, _ = perturb_split(rng, S)
    theta = build_theta(S)
    degs, table = pq3_table(0, S.n)
    full = poisson_oracle(words(theta), words(theta), degs, table)
    assert words(nilpotence_residual(theta).total) == {k: v / 2 for k, v in full.items()}


def test_polynomial_residual_matches_word_oracle():
    P = PQ3Data(1, 2, {(0, 0): {(1,): 1}, (0, 1): {(2,): 1}}, {(0, 1, 1): {(0,): 2}}, {}, {(1, 1): 1})
    theta = build_theta(P)
    degs, table = pq3_table(1, 2)
    full = poisson_oracle(words(theta), words(theta), degs, table)
    assert words(nilpotence_residual(theta).total) == {k: v / 2 for k, v in full.items()}


def test_not_degree_four():
    sp = pq3_space(0, 2)
    with pytest.raises(NotDegree4):
        nilpotence_residual(sp.gen(sp.b(0)))


@pytest.mark.parametrize("seed", range(15))
def test_split_equivalence(seed):
    rng = random.Random(100 + seed)
    S = random_split(rng)
    for cand in (S, perturb_split(rng, S)[0]):
        assert check_split(cand).valid == nilpotence_residual(build_theta(cand)).is_zero


# -- derived brackets


def test_derived_su2_bracket():
    D = derived_structures(build_theta(su2_split()))
    assert D.C[(0, 1, 2)] == 1
    assert D.C == su2_split().C


def test_b_normalization():
    D = derived_structures(build_theta(SplitData(2, {}, {}, {(0, 0): 2, (1, 1): 5})))
    assert D.raw["B"] == {(0, 0): 2 * NORM["B"], (1, 1): 5 * NORM["B"]}
    assert D.B == {(0, 0): 2, (1, 1): 5}


def test_h_normalization():
    D = derived_structures(build_theta(SplitData(4, {}, {(0, 1, 2, 3): 3})))
    assert D.raw["h"] == {(0, 1, 2, 3): 3 * NORM["h"]}


def test_c_normalization():
    D = derived_structures(build_theta(su2_split()))
    assert D.raw["C"][(0, 1, 2)] == NORM["C"]


@pytest.mark.parametrize("seed", range(10))
def test_derived_recovers_random(seed):
    S = random_split(random.Random(seed))
    assert derived_structures(build_theta(S)).split_data() == S


def test_derived_anchor():
    P = PQ3Data(1, 2, {(0, 0): {(1,): 1}}, {}, {}, {(1, 1): 1})
    D = derived_structures(build_theta(P))
    assert set(D.rho) == {(0, 0)}
    sp = space_of(build_theta(P))
    assert D.rho[(0, 0)] == sp.gen(sp.x(0))


def test_derived_needs_nilpotent():
    with pytest.raises(NotNilpotent):
        derived_structures(build_theta(SplitData(3, {**su2_split().C, (0, 1, 0): 1})))


# -- Courant lift


def test_so3_lift():
    L = lift_courant(SO3)
    assert L.nilpotent
    assert not L.data.h and not L.data.B and not L.data.rho
    assert L.data.C[(0, 1, 2)] == {(): 1}
    theta_A, spec = courant_theta(SO3)
    assert poisson_bracket(theta_A, theta_A, spec).is_zero()


def test_zero_courant():
    L = lift_courant(CourantData(0, 2))
    assert L.theta.is_zero() and L.theta_A.is_zero()


def test_m1n1_is_not_courant():
    # {rho xi b, rho xi b} = rho g rho b b = x^2 b b, computed by hand
    theta_A, spec = courant_theta(M1N1)
    alg = theta_A.alg
    assert poisson_bracket(theta_A, theta_A, spec) == alg.gen("x1") * alg.gen("x1") * alg.gen("b1") * alg.gen("b1")
    with pytest.raises(CourantAxiomFail):
        lift_courant(M1N1)


def test_lift_b_is_rho_g_pairing():
    # B^{n+i, b} = rho^i_a g^{ab}
    P = lift_data(M1N1)
    assert P.B == {(0, 1): {(1,): 1}}
    CD = CourantData(1, 2, {(0, 0): {(1,): 1}}, [[0, 1], [1, 0]], {})
    assert lift_data(CD).B[(1, 2)] == {(1,): 1}
    assert (0, 2) not in lift_data(CD).B


def test_valid_polynomial_lift_nilpotent():
    CD = CourantData(1, 2, {(0, 0): {(1,): 1}}, [[0, 1], [1, 0]], {})
    L = lift_courant(CD)
    assert L.nilpotent
    sp = space_of(L.theta)
    assert derived_structures(L.theta).B[(1, 2)] == sp.xpoly(L.data.B[(1, 2)])


def test_courant_metric_checks():
    with pytest.raises(ShapeError):
        CourantData(0, 2, {}, [[1, 1], [1, 1]])
    with pytest.raises(ShapeError):
        CourantData(0, 2, {}, [[1, 2], [0, 1]])


# -- split cohomology


@pytest.mark.parametrize("seed", range(6))
def test_h0_is_one(seed):
    assert split_cohomology(random_split(random.Random(seed)), 0)[0] == 1


def test_su2_degree_one():
    assert split_cohomology(su2_split(), 1) == {0: 1, 1: 0}


def test_abelian_zero_data_is_slice_dimension():
    dims = split_cohomology(SplitData(2), 5)
    assert dims == {k: len(words_of_degree([1, 1, 2, 2], k)) for k in range(6)}


def test_split_cohomology_needs_point_base():
    with pytest.raises(InfiniteSlice):
        split_cohomology(PQ3Data(1, 1), 2)
    with pytest.raises(NotNilpotent):
        split_cohomology(SplitData(3, {**su2_split().C, (0, 1, 0): 1}), 2)


# -- tangent complex


def test_tangent_point_base_vacuous():
    assert tangent_complex_check(heisenberg5_split().to_pq3()).valid


def test_tangent_lift_with_zero_anchor():
    assert tangent_complex_check(lift_courant(SO3).data).valid


def test_tangent_polynomial():
    assert tangent_complex_check(PQ3Data(1, 2, {(0, 0): {(1,): 1}}, {}, {}, {(1, 1): 1})).valid
    rep = tangent_complex_check(PQ3Data(1, 2, {(0, 0): {(1,): 1}}, {}, {}, {(0, 0): 1}))
    assert rep.rho_B == {(0, 0): {(1,): 1}} and rep.B_rhoT == {(0, 0): {(1,): 1}}


# -- change of basis


@pytest.mark.parametrize("seed", range(5))
def test_transform_split_roundtrip(seed):
    rng = random.Random(seed)
    S = random_split(rng, conjugate=False)
    g, gi = random_invertible(rng, S.n)
    S2 = transform_split(S, g, gi)
    assert check_split(S2).valid
    assert transform_split(S2, gi, g) == S
    assert check_axioms(S2.algebra()).valid
