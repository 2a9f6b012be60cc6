import random
from fractions import Fraction as F
from math import comb

import pytest

from htwist.errors import ImageEscapesCochains, ShapeError
from htwist.exactla import RMatrix, coordinates, rank
from htwist.naivecohom import (cochain_basis, delta_matrix, h_tilde_matrix, naive_cohomology_table,
                               naive_d_matrix)
from htwist.samples import heisenberg, random_rank3_twist, sl2, su2, su2_twisted
from htwist.twistcore import exterior_derivative, form_basis, h_tilde
from oracles import Alg, cochain_space, d_oracle, naive_table_oracle


def oracle_of(T):
    return Alg(T.n, T.bracket_dict(), T.twist_dict())


def flat(f, p, q, n=3):
    idx = {k: i for i, k in enumerate(form_basis(n, p, q))}
    v = [F(0)] * len(idx)
    for k, c in f.coeffs.items():
        v[idx[k]] = c
    return v


def endo_matrix(f):
    """(1,1)-form sum M[j][i] xi^i (x) X_j as the matrix M."""
    M = [[F(0)] * 3 for _ in range(3)]
    for (I, J), c in f.coeffs.items():
        M[J[0]][I[0]] = c
    return M


def test_c10_su2_b():
    cb = cochain_basis(su2_twisted(), 1, 0)
    assert cb.dim == 2
    vecs = [flat(v, 1, 0) for v in cb.vectors]
    assert coordinates(vecs, [[1, 0, 0], [0, 0, 1]]) is not None


def test_c11_su2_b_pattern():
    # every cochain has the shape (a,0,b; c,d,e; f,0,-a), and there are six of them
    cb = cochain_basis(su2_twisted(), 1, 1)
    assert cb.dim == 6
    for v in cb.vectors:
        M = endo_matrix(v)
        assert M[0][1] == 0 and M[2][1] == 0 and M[2][2] == -M[0][0]


@pytest.mark.parametrize("p,q", [(0, 0), (1, 0), (2, 1), (3, 2), (1, 2)])
def test_untwisted_full_slice(p, q):
    assert cochain_basis(su2(), p, q).dim == comb(3, p) * comb(3 + q - 1, q)


def test_d_matrix_untwisted_is_chevalley_eilenberg():
    A = oracle_of(su2())
    src = cochain_space(3, 1, 0)
    tgt = cochain_space(3, 2, 0)
    D = naive_d_matrix(su2(), 1, 0).to_dense()
    # cochain bases of an untwisted algebra are the standard ones, in the same order
    for j, key in enumerate(src):
        img = d_oracle(A, 1, 0, {key: F(1)})
        assert [img.get(t, 0) for t in tgt] == [D[i][j] for i in range(len(tgt))]


@pytest.mark.parametrize("q", [0, 1])
def test_d_from_top_degree_is_zero(q):
    D = naive_d_matrix(su2_twisted(), 3, q)
    assert D.rows == 0 or D.is_zero()


def test_d21_rank_matches_oracle_dimension():
    T = su2_twisted()
    d1 = naive_d_matrix(T, 1, 1)
    d2 = naive_d_matrix(T, 2, 1)
    h21 = (cochain_basis(T, 2, 1).dim - rank(d2)) - rank(d1)
    assert h21 == naive_table_oracle(oracle_of(T), 1)[2]


def test_su2_b_tables_against_oracle():
    T = su2_twisted()
    tab = naive_cohomology_table(T, 3, 1)
    assert tab.row(0) == naive_table_oracle(oracle_of(T), 0) == (1, 0, 0, 0)
    assert tab.row(1) == naive_table_oracle(oracle_of(T), 1) == (0, 1, 1, 0)
    assert [tab.cochain_dims[(p, 0)] for p in range(4)] == [1, 2, 3, 1]
    assert [tab.cochain_dims[(p, 1)] for p in range(4)] == [0, 6, 9, 3]


@pytest.mark.parametrize("alg,rows", [(su2, ((1, 0, 0, 1), (0, 0, 0, 0))),
                                      (sl2, ((1, 0, 0, 1), (0, 0, 0, 0))),
                                      (heisenberg, ((1, 2, 2, 1), (1, 4, 5, 2)))])
def test_lie_tables(alg, rows):
    T = alg()
    tab = naive_cohomology_table(T, 3, 1)
    assert (tab.row(0), tab.row(1)) == rows
    assert rows == (naive_table_oracle(oracle_of(T), 0), naive_table_oracle(oracle_of(T), 1))


@pytest.mark.parametrize("seed", range(6))
def test_random_twists_against_oracle(seed):
    T = random_rank3_twist(random.Random(seed))
    tab = naive_cohomology_table(T, 3, 1)
    for q in (0, 1):
        assert tab.row(q) == naive_table_oracle(oracle_of(T), q)


def test_representatives_are_closed_cochains():
    T = su2_twisted()
    tab = naive_cohomology_table(T, 3, 1, representatives=True)
    for (p, q), reps in tab.representatives.items():
        assert len(reps) == tab.dims[(p, q)]
        for r in reps:
            assert h_tilde(T, r).is_zero()
            assert exterior_derivative(T, r).is_zero()


def test_htilde_matrix_shape():
    M = h_tilde_matrix(su2_twisted(), 1, 0)
    assert M.shape == (1, 3)
    assert M.to_dense() == [[0, -1, 0]]


def test_delta_on_c11_is_trace():
    T = su2_twisted()
    cb = cochain_basis(T, 1, 1)
    row = delta_matrix(T, 1, 1).to_dense()[0]
    assert row == [sum(endo_matrix(v)[i][i] for i in range(3)) for v in cb.vectors]


def test_delta_squared_zero_untwisted():
    T = su2()
    composite = delta_matrix(T, 1, 1) @ delta_matrix(T, 2, 2)
    assert composite.is_zero()


def test_delta_on_single_pairing():
    T = su2()
    row = delta_matrix(T, 1, 1).to_dense()[0]
    keys = form_basis(3, 1, 1)
    assert row[keys.index(((0,), (0,)))] == 1


def test_delta_escapes_for_traceful_twist():
    with pytest.raises(ImageEscapesCochains):
        delta_matrix(su2_twisted(), 2, 1)


def test_delta_needs_slots():
    with pytest.raises(ShapeError):
        delta_matrix(su2(), 0, 1)


def test_empty_matrices():
    assert isinstance(naive_d_matrix(su2_twisted(), 0, 1), RMatrix)
    assert cochain_basis(su2(), 4, 0).dim == 0
