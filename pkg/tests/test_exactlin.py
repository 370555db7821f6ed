import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from orbitspace.exactlin import (IntMatrix, determinant, int_inverse, inverse, kernel_basis, matmul, matvec, rank,
                                 rref, smith_normal_form, solve_rational)

small = st.integers(-20, 20)


def int_matrices(max_rows=8, max_cols=8):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)))


def test_rank_examples():
    assert rank([[1, 0], [0, 1]]) == 2
    assert rank([[1, 2], [2, 4]]) == 1
    assert rank([[0, 0]]) == 0
    assert rank([[Fraction(1, 2), Fraction(1, 3)], [3, 2]]) == 1


def test_rank_matches_floating_point():
    rng = random.Random(7)
    for _ in range(500):
        rows = rng.randint(1, 5)
        M = [[rng.randint(-4, 4) for _ in range(5)] for _ in range(rows)]
        if rng.random() < 0.3:
            M.append([a + b for a, b in zip(M[0], M[-1])])
        assert rank(M) == np.linalg.matrix_rank(np.array(M, dtype=float), tol=1e-9)


def test_snf_diag_2_3():
    res = smith_normal_form([[2, 0], [0, 3]])
    assert res.diagonal == (1, 6)
    assert (res.U @ res.D @ res.V) == IntMatrix.from_rows([[2, 0], [0, 3]])


def test_snf_zero_and_unimodular():
    res = smith_normal_form([[0, 0], [0, 0]])
    assert res.diagonal == (0, 0) and res.rank == 0
    assert res.U == IntMatrix.identity(2) and res.V == IntMatrix.identity(2)
    assert smith_normal_form([[1, 1], [0, 1]]).diagonal == (1, 1)


@settings(max_examples=300, deadline=None)
@given(int_matrices())
def test_snf_round_trip(rows):
    A = IntMatrix.from_rows(rows)
    res = smith_normal_form(A)
    assert res.U @ res.D @ res.V == A
    assert abs(determinant(res.U.tolist())) == 1 and abs(determinant(res.V.tolist())) == 1
    assert res.U @ res.U_inv == IntMatrix.identity(A.rows)
    assert res.V @ res.V_inv == IntMatrix.identity(A.cols)
    d = [x for x in res.diagonal if x]
    assert all(x > 0 for x in d)
    assert all(b % a == 0 for a, b in zip(d, d[1:]))
    assert len(d) == res.rank == rank(rows)
    off = [res.D[i, j] for i in range(A.rows) for j in range(A.cols) if i != j]
    assert not any(off)


def test_snf_1000_fuzzed():
    rng = random.Random(11)
    for _ in range(1000):
        r, c = rng.randint(1, 8), rng.randint(1, 8)
        A = IntMatrix.from_rows([[rng.randint(-20, 20) for _ in range(c)] for _ in range(r)])
        res = smith_normal_form(A)
        assert res.U @ res.D @ res.V == A


def test_snf_deterministic():
    A = [[4, 6, 2], [2, 8, 10]]
    assert smith_normal_form(A) == smith_normal_form(A)


def test_kernel_examples():
    assert kernel_basis([[1, 1]]) == [(Fraction(-1), Fraction(1))] or kernel_basis([[1, 1]]) == [(1, -1)]
    assert kernel_basis([[1, 0], [0, 1]]) == []


@settings(max_examples=200, deadline=None)
@given(int_matrices(5, 6))
def test_kernel_substitution(rows):
    ker = kernel_basis(rows)
    assert len(ker) + rank(rows) == len(rows[0])
    for v in ker:
        assert all(x == 0 for x in matvec(rows, v))
    if ker:
        assert rank(ker) == len(ker)


@settings(max_examples=200, deadline=None)
@given(int_matrices(4, 4), st.randoms(use_true_random=False))
def test_rank_invariant_under_permutation_and_unimodular(rows, rnd):
    r = rank(rows)
    perm = list(range(len(rows)))
    rnd.shuffle(perm)
    assert rank([rows[i] for i in perm]) == r
    cperm = list(range(len(rows[0])))
    rnd.shuffle(cperm)
    assert rank([[row[j] for j in cperm] for row in rows]) == r
    n = len(rows[0])
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    if n > 1:
        U[0][1] = rnd.randint(-5, 5)
    assert rank(matmul(rows, U)) == r


def test_inverse_and_determinant():
    M = [[2, 1], [5, 3]]
    assert determinant(M) == 1
    assert int_inverse(M) == IntMatrix.from_rows([[3, -1], [-5, 2]])
    Minv = inverse([[2, 0], [0, 4]])
    assert Minv == [[Fraction(1, 2), 0], [0, Fraction(1, 4)]]
    with pytest.raises(Exception):
        int_inverse([[2, 0], [0, 1]])


def test_rref_and_solve():
    R, piv = rref([[1, 2, 3], [2, 4, 7]])
    assert piv == [0, 2]
    x = solve_rational([[1, 1], [1, -1]], [3, 1])
    assert tuple(x) == (2, 1)
    assert solve_rational([[1, 1], [1, 1]], [1, 2]) is None


def test_intmatrix_shape_guard():
    with pytest.raises(ValueError):
        IntMatrix(2, 2, (1, 2, 3))
    with pytest.raises(ValueError):
        IntMatrix.from_rows([[1, 2], [3]])
