import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from orbitspace.exactlin import rank
from orbitspace.oracle import brute_decompose, brute_q_stable, decomposition_signature
from orbitspace.weights import (WeightMultiset, decompose, image, is_q_stable, restrict, select_xi, sign_normalize,
                                span_rank, stability_level)


def vectors(m, lo=-3, hi=3, max_size=7):
    return st.lists(st.tuples(*[st.integers(lo, hi)] * m), max_size=max_size)


def test_sign_normalize_examples():
    assert sign_normalize([(-1, 0), (1, 0)]).entries == (((1, 0), 2),)
    assert sign_normalize([(0, 0)]).entries == (((0, 0), 1),)
    with pytest.raises(ValueError):
        sign_normalize([(1, 0), (1, 0, 0)])
    with pytest.raises(ValueError):
        sign_normalize([])


@settings(max_examples=200)
@given(vectors(3), st.randoms(use_true_random=False))
def test_sign_normalize_flip_invariant(vs, rnd):
    flipped = [tuple(-x for x in v) if rnd.random() < 0.5 else v for v in vs]
    assert sign_normalize(vs, 3) == sign_normalize(flipped, 3)


def test_span_rank_examples():
    assert span_rank(sign_normalize([(1, 0), (0, 1)])) == 2
    assert span_rank(WeightMultiset(2, ())) == 0
    assert span_rank(sign_normalize([(1, 1), (2, 2)])) == 1


def test_is_q_stable_examples():
    P4 = sign_normalize([(1, 0), (0, 1), (1, 1), (1, -1)])
    P3 = sign_normalize([(1, 0), (0, 1), (1, 1)])
    assert is_q_stable(P4, 2)
    assert not is_q_stable(P3, 2) and is_q_stable(P3, 1)
    zeros = sign_normalize([((0, 0), 3)])
    assert all(is_q_stable(zeros, q) for q in (1, 2, 5))
    assert not is_q_stable(sign_normalize([(1, 0)]), 1)
    assert stability_level(P4) == 2


def test_multiplicity_counts_in_removal():
    # (1,0) twice and (0,1) twice: removing both copies of one kills the span
    P = sign_normalize([((1, 0), 2), ((0, 1), 2)])
    assert is_q_stable(P, 1) and not is_q_stable(P, 2)


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 3).flatmap(lambda m: st.tuples(st.just(m), vectors(m, -2, 2, 6))), st.integers(1, 3))
def test_is_q_stable_matches_brute(mv, q):
    m, vs = mv
    P = sign_normalize(vs, m) if vs else WeightMultiset(m, ())
    assert is_q_stable(P, q) == brute_q_stable(P, q)


def test_decompose_example():
    P = sign_normalize([(1, 0, 0), (2, 0, 0), (0, 1, 1), (0, 1, -1), (0, 0, 3)])
    D = decompose(P)
    assert [c.vectors() for c in D.components] == [[(0, 0, 3), (0, 1, -1), (0, 1, 1)], [(1, 0, 0), (2, 0, 0)]]
    assert decomposition_signature(D) == decomposition_signature(brute_decompose(P))


def test_decompose_trivial_cases():
    assert len(decompose(sign_normalize([(2, 3)])).components) == 1
    basis = [tuple(int(i == j) for j in range(4)) for i in range(4)]
    assert len(decompose(sign_normalize(basis)).components) == 4
    D = decompose(sign_normalize([(0, 0), (1, 0)]))
    assert D.zero_multiplicity == 1 and len(D.components) == 1


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 3).flatmap(lambda m: st.tuples(st.just(m), vectors(m, -2, 2, 7))))
def test_decompose_matches_brute_and_spans_are_independent(mv):
    m, vs = mv
    P = sign_normalize(vs, m) if vs else WeightMultiset(m, ())
    D = decompose(P)
    assert decomposition_signature(D) == decomposition_signature(brute_decompose(P))
    total = sum(span_rank(c) for c in D.components)
    assert total == span_rank(P)
    assert sum(c.norm() for c in D.components) == P.norm()


def test_restrict_examples():
    P = sign_normalize([(1, 0), (0, 1)])
    assert restrict(P, [(1, 1)]).entries == (((1,), 2),)
    assert restrict(P, [(1, 0), (0, 1)]) == P
    assert restrict(sign_normalize([(1, -1)]), [(1, 1)]).entries == (((0,), 1),)
    with pytest.raises(ValueError):
        restrict(P, [(1, 1), (2, 2)])


@settings(max_examples=100, deadline=None)
@given(vectors(2, max_size=5), st.integers(-3, 3), st.integers(-3, 3))
def test_restriction_keeps_stability(vs, a, b):
    # restriction to a subspace is the image under a linear map
    if not vs or (a, b) == (0, 0):
        return
    P = sign_normalize(vs, 2)
    R = restrict(P, [(a, b)])
    for q in (1, 2):
        if is_q_stable(P, q):
            assert is_q_stable(R, q)
    assert R == image(P, [[a, b]])


def test_select_xi_examples():
    P = sign_normalize([(1, 0), (0, 1), (1, 1)])
    assert len(select_xi(P, (0, 0))) == 0
    assert select_xi(P, (1, 0)).entries == (((1, 0), 1), ((1, 1), 1))
    assert select_xi(P, (Fraction(1, 2), Fraction(-1, 2))).entries == (((0, 1), 1), ((1, 0), 1))


def test_ranks_agree_with_exactlin():
    rng = random.Random(2)
    for _ in range(100):
        vs = [tuple(rng.randint(-2, 2) for _ in range(3)) for _ in range(rng.randint(1, 6))]
        assert span_rank(sign_normalize(vs)) == rank(vs)
