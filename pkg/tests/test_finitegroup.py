import pytest

from orbitspace.finitegroup import ClosureBoundExceeded, FiniteGroup


def perm_mul(a, b):
    return tuple(a[i] for i in b)


def sym(n):
    e = tuple(range(n))
    t = (1, 0) + e[2:]
    c = e[1:] + (0,)
    return FiniteGroup([t, c], perm_mul, lambda x: x, e)


def test_symmetric_group():
    S4 = sym(4)
    assert len(S4) == 24
    A4 = S4.commutator_subgroup()
    assert len(A4) == 12
    assert len(S4.commutator_subgroup(A4)) == 4
    assert S4.elements[0] == (0, 1, 2, 3)


def test_index_arithmetic():
    S3 = sym(3)
    for i in range(len(S3)):
        assert S3.mul_idx(i, S3.inv_idx(i)) == 0
        assert S3.idx(S3.elements[i]) == i
    assert sorted(S3.order_of(i) for i in range(6)) == [1, 2, 2, 2, 3, 3]


def test_closure_and_products():
    S4 = sym(4)
    t = S4.idx((1, 0, 2, 3))
    assert S4.closure([t]) == frozenset({0, t})
    V = S4.commutator_subgroup(S4.commutator_subgroup())
    assert len(S4.product_set(V, S4.closure([t]))) == 8
    assert S4.commute(0, t)


def test_bound():
    with pytest.raises(ClosureBoundExceeded):
        FiniteGroup([(1, 2, 3, 4, 0)], perm_mul, lambda x: x, tuple(range(5)), bound=3)


def test_from_elements():
    G = FiniteGroup.from_elements([(1, 2, 0)], perm_mul, lambda x: x, (0, 1, 2))
    assert len(G) == 3
