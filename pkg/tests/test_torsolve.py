import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from orbitspace.exactlin import smith_normal_form
from orbitspace.torsolve import (CongruenceSystem, TorusSubgroup, character_kernel, component_representatives,
                                 enumerate_finite, in_subgroup, mod1, satisfies, solve)
from orbitspace.oracle import InstanceGenerator, torsolve_case

F = Fraction


def test_solve_examples():
    sol = solve(CongruenceSystem.of([[2]], [F(1, 2)]))
    assert sorted(sol.elements()) == [(F(1, 4),), (F(3, 4),)]
    assert solve(CongruenceSystem.of([[1], [1]], [0, F(1, 2)])).empty
    assert solve(CongruenceSystem.of([[1], [1]], [F(1, 3), F(4, 3)])).elements() == [(F(1, 3),)]


def test_character_kernel_examples():
    assert character_kernel([[1, 0], [0, 1]]).order() == 1
    k = character_kernel([[2]])
    assert k.is_finite and sorted(enumerate_finite(k)) == [(F(0),), (F(1, 2),)]
    k = character_kernel([[1, 1]])
    assert k.dimension == 1
    (d,) = k.continuous_part
    assert d[0] == -d[1] and d[0] != 0
    with pytest.raises(ValueError):
        enumerate_finite(k)


def test_enumerate_finite_examples():
    assert enumerate_finite(TorusSubgroup(2)) == [(F(0), F(0))]
    assert len(enumerate_finite(character_kernel([[2, 0], [0, 3]]))) == 6


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 3).flatmap(lambda m: st.lists(st.lists(st.integers(-4, 4), min_size=m, max_size=m),
                                                    min_size=1, max_size=4)))
def test_finite_kernel_is_a_group_of_snf_order(K):
    ker = character_kernel(K)
    snf = smith_normal_form(K)
    if not ker.is_finite:
        assert snf.rank < len(K[0])
        return
    elems = set(enumerate_finite(ker))
    prod_d = 1
    for d in snf.diagonal:
        prod_d *= d
    assert len(elems) == prod_d == ker.order()
    for a in list(elems)[:10]:
        assert all(mod1(sum(k * t for k, t in zip(row, a))) == 0 for row in K)
        for b in list(elems)[:10]:
            assert tuple(mod1(x + y) for x, y in zip(a, b)) in elems


def test_solutions_verify_by_substitution():
    rng = random.Random(1)
    for _ in range(200):
        m = rng.randint(1, 3)
        K = [[rng.randint(-3, 3) for _ in range(m)] for _ in range(rng.randint(1, 3))]
        a = [F(rng.randint(0, 5), 6) for _ in K]
        sysm = CongruenceSystem.of(K, a, m)
        sol = solve(sysm)
        if sol.empty:
            continue
        for th in component_representatives(sol):
            assert satisfies(sysm, th)
        if sol.kernel.is_finite:
            for th in sol.elements():
                assert satisfies(sysm, th)
        for d in sol.kernel.continuous_part:
            shifted = tuple(x + F(1, 7) * y for x, y in zip(sol.particular, d))
            assert satisfies(sysm, shifted)


def test_grid_completeness_small():
    # m = 1: every grid point with denominator 12 solving 3 theta = 1/4 is reported
    sysm = CongruenceSystem.of([[3]], [F(1, 4)])
    grid = [(F(i, 12),) for i in range(12) if satisfies(sysm, (F(i, 12),))]
    assert sorted(solve(sysm).elements()) == grid
    sysm = CongruenceSystem.of([[1, 2], [2, 0]], [F(1, 2), 0])
    grid = sorted(t for t in product([F(i, 4) for i in range(4)], repeat=2) if satisfies(sysm, t))
    assert sorted(solve(sysm).elements()) == grid


def test_oracle_cases_pass():
    gen = InstanceGenerator(21)
    ran = 0
    for _ in range(150):
        fails, grid_ran = torsolve_case(gen)
        assert fails == []
        ran += grid_ran
    assert ran > 50


def test_in_subgroup():
    k = character_kernel([[1, 1]])
    assert in_subgroup(k, (F(1, 3), F(2, 3)))
    assert not in_subgroup(k, (F(1, 3), F(1, 3)))
