import random
from fractions import Fraction

import numpy as np
import pytest

from orbitspace.exactlin import smith_normal_form
from orbitspace.groupmodel import GroupSpec, compose, element_key, inverse
from orbitspace.oracle import numeric_matrix
from orbitspace.stabilizer import (PointSpec, SamplingPlan, check_condition_iv, finite_patterns, generation_diagnostic,
                                   sample_points, stabilizer_at)

from conftest import with_gens


def point_vector(spec, v):
    z = []
    for p in v.lines:
        if p is None:
            z += [0.0, 0.0]
        else:
            c = float(p[0]) * np.exp(2j * np.pi * float(p[1]))
            z += [c.real, c.imag]
    z += [x.to_complex().real for x in v.zero] if v.zero else [0.0] * spec.zero_block_dim
    return np.array(z)


def assert_fixes(spec, res, v):
    x = point_vector(spec, v)
    for g in res.elements:
        assert np.allclose(numeric_matrix(spec, g) @ x, x, atol=1e-9)


def assert_group(spec, res):
    keys = {element_key(spec, g) for g in res.elements}
    assert len(keys) == len(res.elements)
    for g in res.elements:
        assert element_key(spec, inverse(g)) in keys
        for h in res.elements[:8]:
            assert element_key(spec, compose(g, h)) in keys


def test_generic_point_matches_snf_product():
    rng = random.Random(0)
    specs = [GroupSpec(2, 1, ((1, 0), (0, 1), (1, 1), (1, -1))), GroupSpec(1, 1, ((2,), (4,), (6,))),
             GroupSpec(2, 1, ((2, 0), (0, 3), (2, 6)))]
    for spec in specs:
        snf = smith_normal_form([list(w) for w in spec.lines])
        expected = 1
        for d in snf.diagonal:
            expected *= d
        for _ in range(10):
            v = PointSpec(tuple((rng.randint(1, 3), Fraction(rng.randrange(60), 60)) for _ in spec.lines))
            res = stabilizer_at(spec, v)
            assert res.is_finite and res.order == expected
            assert_fixes(spec, res, v)


def test_unimodular_support_has_trivial_torus_part():
    spec = GroupSpec(2, 1, ((1, 0), (0, 1), (1, 1), (1, -1)))
    res = stabilizer_at(spec, PointSpec(((1, 0), (1, 0), None, None)))
    assert res.order == 1


def test_moved_lines_exclude_cosets(torus4):
    # every nontrivial coset conjugates line 0, so a phase of 1/8 cannot be fixed by it with theta killing it
    v = PointSpec(((1, Fraction(1, 8)), None, (1, 0), (1, 0)))
    res = stabilizer_at(torus4, v)
    assert res.is_finite
    assert_fixes(torus4, res, v)
    assert_group(torus4, res)


def test_infinite_stabilizer():
    spec = GroupSpec(2, 1, ((1, 0), (0, 1)))
    res = stabilizer_at(spec, PointSpec(((1, 0), None)))
    assert not res.is_finite and res.identity_component.dimension == 1
    with pytest.raises(ValueError):
        stabilizer_at(spec, PointSpec(((1, 0),)))


def test_sampled_stabilizers_fix_points_and_are_groups(curated, torus4):
    for spec in (torus4, curated("b_binary_icosahedral")):
        plan = SamplingPlan(count=3, seed=2)
        for _, v in list(sample_points(spec, plan))[:15]:
            res = stabilizer_at(spec, v)
            if res.is_finite:
                assert_fixes(spec, res, v)
                assert_group(spec, res)


def test_monotone_under_zeroing():
    # zeroing coordinates keeps every stabilizer element whose permutation preserves the zeroed set
    rng = random.Random(3)
    spec = with_gens(GroupSpec(2, 4, ((1, 0), (0, 1), (1, 1), (1, -1))),
                     dict(ad=[[-1, 0], [0, -1]], line_conj=[1, 1, 1, 1]))
    for _ in range(40):
        full = tuple((1, Fraction(rng.randrange(8), 8)) for _ in spec.lines)
        drop = set(rng.sample(range(4), rng.randint(1, 2)))
        part = tuple(None if j in drop else z for j, z in enumerate(full))
        big = stabilizer_at(spec, PointSpec(full))
        small = stabilizer_at(spec, PointSpec(part))
        if not small.is_finite:
            continue
        keys = {element_key(spec, g) for g in small.elements}
        for g in big.elements:
            if {g.component.line_perm[j] for j in drop} == drop:
                assert element_key(spec, g) in keys
        if all(g.component.line_perm == tuple(range(4)) for g in big.elements):
            assert len(small.elements) >= len(big.elements)


def test_finite_patterns(torus4):
    pats = finite_patterns(torus4)
    assert (0, 1) in pats and (0,) not in pats and (0, 1, 2, 3) in pats


def test_condition_iv_on_curated(curated):
    d = curated("d_torus2_with_conjugation")
    res = check_condition_iv(d)
    assert res.verified_on_samples and res.points_checked > 0
    diag = generation_diagnostic(d)
    assert diag.components_generated and diag.identity_holds


def test_trivial_component_group_passes_vacuously():
    spec = GroupSpec(1, 1, ((1,), (2,)))
    diag = generation_diagnostic(spec, SamplingPlan(count=2))
    assert diag.components_generated and diag.component_order == 1


def test_condition_iv_counterexample():
    # c = [-E] on R^3 inside a torus-free group: the stabilizer of 0 is {E, -E} and -E is not in Omega
    spec = with_gens(GroupSpec(0, 1, (), 3), dict(ad=[], zero_block=[[-1, 0, 0], [0, -1, 0], [0, 0, -1]]))
    res = check_condition_iv(spec, SamplingPlan(count=1))
    assert not res.verified_on_samples
    assert res.counterexample.stabilizer_order == 2 and res.counterexample.omega_generated_order == 1
    diag = generation_diagnostic(spec, SamplingPlan(count=1), first_failure=True)
    assert not diag.identity_holds
