from orbitspace import weights as W
from orbitspace.oracle import (InstanceGenerator, brute_decompose, brute_q_stable, decomposition_signature,
                               omega_invariant_failures, q_stable_property_failures, run_invariant_suite,
                               signed_permutation_matrices)
from orbitspace.weights import WeightMultiset, sign_normalize

SMALL = {"q_stable_agreement": 20, "decompose_agreement": 10, "q_stable_properties": 10, "rank_numeric": 10,
         "omega_invariants": 3, "torsolve": 20, "manifold_consistency": 1}


def test_brute_examples():
    assert brute_q_stable(WeightMultiset(2, ()), 1)
    assert not brute_q_stable(sign_normalize([(1, 0)]), 1)
    assert brute_q_stable(sign_normalize([(1, 0), (0, 1), (1, 1), (1, -1)]), 2)
    D = brute_decompose(sign_normalize([(1, 0), (0, 1)]))
    assert len(D.components) == 2
    assert decomposition_signature(D) == decomposition_signature(W.decompose(sign_normalize([(1, 0), (0, 1)])))


def test_signed_permutations():
    assert len(signed_permutation_matrices(2)) == 8
    assert len(signed_permutation_matrices(3)) == 48


def test_generated_instances_hold_invariants():
    gen = InstanceGenerator(4)
    for q in (1, 2):
        for _ in range(20):
            P = gen.q_stable_multiset(q)
            assert W.is_q_stable(P, q)
            assert q_stable_property_failures(P, q, gen, W.is_q_stable) == []
    checked = 0
    while checked < 5:
        inst = gen.spec(two_stable=True)
        if not inst.valid:
            continue
        for g in gen.elements(inst.spec, per_coset=2):
            assert omega_invariant_failures(inst.spec, g, True) == []
        checked += 1


def test_suite_passes_and_is_deterministic():
    r1 = run_invariant_suite(5, SMALL)
    r2 = run_invariant_suite(5, SMALL)
    assert r1.passed
    assert r1.lines() == r2.lines()


def test_zero_count_is_empty():
    rep = run_invariant_suite(1, 0)
    assert rep.cases == [] or all(c.checked == 0 for c in rep.cases)
    assert rep.passed


def test_inverted_predicate_fails_suite():
    def inverted(P, q):
        return not W.is_q_stable(P, q)

    rep = run_invariant_suite(0, SMALL, overrides={"is_q_stable": inverted})
    assert not rep.passed


def test_numeric_rank_examples():
    from orbitspace.groupmodel import ComponentElement, GroupSpec
    from orbitspace.oracle import numeric_rank_check
    base = GroupSpec(1, 2, ((1,), (1,), (2,)))
    spec = base.with_generators([ComponentElement.make(base, [[-1]], line_conj=[1, 1, 1])])
    assert numeric_rank_check(spec, spec.identity)
    assert numeric_rank_check(spec, spec.element((0,), spec.generators[0]))


def test_brute_decompose_small_cases():
    assert len(brute_decompose(sign_normalize([(1, 2)])).components) == 1
    assert len(brute_decompose(sign_normalize([(1, 2), (2, 4)])).components) == 1
