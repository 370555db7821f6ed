"""Stabilizers of points of V and the sampled generation checks built on them."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Iterator, Sequence

from . import torsolve
from .cyclotomic import CycloScalar
from .groupmodel import (DEFAULT_CLOSURE_BOUND, ComponentElement, GroupSpec, TorusCosetElement, coset_canonical_form,
                         component_closure, component_subgroup_order, cycle_holonomy, cycles, element_group, omega)
from .exactlin import IntMatrix
from .torsolve import CongruenceSystem, SolutionSet, TorusSubgroup, mod1

DEFAULT_SAMPLE_COUNT = 25
DEFAULT_SEED = 0


@dataclass(frozen=True)
class PointSpec:
    """Per-line ``None`` (zero) or ``(magnitude, phase in turns)``; real zero-block coordinates."""

    lines: tuple
    zero: tuple[CycloScalar, ...] | None = None

    def __post_init__(self):
        norm = []
        for z in self.lines:
            if z is None:
                norm.append(None)
                continue
            r, p = z
            r = Fraction(r)
            if r <= 0:
                raise ValueError("magnitudes must be positive")
            norm.append((r, mod1(p)))
        object.__setattr__(self, "lines", tuple(norm))
        if self.zero is not None:
            object.__setattr__(self, "zero", tuple(self.zero))

    @classmethod
    def from_exponents(cls, N: int, exps: Sequence[int | None], zero=None) -> "PointSpec":
        return cls(tuple(None if e is None else (1, Fraction(e, N)) for e in exps), zero)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(j for j, z in enumerate(self.lines) if z is not None)

    def zero_is_trivial(self) -> bool:
        return self.zero is None or not any(self.zero)


@dataclass(frozen=True)
class StabilizerResult:
    is_finite: bool
    elements: tuple[TorusCosetElement, ...] = ()
    identity_component: TorusSubgroup | None = None
    cosets: tuple[tuple[ComponentElement, SolutionSet], ...] = ()

    @property
    def order(self) -> int | None:
        return len(self.elements) if self.is_finite else None


def _zero_fixed(c: ComponentElement, w) -> bool:
    if w is None or not any(w):
        return True
    Z = c.zero_block
    zero = CycloScalar.zero(Z.order)
    for i in range(Z.rows):
        acc = zero
        for k in range(Z.cols):
            acc = acc + Z[i, k] * w[k]
        if acc != w[i]:
            return False
    return True


def coset_system(spec: GroupSpec, c: ComponentElement, v: PointSpec) -> CongruenceSystem | None:
    """Congruences on theta for ``t(theta) c`` to fix v, or None if no offset can work."""
    pts = v.lines
    S = v.support
    rows, targets = [], []
    for j in S:
        k = c.line_perm[j]
        if pts[k] is None or pts[k][0] != pts[j][0]:
            return None
        p_j, p_k = pts[j][1], pts[k][1]
        rows.append(spec.lines[k])
        s = -1 if c.line_conj[j] else 1
        targets.append(p_k - Fraction(c.line_scalar[j], c.order) - s * p_j)
    if not _zero_fixed(c, v.zero):
        return None
    return CongruenceSystem.of(rows, targets, spec.torus_rank)


def stabilizer_at(spec: GroupSpec, v: PointSpec, bound: int = DEFAULT_CLOSURE_BOUND) -> StabilizerResult:
    if len(v.lines) != spec.n_lines:
        raise ValueError("point has the wrong number of line coordinates")
    m = spec.torus_rank
    kernel = torsolve.character_kernel(
        IntMatrix.from_rows([spec.lines[j] for j in v.support], cols=m)) if m else TorusSubgroup(0)
    contribs = []
    for c in component_closure(spec, bound):
        sys = coset_system(spec, c, v)
        if sys is None:
            continue
        sol = torsolve.solve(sys)
        if not sol.empty:
            contribs.append((c, sol))
    if not kernel.is_finite:
        return StabilizerResult(False, (), kernel, tuple(contribs))
    elems = tuple(TorusCosetElement(c, th) for c, sol in contribs for th in sol.elements())
    return StabilizerResult(True, elems, kernel, tuple(contribs))


# ------------------------------------------------------------- sampling

@dataclass(frozen=True)
class SamplingPlan:
    count: int = DEFAULT_SAMPLE_COUNT
    seed: int = DEFAULT_SEED
    targeted: bool = True


def finite_patterns(spec: GroupSpec) -> list[tuple[int, ...]]:
    """Supports whose weights have a finite common kernel in the torus."""
    n, m = spec.n_lines, spec.torus_rank
    out = []
    for size in range(n + 1):
        for S in combinations(range(n), size):
            if m == 0:
                out.append(S)
                continue
            if not S:
                continue
            if torsolve.character_kernel(IntMatrix.from_rows([spec.lines[j] for j in S], cols=m)).is_finite:
                out.append(S)
    return out


def phase_grid(N: int) -> int:
    """Denominator used for sampled phases; finer than Z/N so that N = 1 still varies."""
    return lcm(N, 60)


def _random_phase(rng: random.Random, N: int) -> Fraction:
    return Fraction(rng.randrange(N), N)


def _targeted_point(spec: GroupSpec, c: ComponentElement, S: tuple[int, ...], rng: random.Random,
                    denom: int) -> PointSpec | None:
    """A point with support S fixed by some element of the coset of c, if one exists."""
    Sset = set(S)
    if any((c.line_perm[j] in Sset) != (j in Sset) for j in range(spec.n_lines)):
        return None
    cyc = [x for x in cycles(c.line_perm) if x[0] in Sset]
    m = spec.torus_rank
    lin = []
    for x in cyc:
        anti, h, kappa = cycle_holonomy(spec, c, x)
        if not anti:
            lin.append((h, -kappa))
    sol = torsolve.solve(CongruenceSystem.of([h for h, _ in lin], [a for _, a in lin], m))
    if sol.empty:
        return None
    theta = list(sol.particular)
    for d in sol.kernel.continuous_part:
        t = Fraction(rng.randrange(denom), denom)
        theta = [a + t * b for a, b in zip(theta, d)]
    for g, k in sol.kernel.finite_part:
        r = rng.randrange(k)
        theta = [a + r * b for a, b in zip(theta, g)]
    lines: list = [None] * spec.n_lines
    N = c.order
    for x in cyc:
        anti, h, kappa = cycle_holonomy(spec, c, x)
        if anti:
            # after one loop p -> -p + H, so the start phase must solve 2p = H
            H = mod1(sum(a * t for a, t in zip(h, theta)) + kappa)
            start = H / 2 + (Fraction(1, 2) if rng.random() < 0.5 else 0)
        else:
            start = _random_phase(rng, denom)
        r = Fraction(rng.randrange(1, 4))
        p = start
        for j in x:
            lines[j] = (r, p)
            k = c.line_perm[j]
            phase = sum(a * t for a, t in zip(spec.lines[k], theta)) + Fraction(c.line_scalar[j], N)
            p = mod1(phase + (-p if c.line_conj[j] else p))
    return PointSpec(tuple(lines), None)


def sample_points(spec: GroupSpec, plan: SamplingPlan, bound: int = DEFAULT_CLOSURE_BOUND
                  ) -> Iterator[tuple[tuple[int, ...], PointSpec]]:
    """Deterministic sample of points over every finite-kernel support."""
    rng = random.Random(plan.seed)
    N = phase_grid(spec.cyclotomic_order)
    closure = component_closure(spec, bound) if plan.targeted else []
    for S in finite_patterns(spec):
        if not S and not spec.n_lines and not spec.zero_block_dim:
            continue
        zero_pt = [None] * spec.n_lines
        for j in S:
            zero_pt[j] = (1, Fraction(0))
        yield S, PointSpec(tuple(zero_pt))
        for _ in range(plan.count):
            pt = list(zero_pt)
            for j in S:
                pt[j] = (1, _random_phase(rng, N))
            yield S, PointSpec(tuple(pt))
        for c in closure[1:]:
            q = _targeted_point(spec, c, S, rng, N)
            if q is not None:
                yield S, q


# ------------------------------------------------------------- condition (iv)

@dataclass(frozen=True)
class Counterexample:
    point: PointSpec
    stabilizer_order: int
    omega_generated_order: int
    elements: tuple[TorusCosetElement, ...]


@dataclass(frozen=True)
class ConditionIVResult:
    verified_on_samples: bool
    points_checked: int
    patterns_checked: int
    counterexample: Counterexample | None = None


def _omega_indices(spec: GroupSpec, grp) -> list[int]:
    return [i for i, g in enumerate(grp.elements) if omega(spec, g).in_Omega]


def _finite_stabilizer(spec: GroupSpec, v: PointSpec, bound: int) -> StabilizerResult:
    res = stabilizer_at(spec, v, bound)
    if not res.is_finite:
        raise RuntimeError(f"infinite stabilizer on a finite-kernel pattern {v.support}")
    return res


def check_condition_iv(spec: GroupSpec, plan: SamplingPlan = SamplingPlan(),
                       bound: int = DEFAULT_CLOSURE_BOUND) -> ConditionIVResult:
    """Whether each sampled finite stabilizer is generated by its members in Omega."""
    npts = 0
    patterns = set()
    seen = set()
    for S, v in sample_points(spec, plan, bound):
        patterns.add(S)
        if v in seen:
            continue
        seen.add(v)
        npts += 1
        res = _finite_stabilizer(spec, v, bound)
        grp = element_group(spec, res.elements)
        sub = grp.closure(_omega_indices(spec, grp))
        if len(sub) != len(grp):
            return ConditionIVResult(False, npts, len(patterns),
                                     Counterexample(v, len(grp), len(sub), tuple(grp.elements)))
    return ConditionIVResult(True, npts, len(patterns))


@dataclass(frozen=True)
class GenerationDiagnostic:
    components_generated: bool
    component_order: int
    generated_order: int
    points_checked: int
    identity_failures: tuple[PointSpec, ...] = ()

    @property
    def identity_holds(self) -> bool:
        return not self.identity_failures


def generation_diagnostic(spec: GroupSpec, plan: SamplingPlan = SamplingPlan(),
                          bound: int = DEFAULT_CLOSURE_BOUND, first_failure: bool = False) -> GenerationDiagnostic:
    """(a) stabilizer images generate the component group; (b) <G_v cap Omega>[G_v, G_v] = G_v.

    With ``first_failure`` the scan stops at the first point violating (b).
    """
    closure = component_closure(spec, bound)
    images: dict = {}
    failures = []
    npts = 0
    seen = set()
    for _, v in sample_points(spec, plan, bound):
        if v in seen:
            continue
        seen.add(v)
        npts += 1
        res = _finite_stabilizer(spec, v, bound)
        for g in res.elements:
            images.setdefault(coset_canonical_form(spec, g.component), g.component)
        grp = element_group(spec, res.elements)
        om = grp.closure(_omega_indices(spec, grp))
        comm = grp.commutator_subgroup()
        if len(grp.product_set(om, comm)) != len(grp):
            failures.append(v)
            if first_failure:
                break
    generated = component_subgroup_order(spec, list(images.values()))
    return GenerationDiagnostic(generated == len(closure), len(closure), generated, npts, tuple(failures))
