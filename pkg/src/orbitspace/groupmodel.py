"""The group G: a torus T^m extended by monomial component generators.

``V`` is a sum of complex lines ``L_j`` (weight ``lambda_j != 0``) and a real
block ``V0`` on which the torus acts trivially.  The torus element ``t(theta)``
multiplies line ``j`` by ``e(lambda_j . theta)`` where ``e(x) = exp(2 pi i x)``.

A component element sends line ``j`` to line ``perm[j]``, multiplying by
``zeta_N ** scalar[j]`` after conjugating if ``conj[j]``.  ``ad`` is its action
on the weight lattice, so ``lambda_{perm[j]} = +-ad @ lambda_j`` with the minus
sign exactly on antilinear lines.  On torus angles it acts by ``ad^{-T}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations
from math import lcm
from typing import Sequence

from . import exactlin, torsolve
from .cyclotomic import CycloMatrix, CycloScalar, SemilinearOp, complex_rank, semilinear_real_rank
from .exactlin import IntMatrix
from .finitegroup import ClosureBoundExceeded, FiniteGroup
from .torsolve import CongruenceSystem, mod1, mod1_vec
from .weights import WeightMultiset, sign_normalize

DEFAULT_CLOSURE_BOUND = 10000

__all__ = [
    "ClosureBoundExceeded", "ComponentElement", "GroupSpec", "TorusCosetElement", "OmegaClass",
    "ValidationFailure", "ValidationReport", "SpecValidationError", "AdImage", "validate_spec", "compose",
    "inverse", "power", "coset_canonical_form", "component_closure", "rank_E_minus_g", "omega",
    "min_omega_in_coset", "find_complex_reflections", "ad_image", "element_key", "line_phases",
]


@dataclass(frozen=True)
class ComponentElement:
    ad: IntMatrix
    line_perm: tuple[int, ...]
    line_scalar: tuple[int, ...]
    line_conj: tuple[bool, ...]
    zero_block: CycloMatrix
    order: int

    @classmethod
    def identity(cls, m: int, n_lines: int, zero_dim: int, order: int) -> "ComponentElement":
        return cls(IntMatrix.identity(m), tuple(range(n_lines)), (0,) * n_lines, (False,) * n_lines,
                   CycloMatrix.identity(order, zero_dim), order)

    @classmethod
    def make(cls, spec: "GroupSpec", ad, line_perm=None, line_scalar=None, line_conj=None,
             zero_block=None) -> "ComponentElement":
        n, d, N = spec.n_lines, spec.zero_block_dim, spec.cyclotomic_order
        ad = ad if isinstance(ad, IntMatrix) else IntMatrix.from_rows(ad, cols=spec.torus_rank)
        perm = tuple(range(n)) if line_perm is None else tuple(int(x) for x in line_perm)
        scal = (0,) * n if line_scalar is None else tuple(int(x) % N for x in line_scalar)
        conj = (False,) * n if line_conj is None else tuple(bool(x) for x in line_conj)
        if zero_block is None:
            Z = CycloMatrix.identity(N, d)
        elif isinstance(zero_block, CycloMatrix):
            Z = zero_block
        else:
            Z = CycloMatrix.from_rows(N, zero_block, cols=d)
        return cls(ad, perm, scal, conj, Z, N)

    @property
    def is_linear(self) -> bool:
        return not any(self.line_conj)


@dataclass(frozen=True)
class TorusCosetElement:
    """The group element ``t(theta) @ component``."""

    component: ComponentElement
    torus_offset: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "torus_offset", mod1_vec(self.torus_offset))


@dataclass(frozen=True)
class GroupSpec:
    torus_rank: int
    cyclotomic_order: int
    lines: tuple[tuple[int, ...], ...]
    zero_block_dim: int = 0
    generators: tuple[ComponentElement, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "lines", tuple(tuple(int(x) for x in w) for w in self.lines))
        object.__setattr__(self, "generators", tuple(self.generators))

    @property
    def n_lines(self) -> int:
        return len(self.lines)

    @cached_property
    def weight_matrix(self) -> IntMatrix:
        return IntMatrix.from_rows(self.lines, cols=self.torus_rank)

    @cached_property
    def weights(self) -> WeightMultiset:
        """P: line weights plus the zero weight with multiplicity dim V0."""
        items = [(w, 1) for w in self.lines]
        if self.zero_block_dim:
            items.append(((0,) * self.torus_rank, self.zero_block_dim))
        if not items:
            return WeightMultiset(self.torus_rank, ())
        return sign_normalize(items, self.torus_rank)

    @cached_property
    def identity_component(self) -> ComponentElement:
        return ComponentElement.identity(self.torus_rank, self.n_lines, self.zero_block_dim, self.cyclotomic_order)

    @cached_property
    def identity(self) -> TorusCosetElement:
        return TorusCosetElement(self.identity_component, (Fraction(0),) * self.torus_rank)

    @property
    def real_dim(self) -> int:
        return 2 * self.n_lines + self.zero_block_dim

    def with_generators(self, gens: Sequence[ComponentElement]) -> "GroupSpec":
        return GroupSpec(self.torus_rank, self.cyclotomic_order, self.lines, self.zero_block_dim, tuple(gens))

    def element(self, theta: Sequence = None, component: ComponentElement | None = None) -> TorusCosetElement:
        theta = (0,) * self.torus_rank if theta is None else theta
        return TorusCosetElement(component or self.identity_component, tuple(Fraction(x) for x in theta))


# ----------------------------------------------------------------- validation

@dataclass(frozen=True)
class ValidationFailure:
    path: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    failures: tuple[ValidationFailure, ...]

    @property
    def ok(self) -> bool:
        return not self.failures


class SpecValidationError(ValueError):
    def __init__(self, report: ValidationReport):
        self.report = report
        super().__init__("; ".join(f"{f.path}: {f.message}" for f in report.failures))


def validate_spec(spec: GroupSpec) -> ValidationReport:
    fails: list[ValidationFailure] = []

    def fail(path, msg):
        fails.append(ValidationFailure(path, msg))

    m, N, n, d = spec.torus_rank, spec.cyclotomic_order, spec.n_lines, spec.zero_block_dim
    if N < 1:
        fail("/cyclotomic_order", "must be at least 1")
    if m < 0:
        fail("/torus_rank", "must be nonnegative")
    if d < 0:
        fail("/zero_block_dim", "must be nonnegative")
    for j, w in enumerate(spec.lines):
        if len(w) != m:
            fail(f"/lines/{j}", f"weight has {len(w)} coordinates, expected {m}")
        elif not any(w):
            fail(f"/lines/{j}", "zero weight on a complex line; put it into the zero block")
    if fails:
        return ValidationReport(tuple(fails))

    if m > 0:
        ker = torsolve.character_kernel(spec.weight_matrix) if n else None
        if ker is None or not ker.is_finite:
            dim = m if ker is None else ker.dimension
            fail("/lines", f"torus action not faithful: kernel has dimension {dim}")
        elif ker.order() != 1:
            fail("/lines", f"torus action not faithful: kernel of order {ker.order()}")

    P = spec.weights
    for g_i, g in enumerate(spec.generators):
        path = f"/generators/{g_i}"
        if g.order != N:
            fail(path, f"built over order {g.order}, expected {N}")
        A = g.ad
        if A.rows != m or A.cols != m:
            fail(f"{path}/ad", f"shape {A.rows}x{A.cols}, expected {m}x{m}")
            continue
        if m and abs(exactlin.determinant(A)) != 1:
            fail(f"{path}/ad", "not invertible over the integers")
            continue
        if sorted(g.line_perm) != list(range(n)):
            fail(f"{path}/line_perm", "not a permutation of the lines")
            continue
        if len(g.line_scalar) != n or any(not 0 <= a < N for a in g.line_scalar):
            fail(f"{path}/scalars", f"need {n} exponents in [0, {N})")
        if len(g.line_conj) != n:
            fail(f"{path}/conj", f"need {n} flags")
            continue
        for j in range(n):
            img = tuple(A @ list(spec.lines[j]))
            target = spec.lines[g.line_perm[j]]
            sign = -1 if g.line_conj[j] else 1
            if tuple(sign * x for x in img) != target:
                fail(f"{path}/line_perm/{j}",
                     f"weight of line {g.line_perm[j]} is {list(target)}, expected "
                     f"{[sign * x for x in img]} = {'-' if sign < 0 else ''}ad*weight({j})")
        if P.entries and sign_normalize([(tuple(A @ list(w)), k) for w, k in P.entries], m) != P:
            fail(f"{path}/ad", "does not preserve the weight multiset up to sign")
        Z = g.zero_block
        if Z.rows != d or Z.cols != d:
            fail(f"{path}/zero_block", f"shape {Z.rows}x{Z.cols}, expected {d}x{d}")
        else:
            if Z.conj() != Z:
                fail(f"{path}/zero_block", "entries are not real")
            if Z @ Z.T != CycloMatrix.identity(Z.order, d):
                fail(f"{path}/zero_block", "not orthogonal")
    return ValidationReport(tuple(fails))


# --------------------------------------------------------------- arithmetic

@lru_cache(maxsize=4096)
def _dual(ad: IntMatrix) -> IntMatrix:
    """ad^{-T}: the action on torus angles."""
    return exactlin.int_inverse(ad).T if ad.rows else ad


def compose_components(c1: ComponentElement, c2: ComponentElement) -> ComponentElement:
    p1, p2 = c1.line_perm, c2.line_perm
    N = c1.order
    perm, scal, conj = [], [], []
    for j in range(len(p2)):
        k = p2[j]
        perm.append(p1[k])
        scal.append((c1.line_scalar[k] + (-1 if c1.line_conj[k] else 1) * c2.line_scalar[j]) % N)
        conj.append(c1.line_conj[k] != c2.line_conj[j])
    return ComponentElement(c1.ad @ c2.ad, tuple(perm), tuple(scal), tuple(conj), c1.zero_block @ c2.zero_block, N)


def inverse_component(c: ComponentElement) -> ComponentElement:
    n = len(c.line_perm)
    perm, scal, conj = [0] * n, [0] * n, [False] * n
    for j, k in enumerate(c.line_perm):
        perm[k] = j
        scal[k] = c.line_scalar[j] % c.order if c.line_conj[j] else -c.line_scalar[j] % c.order
        conj[k] = c.line_conj[j]
    return ComponentElement(exactlin.int_inverse(c.ad), tuple(perm), tuple(scal), tuple(conj), c.zero_block.T,
                            c.order)


def compose(g: TorusCosetElement, h: TorusCosetElement) -> TorusCosetElement:
    B = _dual(g.component.ad)
    moved = B @ list(h.torus_offset) if B.rows else []
    theta = tuple(a + b for a, b in zip(g.torus_offset, moved))
    return TorusCosetElement(compose_components(g.component, h.component), theta)


def inverse(g: TorusCosetElement) -> TorusCosetElement:
    c = g.component
    theta = tuple(-x for x in (c.ad.T @ list(g.torus_offset))) if c.ad.rows else ()
    return TorusCosetElement(inverse_component(c), theta)


def power(g: TorusCosetElement, k: int) -> TorusCosetElement:
    if k < 0:
        return power(inverse(g), -k)
    m = len(g.torus_offset)
    n = len(g.component.line_perm)
    acc = TorusCosetElement(ComponentElement.identity(m, n, g.component.zero_block.rows, g.component.order),
                            (0,) * m)
    base = g
    while k:
        if k & 1:
            acc = compose(acc, base)
        base = compose(base, base)
        k >>= 1
    return acc


def line_phases(spec: GroupSpec, g: TorusCosetElement) -> tuple[Fraction, ...]:
    """Phase (in turns) picked up by line j on its way to line perm[j]."""
    c = g.component
    N = c.order
    out = []
    for j, k in enumerate(c.line_perm):
        w = spec.lines[k]
        out.append(mod1(sum(a * t for a, t in zip(w, g.torus_offset)) + Fraction(c.line_scalar[j], N)))
    return tuple(out)


def element_key(spec: GroupSpec, g: TorusCosetElement):
    """Hashable key determined by the action of g on V."""
    c = g.component
    return c.line_perm, c.line_conj, line_phases(spec, g), c.zero_block.entries


def element_group(spec: GroupSpec, elements: Sequence[TorusCosetElement], bound: int | None = None) -> FiniteGroup:
    """Finite subgroup of G generated by the given elements."""
    return FiniteGroup.from_elements(elements, compose, lambda x: element_key(spec, x), spec.identity, bound)


def act(spec: GroupSpec, g: TorusCosetElement, lines: Sequence, zero: Sequence | None = None):
    """Image of a point given as per-line ``None`` or ``(magnitude, phase)`` pairs."""
    c = g.component
    phases = line_phases(spec, g)
    out: list = [None] * spec.n_lines
    for j, z in enumerate(lines):
        if z is None:
            continue
        r, p = z
        out[c.line_perm[j]] = (r, mod1((-p if c.line_conj[j] else p) + phases[j]))
    zero_out = None
    if zero is not None:
        Z = c.zero_block
        zero_out = tuple(sum((Z[i, k] * zero[k] for k in range(Z.cols)), CycloScalar.zero(Z.order))
                         for i in range(Z.rows))
    return tuple(out), zero_out


# ----------------------------------------------------------------- cosets

def _permuted_weights(spec: GroupSpec, perm: tuple[int, ...]) -> IntMatrix:
    return IntMatrix.from_rows([spec.lines[k] for k in perm], cols=spec.torus_rank)


def coset_canonical_form(spec: GroupSpec, c: ComponentElement):
    """Key of ``c`` modulo the torus: invariant part of the scalars under ``K_pi theta``."""
    N = c.order
    a = [Fraction(s, N) for s in c.line_scalar]
    if spec.n_lines and spec.torus_rank:
        snf = torsolve.smith(_permuted_weights(spec, c.line_perm))
        psi = mod1_vec(exactlin.matvec(snf.U_inv.tolist(), a))
        residues = tuple(mod1(x * d) if d else x for x, d in
                         zip(psi, list(snf.diagonal) + [0] * (len(psi) - len(snf.diagonal))))
    else:
        residues = mod1_vec(a)
    return c.ad.entries, c.line_perm, c.line_conj, residues, c.zero_block.entries


def component_closure(spec: GroupSpec, bound: int = DEFAULT_CLOSURE_BOUND) -> list[ComponentElement]:
    """One representative per coset of the identity component, identity first."""
    if bound < 1:
        raise ValueError("bound must be at least 1")
    return list(_closure(spec, bound))


@lru_cache(maxsize=256)
def _closure(spec: GroupSpec, bound: int) -> tuple[ComponentElement, ...]:
    ident = spec.identity_component
    seen = {coset_canonical_form(spec, ident)}
    out = [ident]
    i = 0
    while i < len(out):
        x = out[i]
        i += 1
        for s in spec.generators:
            y = compose_components(s, x)
            key = coset_canonical_form(spec, y)
            if key not in seen:
                if len(out) >= bound:
                    raise ClosureBoundExceeded(f"component group has more than {bound} elements")
                seen.add(key)
                out.append(y)
    return tuple(out)


@dataclass(frozen=True)
class AdImage:
    matrices: frozenset
    equals_plus_minus_E: bool
    has_minus_E: bool


def ad_image(spec: GroupSpec, bound: int = DEFAULT_CLOSURE_BOUND) -> AdImage:
    mats = frozenset(c.ad for c in component_closure(spec, bound))
    m = spec.torus_rank
    E = IntMatrix.identity(m)
    minus = -E
    return AdImage(mats, mats == frozenset({E, minus}), minus in mats)


# ----------------------------------------------------------------- ranks

def cycles(perm: Sequence[int]) -> list[list[int]]:
    seen = [False] * len(perm)
    out = []
    for s in range(len(perm)):
        if seen[s]:
            continue
        cyc = []
        j = s
        while not seen[j]:
            seen[j] = True
            cyc.append(j)
            j = perm[j]
        out.append(cyc)
    return out


def _gauge(sig: tuple[tuple[Fraction, bool], ...]) -> tuple[tuple[Fraction, bool], ...]:
    # rescale line i by e(s_i): a linear edge p becomes p + s_{i+1} - s_i, an
    # antilinear one p + s_{i+1} + s_i; all phases but the last can be cleared
    s = Fraction(0)
    for p, cj in sig[:-1]:
        s = -s - p if cj else s - p
    p, cj = sig[-1]
    last = mod1(p + s) if cj else mod1(p - s)
    return tuple((Fraction(0), c) for _, c in sig[:-1]) + ((last, cj),)


def _cycle_rank(sig: tuple[tuple[Fraction, bool], ...]) -> int:
    return _cycle_rank_exact(_gauge(sig))


@lru_cache(maxsize=65536)
def _cycle_rank_exact(sig: tuple[tuple[Fraction, bool], ...]) -> int:
    k = len(sig)
    L = lcm(*(p.denominator for p, _ in sig))
    zero, one = CycloScalar.zero(L), CycloScalar.one(L)
    A = [[one if i == j else zero for j in range(k)] for i in range(k)]
    B = [[zero] * k for _ in range(k)]
    for i, (p, cj) in enumerate(sig):
        t = (i + 1) % k
        e = CycloScalar.from_phase(L, p)
        if cj:
            B[t][i] = B[t][i] - e
        else:
            A[t][i] = A[t][i] - e
    return semilinear_real_rank(SemilinearOp(CycloMatrix.from_rows(L, A), CycloMatrix.from_rows(L, B)))


@lru_cache(maxsize=4096)
def _zero_block_rank(Z: CycloMatrix) -> int:
    return complex_rank(CycloMatrix.identity(Z.order, Z.rows) - Z)


@lru_cache(maxsize=4096)
def _ad_rank(A: IntMatrix) -> int:
    return exactlin.rank((IntMatrix.identity(A.rows) - A).tolist()) if A.rows else 0


def rank_E_minus_g(spec: GroupSpec, g: TorusCosetElement) -> int:
    """Real rank of E - g on V."""
    c = g.component
    phases = line_phases(spec, g)
    total = 0
    for cyc in cycles(c.line_perm):
        total += _cycle_rank(tuple((phases[j], c.line_conj[j]) for j in cyc))
    if c.zero_block.rows:
        total += _zero_block_rank(c.zero_block)
    return total


def cycle_holonomy(spec: GroupSpec, c: ComponentElement, cyc: Sequence[int]):
    """(antilinear?, h, kappa): a linear cycle of t(theta) c is trivial iff h.theta + kappa = 0 mod 1."""
    m = spec.torus_rank
    h = [0] * m
    kappa = Fraction(0)
    sign = 1
    for j in reversed(cyc):
        w = spec.lines[c.line_perm[j]]
        for i in range(m):
            h[i] += sign * w[i]
        kappa += sign * Fraction(c.line_scalar[j], c.order)
        if c.line_conj[j]:
            sign = -sign
    return sign < 0, tuple(h), mod1(kappa)


def rank_by_cycles(spec: GroupSpec, g: TorusCosetElement) -> int:
    """Closed form of rank_E_minus_g: linear k-cycles give 2k or 2k-2, antilinear ones 2k-1."""
    c = g.component
    total = 0
    for cyc in cycles(c.line_perm):
        anti, h, kappa = cycle_holonomy(spec, c, cyc)
        k = len(cyc)
        if anti:
            total += 2 * k - 1
        else:
            trivial = mod1(sum(a * t for a, t in zip(h, g.torus_offset)) + kappa) == 0
            total += 2 * k - 2 if trivial else 2 * k
    if c.zero_block.rows:
        total += _zero_block_rank(c.zero_block)
    return total


@dataclass(frozen=True)
class OmegaClass:
    omega_value: int
    rank: int
    in_Omega: bool
    in_OmegaPrime: bool
    is_reflection: bool
    is_pseudoreflection: bool


def omega_value(spec: GroupSpec, g: TorusCosetElement) -> int:
    return rank_E_minus_g(spec, g) - _ad_rank(g.component.ad)


def omega(spec: GroupSpec, g: TorusCosetElement) -> OmegaClass:
    r = rank_E_minus_g(spec, g)
    w = r - _ad_rank(g.component.ad)
    prime = w == 4 and omega_value(spec, power(g, 5)) == 0
    return OmegaClass(w, r, w in (0, 2), prime, r == 1, r == 2)


def moved_weight_norm(spec: GroupSpec, ad: IntMatrix) -> int:
    """‖(E - A)P‖: nonzero vectors among (E - A)lambda, with multiplicity."""
    D = (IntMatrix.identity(ad.rows) - ad).tolist()
    return sum(k for w, k in spec.weights.entries if any(exactlin.matvec(D, w)))


def min_omega_in_coset(spec: GroupSpec, c: ComponentElement) -> tuple[int, tuple[Fraction, ...]]:
    """Minimum of omega over the coset ``T c`` together with a minimizing offset."""
    m = spec.torus_rank
    cyc_data = [(len(cyc),) + cycle_holonomy(spec, c, cyc) for cyc in cycles(c.line_perm)]
    base = 0
    linear = []
    for k, anti, h, kappa in cyc_data:
        if anti:
            base += 2 * k - 1
        else:
            base += 2 * k
            linear.append((h, -kappa))
    if c.zero_block.rows:
        base += _zero_block_rank(c.zero_block)
    best, witness = 0, (Fraction(0),) * m
    for size in range(len(linear), 0, -1):
        found = None
        for subset in combinations(linear, size):
            sol = torsolve.solve(CongruenceSystem.of([h for h, _ in subset], [a for _, a in subset], m))
            if not sol.empty:
                found = sol.particular
                break
        if found is not None:
            best, witness = size, found
            break
    return base - 2 * best - _ad_rank(c.ad), mod1_vec(witness)


def coset_omega_values(spec: GroupSpec, c: ComponentElement) -> dict[int, tuple[Fraction, ...]]:
    """Every value of omega attained on the coset ``T c``, each with a witness offset.

    The value depends only on which linear cycles have trivial holonomy.  A set
    S of cycles is realized exactly iff some component of its solution set is
    not swallowed by the condition of another cycle of the same dimension.
    """
    m = spec.torus_rank
    base = _zero_block_rank(c.zero_block) if c.zero_block.rows else 0
    linear = []
    for cyc in cycles(c.line_perm):
        anti, h, kappa = cycle_holonomy(spec, c, cyc)
        k = len(cyc)
        if anti:
            base += 2 * k - 1
        else:
            base += 2 * k
            linear.append((h, -kappa))
    base -= _ad_rank(c.ad)
    out: dict[int, tuple[Fraction, ...]] = {}
    idx = range(len(linear))
    for size in range(len(linear) + 1):
        value = base - 2 * size
        if value in out:
            continue
        for S in combinations(idx, size):
            sol = torsolve.solve(CongruenceSystem.of([linear[i][0] for i in S], [linear[i][1] for i in S], m))
            if sol.empty:
                continue
            dirs = sol.kernel.continuous_part
            others = [linear[i] for i in idx if i not in S]
            flat = [(h, a) for h, a in others if all(sum(x * y for x, y in zip(h, d)) == 0 for d in dirs)]
            for th in torsolve.component_representatives(sol):
                if not any(mod1(sum(x * t for x, t in zip(h, th)) - a) == 0 for h, a in flat):
                    out[value] = th
                    break
            if value in out:
                break
    return out


def component_subgroup_order(spec: GroupSpec, gens: Sequence[ComponentElement]) -> int:
    """Order of the subgroup of the component group generated by the cosets of ``gens``."""
    ident = spec.identity_component
    seen = {coset_canonical_form(spec, ident)}
    queue = [ident]
    while queue:
        x = queue.pop()
        for s in gens:
            y = compose_components(s, x)
            k = coset_canonical_form(spec, y)
            if k not in seen:
                seen.add(k)
                queue.append(y)
    return len(seen)


# ----------------------------------------------------------- reflections

def find_complex_reflections(spec: GroupSpec, bound: int = DEFAULT_CLOSURE_BOUND) -> list[TorusCosetElement]:
    """Complex-linear elements fixing a complex hyperplane of V (rank of E - g equal to 2).

    Every such element either moves a single line (all other lines fixed) or
    swaps two lines with trivial holonomy.  Witness lists are complete whenever
    the relevant solution sets are finite; otherwise one witness is returned.
    """
    if spec.zero_block_dim:
        raise ValueError("complex reflections are only searched when V0 = 0")
    m = spec.torus_rank
    found: dict = {}
    for c in component_closure(spec, bound):
        if not c.is_linear:
            continue
        cyc = cycles(c.line_perm)
        longer = [x for x in cyc if len(x) > 1]
        if any(len(x) > 2 for x in longer) or len(longer) > 1:
            continue
        data = [cycle_holonomy(spec, c, x) for x in cyc]
        if longer:
            sol = torsolve.solve(CongruenceSystem.of([h for _, h, _ in data], [-k for _, _, k in data], m))
            cands = _points(sol, lambda th: True)
        else:
            cands = []
            for j0 in range(len(cyc)):
                rows = [(h, -k) for i, (_, h, k) in enumerate(data) if i != j0]
                sol = torsolve.solve(CongruenceSystem.of([h for h, _ in rows], [a for _, a in rows], m))
                _, h0, k0 = data[j0]
                cands += _points(sol, lambda th: mod1(sum(a * t for a, t in zip(h0, th)) + k0) != 0)
        for th in cands:
            g = TorusCosetElement(c, th)
            if rank_E_minus_g(spec, g) == 2:
                found.setdefault(element_key(spec, g), g)
    return list(found.values())


def _points(sol: torsolve.SolutionSet, keep) -> list[tuple[Fraction, ...]]:
    if sol.empty:
        return []
    if sol.kernel.is_finite:
        return [th for th in sol.elements() if keep(th)]
    # infinite family: look along the continuous directions for one witness
    for q in range(2, 50):
        for d in sol.kernel.continuous_part:
            th = mod1_vec(p + Fraction(1, q) * x for p, x in zip(sol.particular, d))
            if keep(th):
                return [th]
    return [sol.particular] if keep(sol.particular) else []
