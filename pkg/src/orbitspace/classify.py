"""Decision engine: is V/G a manifold, only a homological manifold, or neither?

Pipeline: stability gate, splitting into indecomposable factors, one
classifier per factor (finite part on V0, rank-1 tori, rank >= 2 tori), then a
fold over the factor verdicts plus consistency cross-checks.
"""

from __future__ import annotations

import enum
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from . import exactlin, torsolve
from .cyclotomic import CycloMatrix, CycloScalar, complex_rank
from .exactlin import IntMatrix
from .finitegroup import FiniteGroup
from .groupmodel import (DEFAULT_CLOSURE_BOUND, ComponentElement, GroupSpec, SpecValidationError, _dual, ad_image,
                         coset_canonical_form, coset_omega_values, component_closure, component_subgroup_order,
                         find_complex_reflections, validate_spec)
from .stabilizer import SamplingPlan, check_condition_iv, generation_diagnostic
from .weights import WeightMultiset, component_indices, is_q_stable


class Verdict(str, enum.Enum):
    MANIFOLD = "MANIFOLD"
    HOMOLOGY_ONLY = "HOMOLOGY_ONLY"
    NOT_HOMOLOGY = "NOT_HOMOLOGY"
    NOT_MANIFOLD_HOMOLOGY_UNKNOWN = "NOT_MANIFOLD_HOMOLOGY_UNKNOWN"
    UNKNOWN = "UNKNOWN"

    @property
    def is_manifold(self) -> bool | None:
        return {"MANIFOLD": True, "HOMOLOGY_ONLY": False, "NOT_HOMOLOGY": False,
                "NOT_MANIFOLD_HOMOLOGY_UNKNOWN": False}.get(self.value)

    @property
    def is_homological(self) -> bool | None:
        return {"MANIFOLD": True, "HOMOLOGY_ONLY": True, "NOT_HOMOLOGY": False}.get(self.value)


class UnknownReason(str, enum.Enum):
    REQUIRES_1_TO_2_REDUCTION = "requires_1_to_2_reduction"
    REQUIRES_COMPLEX_REFLECTION_REDUCTION = "requires_complex_reflection_reduction"
    CONDITION_IV_SAMPLED_ONLY = "condition_iv_sampled_only"
    PRODUCT_WITH_HOMOLOGY_ONLY_FACTOR = "product_with_homology_only_factor"


CONDITION_IV_QUALIFIER = UnknownReason.CONDITION_IV_SAMPLED_ONLY.value

READING_NOTE_II = ("condition (ii) read with the subspaces W_j permuted by G: the weight lines are the "
                   "W_j, and for m = 2 some pair of lines must be invariant as a set")
READING_NOTE_M1 = "rank-one criteria applied with the torus rank m as the rank parameter"
HOMOLOGY_ONLY_NOTE = ("k = 1 and V0 = 0: the quotient is the cone over the Poincare homology sphere, "
                      "a homological manifold that is not a topological manifold")


@dataclass
class Evidence:
    key: str
    passed: bool | None
    detail: str = ""


@dataclass
class FactorReport:
    index: int
    kind: str
    torus_rank: int
    real_dim: int
    weights: list
    verdict: Verdict
    reason: UnknownReason | None = None
    qualifiers: list = field(default_factory=list)
    evidence: list = field(default_factory=list)


@dataclass
class Report:
    verdict: Verdict
    reason: UnknownReason | None = None
    qualifiers: list = field(default_factory=list)
    evidence: list = field(default_factory=list)
    factors: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return _plain(asdict(self))

    @classmethod
    def from_dict(cls, d: dict) -> "Report":
        def ev(items):
            return [Evidence(**e) for e in items]

        factors = [FactorReport(index=f["index"], kind=f["kind"], torus_rank=f["torus_rank"],
                                real_dim=f["real_dim"], weights=[list(w) for w in f["weights"]],
                                verdict=Verdict(f["verdict"]),
                                reason=UnknownReason(f["reason"]) if f["reason"] else None,
                                qualifiers=list(f["qualifiers"]), evidence=ev(f["evidence"]))
                   for f in d["factors"]]
        return cls(Verdict(d["verdict"]), UnknownReason(d["reason"]) if d["reason"] else None,
                   list(d["qualifiers"]), ev(d["evidence"]), factors, list(d["notes"]))

    def check_monotone(self) -> None:
        v = self.verdict
        if v is Verdict.MANIFOLD:
            assert v.is_homological
        if v is Verdict.NOT_HOMOLOGY:
            assert v.is_manifold is False


def _plain(x):
    if isinstance(x, enum.Enum):
        return x.value
    if isinstance(x, dict):
        return {k: _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, Fraction):
        return str(x)
    return x


@dataclass
class FactorResult:
    verdict: Verdict
    reason: UnknownReason | None = None
    qualifiers: list = field(default_factory=list)
    evidence: list = field(default_factory=list)


# ------------------------------------------------------------------ gate

@dataclass(frozen=True)
class GateResult:
    level: int
    verdict: Verdict | None
    reason: UnknownReason | None = None

    @property
    def proceed(self) -> bool:
        return self.verdict is None


def quick_stability_gate(P: WeightMultiset) -> GateResult:
    """Not 1-stable: not a manifold.  1- but not 2-stable: needs the 1-to-2 reduction."""
    if not is_q_stable(P, 1):
        return GateResult(0, Verdict.NOT_MANIFOLD_HOMOLOGY_UNKNOWN)
    if not is_q_stable(P, 2):
        return GateResult(1, Verdict.UNKNOWN, UnknownReason.REQUIRES_1_TO_2_REDUCTION)
    return GateResult(2, None)


# ------------------------------------------------------------------ splitting

@dataclass(frozen=True)
class FactorSplit:
    zero_factor: GroupSpec | None
    factors: tuple[GroupSpec, ...]
    line_groups: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class SplitFailure:
    detail: str


def _lattice_basis(rows: list[tuple[int, ...]], m: int) -> list[tuple[int, ...]]:
    snf = torsolve.smith(IntMatrix.from_rows(rows, cols=m))
    V = snf.V.tolist()
    return [tuple(d * x for x in V[i]) for i, d in enumerate(snf.diagonal) if d]


def split_components(spec: GroupSpec, bound: int = DEFAULT_CLOSURE_BOUND) -> FactorSplit | SplitFailure:
    m, N, d = spec.torus_rank, spec.cyclotomic_order, spec.zero_block_dim
    groups = [tuple(g) for g in component_indices(spec.lines)]
    bases = [_lattice_basis([spec.lines[j] for j in g], m) for g in groups]
    cols = [b for basis in bases for b in basis]
    if len(cols) != m:
        return SplitFailure("component lattices do not span the weight lattice")
    B = [[cols[k][i] for k in range(m)] for i in range(m)]
    Binv = exactlin.inverse(B) if m else []
    offsets, pos = [], 0
    for basis in bases:
        offsets.append((pos, pos + len(basis)))
        pos += len(basis)
    closure = component_closure(spec, bound)
    keys = {coset_canonical_form(spec, c) for c in closure}
    n = spec.n_lines
    block_ads: dict = {}

    def coords(v):
        return exactlin.matvec(Binv, list(v))

    for c in closure:
        A = c.ad
        full = [coords(A @ list(b)) for b in cols]  # column k: A b_k in the new basis
        for li, (lo, hi) in enumerate(offsets):
            for k in range(lo, hi):
                if any(full[k][i] for i in range(m) if not lo <= i < hi):
                    return SplitFailure(f"ad mixes weight component {li} with another component")
        for li, g in enumerate(groups):
            gs = set(g)
            if any(c.line_perm[j] not in gs for j in g):
                return SplitFailure(f"a component element moves lines out of component {li}")
        for li, (lo, hi) in enumerate(offsets):
            blk = [[full[k][i] for k in range(lo, hi)] for i in range(lo, hi)]
            block_ads[(c, li)] = blk
            # element acting as c on V_li and trivially elsewhere
            M = [[Fraction(int(i == k)) for k in range(m)] for i in range(m)]
            for i in range(lo, hi):
                for k in range(lo, hi):
                    M[i][k] = blk[i - lo][k - lo]
            ad_full = exactlin.matmul(exactlin.matmul(B, M), Binv)
            if any(Fraction(x).denominator != 1 for r in ad_full for x in r):
                return SplitFailure(f"projection onto component {li} is not a lattice automorphism")
            gs = set(groups[li])
            proj = ComponentElement(
                IntMatrix.from_rows(ad_full, cols=m),
                tuple(c.line_perm[j] if j in gs else j for j in range(n)),
                tuple(c.line_scalar[j] if j in gs else 0 for j in range(n)),
                tuple(c.line_conj[j] if j in gs else False for j in range(n)),
                CycloMatrix.identity(N, d), N)
            if coset_canonical_form(spec, proj) not in keys:
                return SplitFailure(f"the projection of a component element onto factor {li + 1} is not in G")
        if d:
            proj0 = ComponentElement(IntMatrix.identity(m), tuple(range(n)), (0,) * n, (False,) * n,
                                     c.zero_block, N)
            if coset_canonical_form(spec, proj0) not in keys:
                return SplitFailure("the projection of a component element onto V0 is not in G")

    factors = []
    for li, (g, (lo, hi)) in enumerate(zip(groups, offsets)):
        r = hi - lo
        local = {j: i for i, j in enumerate(g)}
        lines = [tuple(int(x) for x in coords(spec.lines[j])[lo:hi]) for j in g]
        fs = GroupSpec(r, N, tuple(lines), 0, ())
        gens = []
        for s in spec.generators:
            full = [coords(s.ad @ list(b)) for b in cols]
            blk = [[int(full[k][i]) for k in range(lo, hi)] for i in range(lo, hi)]
            gens.append(ComponentElement(
                IntMatrix.from_rows(blk, cols=r), tuple(local[s.line_perm[j]] for j in g),
                tuple(s.line_scalar[j] for j in g), tuple(s.line_conj[j] for j in g),
                CycloMatrix.identity(N, 0), N))
        factors.append(fs.with_generators(gens))
    zero = None
    if d:
        z = GroupSpec(0, N, (), d, ())
        zero = z.with_generators([ComponentElement(IntMatrix.identity(0), (), (), (), s.zero_block, N)
                                  for s in spec.generators])
    return FactorSplit(zero, tuple(factors), tuple(groups))


# ------------------------------------------------------------------ finite groups

def _key(M: CycloMatrix):
    return M.entries


def _mul(A: CycloMatrix, B: CycloMatrix) -> CycloMatrix:
    return A @ B


def matrix_group(gens: Sequence[CycloMatrix], dim: int, order: int, bound: int = DEFAULT_CLOSURE_BOUND
                 ) -> FiniteGroup:
    for g in gens:
        if g @ g.T != CycloMatrix.identity(order, dim):
            raise ValueError("generator is not orthogonal")
    return FiniteGroup(list(gens), _mul, _key, CycloMatrix.identity(order, dim), bound)


def _rank(M: CycloMatrix) -> int:
    return complex_rank(M)


def _support_rank(mats: Sequence[CycloMatrix]) -> int:
    """dim of the sum of the column spaces."""
    rows = []
    for M in mats:
        rows.extend(M.T.tolist())
    return complex_rank(rows) if rows else 0


def recognize_poincare(grp: FiniteGroup, members: Sequence[int] | None = None) -> bool:
    """Order 120, perfect, and free on its 4-dimensional support."""
    H = sorted(set(range(len(grp)) if members is None else members))
    if len(H) != 120:
        return False
    if grp.commutator_subgroup(H) != frozenset(H):
        return False
    E = grp.elements[0]
    diffs = {h: E - grp.elements[h] for h in H if h != 0}
    if _support_rank(list(diffs.values())) != 4:
        return False
    return all(_rank(D) == 4 for D in diffs.values())


def classify_finite(gens: Sequence[CycloMatrix], dim: int, order: int,
                    bound: int = DEFAULT_CLOSURE_BOUND) -> FactorResult:
    grp = matrix_group(gens, dim, order, bound)
    E = grp.elements[0]
    n = len(grp)
    diff = [E - g for g in grp.elements]
    ranks = [_rank(D) for D in diff]
    R = [i for i in range(n) if ranks[i] == 2]
    Gps = grp.closure(R)
    F5 = [i for i in range(n) if ranks[i] == 4 and i not in Gps and grp.order_of(i) == 5]
    H = grp.closure(F5)
    ev = [Evidence("finite_order", True, f"|G| = {n}"),
          Evidence("pseudoreflections", True, f"{len(R)} pseudoreflections generate a subgroup of order {len(Gps)}"),
          Evidence("order_five_elements", True, f"{len(F5)} elements of order 5 outside it generate order {len(H)}")]

    def orth(a, b):
        return (diff[a].T @ diff[b]) == CycloMatrix.zeros(order, dim, dim)

    if not all(orth(r, h) for r in R for h in F5):
        ev.append(Evidence("supports_orthogonal", False, "pseudoreflection and order-5 supports overlap"))
        return FactorResult(Verdict.NOT_HOMOLOGY, evidence=ev)
    if len(Gps) * len(H) != n or len(grp.product_set(Gps, H)) != n:
        ev.append(Evidence("direct_product", False,
                           f"|G_ps| * |H| = {len(Gps) * len(H)} does not account for |G| = {n}"))
        return FactorResult(Verdict.NOT_HOMOLOGY, evidence=ev)
    ev.append(Evidence("direct_product", True, "G = G_ps x H"))
    # blocks of H: connected components of the overlap graph on F5
    parent = {i: i for i in F5}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in combinations(F5, 2):
        if not orth(a, b):
            parent[find(a)] = find(b)
    blocks: dict = {}
    for i in F5:
        blocks.setdefault(find(i), []).append(i)
    total = 1
    for blk in blocks.values():
        Hb = grp.closure(blk)
        if not recognize_poincare(grp, Hb):
            ev.append(Evidence("poincare_blocks", False, f"a block of order {len(Hb)} is not a Poincare group"))
            return FactorResult(Verdict.NOT_HOMOLOGY, evidence=ev)
        total *= len(Hb)
    if total != len(H):
        ev.append(Evidence("poincare_blocks", False, "the Poincare blocks do not multiply to H"))
        return FactorResult(Verdict.NOT_HOMOLOGY, evidence=ev)
    k = len(blocks)
    rest = dim - 4 * k
    ev.append(Evidence("poincare_blocks", True, f"k = {k}, dim V0 = {rest}"))
    if k == 1 and rest == 0:
        ev.append(Evidence("quotient_type", True, "k = 1, V₀ = 0"))
        return FactorResult(Verdict.HOMOLOGY_ONLY, evidence=ev)
    return FactorResult(Verdict.MANIFOLD, evidence=ev)


def finite_commutator_identity(gens: Sequence[CycloMatrix], dim: int, order: int,
                               bound: int = DEFAULT_CLOSURE_BOUND) -> bool:
    """G_ps [G, G] = G for a finite group."""
    grp = matrix_group(gens, dim, order, bound)
    E = grp.elements[0]
    R = [i for i, g in enumerate(grp.elements) if _rank(E - g) == 2]
    return len(grp.product_set(grp.closure(R), grp.commutator_subgroup())) == len(grp)


# ------------------------------------------------------------------ torus factors

def classify_m_ge2(spec: GroupSpec, plan: SamplingPlan = SamplingPlan(),
                   bound: int = DEFAULT_CLOSURE_BOUND) -> FactorResult:
    m, n = spec.torus_rank, spec.n_lines
    if m < 2 or spec.zero_block_dim:
        raise ValueError("classify_m_ge2 needs a factor with m >= 2 and no zero weights")
    ev: list[Evidence] = []
    ok_i = n == m + 2
    ev.append(Evidence("cond_i_weight_count", ok_i, f"‖P‖ = {n}, m + 2 = {m + 2}"))
    closure = component_closure(spec, bound)
    if m > 2:
        ok_ii = all(c.line_perm == tuple(range(n)) for c in closure)
        detail = "every line is G-invariant" if ok_ii else "some element permutes the lines"
    else:
        pairs = [p for p in combinations(range(n), 2)
                 if all({c.line_perm[p[0]], c.line_perm[p[1]]} == set(p) for c in closure)] if ok_i else []
        ok_ii = bool(pairs)
        detail = f"invariant line pairs: {[list(p) for p in pairs]}" if ok_ii else "no G-invariant pair of lines"
        if ok_ii:
            detail += "; " + _pairing_info(spec, closure, pairs)
    ev.append(Evidence("cond_ii_line_invariance", ok_ii, detail))
    minus = [c for c in closure if c.ad == -IntMatrix.identity(m) and c.line_perm == tuple(range(n))]
    ok_iii = bool(minus)
    ev.append(Evidence("cond_iii_minus_identity", ok_iii,
                       "an element with ad = -E fixes every line" if ok_iii else "no element with ad = -E fixing every line"))
    if not (ok_i and ok_ii and ok_iii):
        return FactorResult(Verdict.NOT_HOMOLOGY, evidence=ev)
    res = check_condition_iv(spec, plan, bound)
    if not res.verified_on_samples:
        ce = res.counterexample
        ev.append(Evidence("cond_iv_stabilizers_generated", False,
                           f"stabilizer of order {ce.stabilizer_order} at {_fmt_point(ce.point)} has its Omega members "
                           f"generating only order {ce.omega_generated_order}"))
        return FactorResult(Verdict.NOT_HOMOLOGY, evidence=ev)
    ev.append(Evidence("cond_iv_stabilizers_generated", True,
                       f"verified on {res.points_checked} sampled points over {res.patterns_checked} supports"))
    return FactorResult(Verdict.MANIFOLD, qualifiers=[CONDITION_IV_QUALIFIER], evidence=ev)


def _pairing_info(spec: GroupSpec, closure, pairs) -> str:
    # an Ad(G)-invariant form on the weight space: sum of A^T A
    m = spec.torus_rank
    Q = [[0] * m for _ in range(m)]
    for A in {c.ad for c in closure}:
        AtA = exactlin.matmul(A.T.tolist(), A.tolist())
        Q = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(Q, AtA)]
    L = spec.lines

    def form(i, j):
        return sum(L[i][a] * Q[a][b] * L[j][b] for a in range(m) for b in range(m))

    ortho = [(i, j) for i, j in combinations(range(spec.n_lines), 2) if form(i, j) == 0]
    good = [p for p in pairs
            if all(set(o) == set(p) or set(o) == set(range(4)) - set(p) for o in ortho)]
    return f"orthogonal pairs {[list(o) for o in ortho]}, pairing respected: {'yes' if good else 'no'}"


def _fmt_point(v) -> str:
    parts = ["0" if z is None else f"{z[0]}*e({z[1]})" for z in v.lines]
    return "(" + ", ".join(parts) + ")"


def _realify(spec: GroupSpec, c: ComponentElement, L: int) -> CycloMatrix:
    n, d = spec.n_lines, spec.zero_block_dim
    D = 2 * n + d
    zero = CycloScalar.zero(L)
    M = [[zero] * D for _ in range(D)]
    i_unit = CycloScalar.root(L, L // 4)
    half = Fraction(1, 2)
    for j in range(n):
        z = CycloScalar.root(L, c.line_scalar[j] * (L // c.order))
        zi = z.inverse()
        a = (z + zi) * half
        b = (z - zi) * half * i_unit * (-1)
        k = c.line_perm[j]
        s = -1 if c.line_conj[j] else 1
        M[2 * k][2 * j], M[2 * k][2 * j + 1] = a, b * (-s)
        M[2 * k + 1][2 * j], M[2 * k + 1][2 * j + 1] = b, a * s
    Z = c.zero_block.lift(L) if d else None
    for i in range(d):
        for j in range(d):
            M[2 * n + i][2 * n + j] = Z[i, j]
    return CycloMatrix.from_rows(L, M, cols=D)


def real_generators(spec: GroupSpec) -> list[CycloMatrix]:
    """Real matrices generating the Lie algebra of the torus and the component generators."""
    from math import lcm
    L = lcm(spec.cyclotomic_order, 4)
    n, d = spec.n_lines, spec.zero_block_dim
    D = 2 * n + d
    out = []
    for k in range(spec.torus_rank):
        rows = [[0] * D for _ in range(D)]
        for j, w in enumerate(spec.lines):
            rows[2 * j + 1][2 * j] = w[k]
            rows[2 * j][2 * j + 1] = -w[k]
        out.append(CycloMatrix.from_rows(L, rows, cols=D))
    out.extend(_realify(spec, c, L) for c in spec.generators)
    return out


def symmetric_commutant_dim(gens: Sequence[CycloMatrix], D: int) -> int:
    if D == 0:
        return 0
    L = gens[0].order if gens else 1
    zero, one = CycloScalar.zero(L), CycloScalar.one(L)
    rows = []
    for a in range(D):
        for b in range(a + 1, D):
            r = [zero] * (D * D)
            r[a * D + b], r[b * D + a] = one, -one
            rows.append(r)
    for g in gens:
        for a in range(D):
            for b in range(D):
                r = [zero] * (D * D)
                for c in range(D):
                    if g[c, b]:
                        r[a * D + c] = r[a * D + c] + g[c, b]
                    if g[a, c]:
                        r[c * D + b] = r[c * D + b] - g[a, c]
                if any(r):
                    rows.append(r)
    return D * D - complex_rank(rows)


def is_reducible(spec: GroupSpec) -> bool:
    """Whether V is reducible as a real representation of G."""
    D = spec.real_dim
    return symmetric_commutant_dim(real_generators(spec), D) > 1


def classify_m1(spec: GroupSpec, bound: int = DEFAULT_CLOSURE_BOUND) -> FactorResult:
    if spec.torus_rank != 1 or spec.zero_block_dim:
        raise ValueError("classify_m1 needs a rank-one factor with no zero weights")
    ev: list[Evidence] = []
    refl = find_complex_reflections(spec, bound)
    ev.append(Evidence("complex_reflections", not refl, f"{len(refl)} complex reflections found"))
    if refl:
        return FactorResult(Verdict.UNKNOWN, UnknownReason.REQUIRES_COMPLEX_REFLECTION_REDUCTION, evidence=ev)
    ok_dim = spec.n_lines == 3
    ev.append(Evidence("m1_dimension_three", ok_dim, f"dim_C V = ‖P‖ = {spec.n_lines}"))
    img = ad_image(spec, bound)
    ev.append(Evidence("m1_ad_image_plus_minus_E", img.equals_plus_minus_E,
                       f"Ad(G) has {len(img.matrices)} element(s)"))
    closure = component_closure(spec, bound)
    omega_cosets = []
    minus_in_omega = False
    for c in closure:
        vals = coset_omega_values(spec, c)
        if 0 in vals or 2 in vals:
            omega_cosets.append(c)
            if c.ad == -IntMatrix.identity(1):
                minus_in_omega = True
    gen_order = component_subgroup_order(spec, omega_cosets)
    ok_gen = minus_in_omega and gen_order == len(closure)
    ev.append(Evidence("m1_generated_by_omega", ok_gen,
                       f"Omega meets {len(omega_cosets)} of {len(closure)} cosets, generating {gen_order}; "
                       f"Omega element with ad = -E: {'yes' if minus_in_omega else 'no'}"))
    red = is_reducible(spec)
    ev.append(Evidence("m1_reducible", red, "reducible" if red else "irreducible"))
    ok = ok_dim and img.equals_plus_minus_E and ok_gen and red
    return FactorResult(Verdict.MANIFOLD if ok else Verdict.NOT_HOMOLOGY, evidence=ev)


# ------------------------------------------------------------------ consistency

def xi_checks(spec: GroupSpec, bound: int = DEFAULT_CLOSURE_BOUND) -> tuple[bool, str]:
    """For every set of weights cutting out a line R xi: ‖P_xi‖ = 3 and -xi in Ad(G) xi."""
    m = spec.torus_rank
    lines = spec.lines
    duals = [_dual(c.ad) for c in component_closure(spec, bound)]
    seen = set()
    checked = 0
    distinct = sorted(set(lines))
    for size in range(len(distinct) + 1):
        for Q in combinations(distinct, size):
            ker = exactlin.kernel_basis([list(q) for q in Q]) if Q else \
                [tuple(Fraction(int(i == j)) for j in range(m)) for i in range(m)]
            if len(ker) != 1:
                continue
            xi = ker[0]
            from math import lcm
            den = lcm(*(x.denominator for x in xi))
            xi = tuple(int(x * den) for x in xi)
            if xi in seen:
                continue
            seen.add(xi)
            checked += 1
            count = sum(1 for w in lines if sum(a * b for a, b in zip(w, xi)))
            if count != 3:
                return False, f"‖P_xi‖ = {count} for xi = {list(xi)}"
            neg = tuple(-x for x in xi)
            if not any(tuple(B @ list(xi)) == neg for B in duals):
                return False, f"-xi not in Ad(G) xi for xi = {list(xi)}"
    return True, f"{checked} directions xi checked"


def _consistency(spec: GroupSpec, plan: SamplingPlan, bound: int) -> list[Evidence]:
    ev = []
    r = spec.torus_rank
    ev.append(Evidence("check_weight_count_equality", spec.n_lines == r + 2,
                       f"‖Q‖ = {spec.n_lines}, dim<Q> + 2 = {r + 2}"))
    ok, detail = xi_checks(spec, bound)
    ev.append(Evidence("check_xi_directions", ok, detail))
    diag = generation_diagnostic(spec, plan, bound)
    ev.append(Evidence("check_stabilizer_identity", diag.identity_holds,
                       f"<G_v cap Omega>[G_v, G_v] = G_v on {diag.points_checked} sampled points; "
                       f"{len(diag.identity_failures)} failures"))
    ev.append(Evidence("diagnostic_component_generation", diag.components_generated,
                       f"sampled stabilizers reach {diag.generated_order} of {diag.component_order} cosets"))
    return ev


# ------------------------------------------------------------------ decide

def decide(spec: GroupSpec, plan: SamplingPlan = SamplingPlan(), bound: int = DEFAULT_CLOSURE_BOUND) -> Report:
    rep = validate_spec(spec)
    if not rep.ok:
        raise SpecValidationError(rep)
    P = spec.weights
    report = Report(Verdict.UNKNOWN)
    gate = quick_stability_gate(P)
    report.evidence.append(Evidence("stability_gate", gate.proceed, f"stability level {gate.level}"))
    if gate.verdict is Verdict.NOT_MANIFOLD_HOMOLOGY_UNKNOWN:
        report.verdict = gate.verdict
        report.notes.append("P is not 1-stable, so V/G is not a manifold")
        return _done(report)
    if not gate.proceed:
        if spec.torus_rank == 1 and not spec.zero_block_dim:
            refl = find_complex_reflections(spec, bound)
            if refl:
                report.evidence.append(Evidence("complex_reflections", False, f"{len(refl)} complex reflections found"))
                report.verdict, report.reason = Verdict.UNKNOWN, UnknownReason.REQUIRES_COMPLEX_REFLECTION_REDUCTION
                report.notes.append("G contains complex reflections; the reduction removing them is not implemented")
                return _done(report)
        report.verdict, report.reason = gate.verdict, gate.reason
        report.notes.append("P is 1-stable but not 2-stable; the reduction to the 2-stable case is not implemented")
        return _done(report)

    split = split_components(spec, bound)
    if isinstance(split, SplitFailure):
        report.evidence.append(Evidence("factor_split", False, split.detail))
        report.verdict = Verdict.NOT_HOMOLOGY
        return _done(report)
    report.evidence.append(Evidence("factor_split", True,
                                    f"{len(split.factors)} torus factor(s)"
                                    f"{', plus a finite factor on V0' if split.zero_factor else ''}"))

    results: list[tuple[FactorReport, GroupSpec | None]] = []
    idx = 0
    if split.zero_factor is not None:
        z = split.zero_factor
        res = classify_finite([c.zero_block for c in z.generators], z.zero_block_dim, z.cyclotomic_order, bound)
        if res.verdict in (Verdict.MANIFOLD, Verdict.HOMOLOGY_ONLY):
            ok = finite_commutator_identity([c.zero_block for c in z.generators], z.zero_block_dim,
                                            z.cyclotomic_order, bound)
            res.evidence.append(Evidence("check_commutator_identity", ok, "G_ps [G, G] = G"))
            if not ok:
                res.verdict = Verdict.NOT_HOMOLOGY
        if res.verdict is Verdict.HOMOLOGY_ONLY:
            report.notes.append(HOMOLOGY_ONLY_NOTE)
        results.append((FactorReport(idx, "finite", 0, z.zero_block_dim, [], res.verdict, res.reason,
                                     res.qualifiers, res.evidence), None))
        idx += 1
    for f in split.factors:
        if f.torus_rank == 1:
            res = classify_m1(f, bound)
            if READING_NOTE_M1 not in report.notes:
                report.notes.append(READING_NOTE_M1)
        else:
            res = classify_m_ge2(f, plan, bound)
            if READING_NOTE_II not in report.notes:
                report.notes.append(READING_NOTE_II)
            if res.verdict is Verdict.NOT_HOMOLOGY:
                diag = generation_diagnostic(f, plan, bound, first_failure=True)
                detail = (f"violated at {_fmt_point(diag.identity_failures[0])}" if diag.identity_failures
                          else f"holds on {diag.points_checked} sampled points")
                res.evidence.append(Evidence("check_stabilizer_identity", diag.identity_holds,
                                             f"<G_v cap Omega>[G_v, G_v] = G_v {detail}"))
        if res.verdict is Verdict.MANIFOLD:
            checks = _consistency(f, plan, bound)
            res.evidence.extend(checks)
            if not all(e.passed for e in checks if e.key.startswith("check_")):
                res.verdict, res.qualifiers = Verdict.NOT_HOMOLOGY, []
        results.append((FactorReport(idx, "torus", f.torus_rank, f.real_dim, [list(w) for w in f.lines],
                                     res.verdict, res.reason, res.qualifiers, res.evidence), f))
        idx += 1

    report.factors = [fr for fr, _ in results]
    verdicts = [fr.verdict for fr in report.factors]
    if Verdict.NOT_HOMOLOGY in verdicts:
        report.verdict = Verdict.NOT_HOMOLOGY
    elif Verdict.UNKNOWN in verdicts:
        first = next(fr for fr in report.factors if fr.verdict is Verdict.UNKNOWN)
        report.verdict, report.reason = Verdict.UNKNOWN, first.reason
    elif Verdict.HOMOLOGY_ONLY in verdicts:
        if any(fr.kind == "torus" for fr in report.factors):
            report.verdict, report.reason = Verdict.UNKNOWN, UnknownReason.PRODUCT_WITH_HOMOLOGY_ONLY_FACTOR
        else:
            report.verdict = Verdict.HOMOLOGY_ONLY
    else:
        report.verdict = Verdict.MANIFOLD
        for fr in report.factors:
            for q in fr.qualifiers:
                if q not in report.qualifiers:
                    report.qualifiers.append(q)
    return _done(report)


def _done(report: Report) -> Report:
    report.check_monotone()
    return report
