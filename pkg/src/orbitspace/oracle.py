"""Brute-force oracles, random instances and the invariant suite.

The oracles here deliberately avoid the optimized routines they check: ranks
are recomputed by plain Fraction elimination, decompositions by enumerating set
partitions, and element ranks numerically with numpy.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import cos, lcm, pi, sin
from typing import Callable, Sequence

import numpy as np

from . import weights as W
from .cyclotomic import CycloMatrix
from .exactlin import IntMatrix
from .groupmodel import (ComponentElement, GroupSpec, TorusCosetElement, component_closure, min_omega_in_coset,
                         omega, rank_E_minus_g, validate_spec)
from .finitegroup import ClosureBoundExceeded

NUMERIC_TOL = 1e-9


# ------------------------------------------------------------------ brute rank

def _frac_rank(rows: Sequence[Sequence]) -> int:
    M = [[Fraction(x) for x in r] for r in rows]
    if not M:
        return 0
    r = 0
    ncols = len(M[0])
    for c in range(ncols):
        piv = None
        for i in range(r, len(M)):
            if M[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c] / M[r][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        r += 1
    return r


def _sign(v) -> tuple:
    for x in v:
        if x != 0:
            return tuple(v) if x > 0 else tuple(-y for y in v)
    return tuple(v)


def _multiset(vectors, m: int) -> W.WeightMultiset:
    counts = Counter(_sign(tuple(v)) for v in vectors)
    return W.WeightMultiset(m, tuple(sorted(counts.items())))


def brute_q_stable(P: W.WeightMultiset, q: int) -> bool:
    """Remove every subset of at most q vectors and compare spans."""
    vecs = [w for w, k in P.entries for _ in range(k) if any(w)]
    if len(vecs) > 12:
        raise ValueError("brute_q_stable is limited to 12 nonzero vectors")
    full = _frac_rank(vecs)
    for size in range(1, q + 1):
        for drop in combinations(range(len(vecs)), size):
            rest = [v for i, v in enumerate(vecs) if i not in drop]
            if _frac_rank(rest) < full:
                return False
    return True


def _set_partitions(items: list):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def brute_decompose(P: W.WeightMultiset) -> W.Decomposition:
    """Finest partition of the nonzero vectors into parts with independent spans."""
    vecs = [w for w, k in P.entries for _ in range(k) if any(w)]
    if len(vecs) > 8:
        raise ValueError("brute_decompose is limited to 8 nonzero vectors")
    ranks: dict = {}

    def rk(mask: int) -> int:
        if mask not in ranks:
            ranks[mask] = _frac_rank([vecs[i] for i in range(len(vecs)) if mask >> i & 1])
        return ranks[mask]

    full = rk((1 << len(vecs)) - 1) if vecs else 0
    best = None
    for part in _set_partitions(list(range(len(vecs)))):
        masks = [sum(1 << i for i in blk) for blk in part]
        if sum(rk(x) for x in masks) == full and (best is None or len(part) > len(best)):
            best = part
    comps = [_multiset([vecs[i] for i in blk], P.m) for blk in (best or [])]
    comps.sort(key=lambda c: c.entries)
    return W.Decomposition(tuple(comps), P.zero_multiplicity())


def decomposition_signature(D: W.Decomposition) -> tuple:
    return tuple(sorted(tuple(sorted((_sign(w), k) for w, k in c.entries)) for c in D.components)), \
        D.zero_multiplicity


# ------------------------------------------------------------------ numeric rank

def numeric_matrix(spec: GroupSpec, g: TorusCosetElement) -> np.ndarray:
    """Real matrix of g on V in coordinates (Re z_0, Im z_0, ..., V0)."""
    c = g.component
    n, d = spec.n_lines, spec.zero_block_dim
    M = np.zeros((2 * n + d, 2 * n + d))
    for j in range(n):
        k = c.line_perm[j]
        phase = sum(float(a) * float(t) for a, t in zip(spec.lines[k], g.torus_offset)) + c.line_scalar[j] / c.order
        a, b = cos(2 * pi * phase), sin(2 * pi * phase)
        s = -1.0 if c.line_conj[j] else 1.0
        M[2 * k:2 * k + 2, 2 * j:2 * j + 2] = [[a, -s * b], [b, s * a]]
    if d:
        M[2 * n:, 2 * n:] = c.zero_block.to_complex().real
    return M


def numeric_rank(M: np.ndarray, tol: float = NUMERIC_TOL) -> int:
    if M.size == 0:
        return 0
    return int(np.sum(np.linalg.svd(M, compute_uv=False) > tol))


def numeric_rank_check(spec: GroupSpec, g: TorusCosetElement) -> bool:
    M = numeric_matrix(spec, g)
    return numeric_rank(np.eye(M.shape[0]) - M) == rank_E_minus_g(spec, g)


# ------------------------------------------------------------------ generators

@dataclass(frozen=True)
class Bounds:
    max_rank: int = 3
    max_norm: int = 6
    entry: int = 3
    orders: tuple[int, ...] = (1, 2, 4, 8, 12, 20)


@dataclass(frozen=True)
class GeneratedInstance:
    spec: GroupSpec
    valid: bool
    note: str = ""


def signed_permutation_matrices(m: int) -> list[list[list[int]]]:
    from itertools import permutations
    out = []
    for perm in permutations(range(m)):
        for signs in product((1, -1), repeat=m):
            out.append([[signs[i] if perm[i] == j else 0 for j in range(m)] for i in range(m)])
    return out


def lattice_symmetries(lines: Sequence[Sequence[int]], m: int) -> list[IntMatrix]:
    """Integer matrices of determinant +-1 mapping the weights onto themselves up to sign."""
    return list(_lattice_symmetries(tuple(tuple(w) for w in lines), m))


@lru_cache(maxsize=512)
def _lattice_symmetries(lines: tuple, m: int) -> tuple:
    target = Counter(_sign(w) for w in lines)
    basis = []
    for w in lines:
        if _frac_rank(basis + [w]) > len(basis):
            basis.append(w)
        if len(basis) == m:
            break
    if len(basis) < m:
        return ()
    B = [list(r) for r in zip(*basis)]
    det = int(_frac_det(B))
    adj = [[int(x * det) for x in r] for r in _frac_inverse(B)]
    cands = sorted(set(lines) | {tuple(-x for x in w) for w in lines})
    out = set()
    for imgs in product(cands, repeat=m):
        # A B = C with C the chosen images as columns
        A = [[sum(imgs[k][i] * adj[k][j] for k in range(m)) for j in range(m)] for i in range(m)]
        if any(x % det for r in A for x in r):
            continue
        A = [[x // det for x in r] for r in A]
        if abs(_frac_det(A)) != 1:
            continue
        img = Counter(_sign(tuple(sum(A[i][k] * w[k] for k in range(m)) for i in range(m))) for w in lines)
        if img == target:
            out.add(IntMatrix.from_rows(A, cols=m))
    return tuple(sorted(out, key=lambda M: M.entries))


def _frac_inverse(M):
    n = len(M)
    aug = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(M)]
    for c in range(n):
        piv = next(i for i in range(c, n) if aug[i][c] != 0)
        aug[c], aug[piv] = aug[piv], aug[c]
        p = aug[c][c]
        aug[c] = [x / p for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[c])]
    return [r[n:] for r in aug]


def _frac_det(M) -> Fraction:
    M = [[Fraction(x) for x in r] for r in M]
    n = len(M)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det *= M[c][c]
        for i in range(c + 1, n):
            f = M[i][c] / M[c][c]
            M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return det


class InstanceGenerator:
    def __init__(self, seed: int, bounds: Bounds = Bounds()):
        self.seed = seed
        self.bounds = bounds
        self.rng = random.Random(seed)

    # weights
    def vector(self, m: int, nonzero: bool = True) -> tuple[int, ...]:
        e = self.bounds.entry
        while True:
            v = tuple(self.rng.randint(-e, e) for _ in range(m))
            if any(v) or not nonzero:
                return v

    def multiset(self, m: int | None = None, n: int | None = None, zeros: int = 0) -> W.WeightMultiset:
        m = m or self.rng.randint(1, self.bounds.max_rank)
        n = self.rng.randint(1, self.bounds.max_norm) if n is None else n
        vecs = [self.vector(m) for _ in range(n)] + [(0,) * m] * zeros
        return _multiset(vecs, m)

    def q_stable_multiset(self, q: int, stable: Callable = None, tries: int = 500) -> W.WeightMultiset | None:
        """Rejection sample a q-stable multiset (the count m + q is favoured)."""
        stable = stable or W.is_q_stable
        for _ in range(tries):
            m = self.rng.randint(1, self.bounds.max_rank)
            lo = m + q
            hi = max(lo, min(self.bounds.max_norm + 2, 8))
            n = lo if self.rng.random() < 0.4 else self.rng.randint(lo, hi)
            P = self.multiset(m, n, zeros=self.rng.choice((0, 0, 1, 2)))
            if W.span_rank(P) == m and stable(P, q):
                return P
        return None

    # group specs
    def _faithful_lines(self, m: int, n: int) -> list[tuple[int, ...]] | None:
        for _ in range(200):
            lines = [self.vector(m) for _ in range(n)]
            if validate_spec(GroupSpec(m, 1, tuple(lines))).ok:
                return lines
        return None

    def _symmetric_lines(self, m: int) -> list[tuple[int, ...]] | None:
        mats = signed_permutation_matrices(m)
        for _ in range(200):
            A = self.rng.choice(mats)
            lines: list = []
            for _ in range(self.rng.randint(1, 3)):
                v = self.vector(m)
                orbit = []
                w = v
                while True:
                    if any(_sign(w) == _sign(u) for u in orbit):
                        break
                    orbit.append(w)
                    w = tuple(sum(A[i][k] * w[k] for k in range(m)) for i in range(m))
                lines.extend(orbit)
            if len(lines) <= self.bounds.max_norm and validate_spec(GroupSpec(m, 1, tuple(lines))).ok:
                return lines
        return None

    def _component(self, spec: GroupSpec, A: IntMatrix) -> ComponentElement:
        n, N = spec.n_lines, spec.cyclotomic_order
        free = list(range(n))
        self.rng.shuffle(free)
        perm, conj = [0] * n, [False] * n
        for j in range(n):
            t = tuple(A @ list(spec.lines[j]))
            neg = tuple(-x for x in t)
            k = next(k for k in free if spec.lines[k] in (t, neg))
            free.remove(k)
            perm[j], conj[j] = k, spec.lines[k] == neg
        scal = [self.rng.randrange(N) for _ in range(n)]
        d = spec.zero_block_dim
        Z = self.rng.choice(signed_permutation_matrices(d)) if d else []
        return ComponentElement.make(spec, A, perm, scal, conj, Z if d else None)

    def spec(self, shape: str = "monomial-extension", closure_bound: int = 200, two_stable: bool = False,
             tries: int = 100) -> GeneratedInstance:
        for _ in range(tries):
            N = self.rng.choice(self.bounds.orders)
            if shape == "finite":
                d = self.rng.randint(1, 4)
                base = GroupSpec(0, N, (), d)
                gens = [ComponentElement.make(base, [], zero_block=self.rng.choice(signed_permutation_matrices(d)))
                        for _ in range(self.rng.randint(1, 2))]
                spec = base.with_generators(gens)
                try:
                    component_closure(spec, closure_bound)
                except ClosureBoundExceeded:
                    continue
                return GeneratedInstance(spec, True, "finite")
            m = self.rng.randint(1, self.bounds.max_rank)
            if shape == "torus-only":
                lines = self._faithful_lines(m, self.rng.randint(m, self.bounds.max_norm))
                if lines is None:
                    continue
                spec = GroupSpec(m, N, tuple(lines), self.rng.choice((0, 0, 1)))
            else:
                lines = self._symmetric_lines(m)
                if lines is None:
                    continue
                base = GroupSpec(m, N, tuple(lines), self.rng.choice((0, 0, 0, 1, 2)))
                syms = lattice_symmetries(lines, m)
                nontrivial = [A for A in syms if A != IntMatrix.identity(m)]
                if not nontrivial:
                    continue
                gens = [self._component(base, self.rng.choice(nontrivial)) for _ in range(self.rng.randint(1, 2))]
                spec = base.with_generators(gens)
            if two_stable and not W.is_q_stable(spec.weights, 2):
                continue
            rep = validate_spec(spec)
            if not rep.ok:
                return GeneratedInstance(spec, False, rep.failures[0].message)
            try:
                component_closure(spec, closure_bound)
            except ClosureBoundExceeded:
                continue
            return GeneratedInstance(spec, True, shape)
        raise RuntimeError("could not generate an instance within the retry budget")

    def offset(self, m: int, denominators: Sequence[int] = (1, 2, 3, 4, 5, 6, 8, 12)) -> tuple[Fraction, ...]:
        q = self.rng.choice(denominators)
        return tuple(Fraction(self.rng.randrange(q), q) for _ in range(m))

    def elements(self, spec: GroupSpec, per_coset: int = 3, closure_bound: int = 200) -> list[TorusCosetElement]:
        out = []
        for c in component_closure(spec, closure_bound):
            out.append(TorusCosetElement(c, min_omega_in_coset(spec, c)[1]))
            for _ in range(per_coset):
                out.append(TorusCosetElement(c, self.offset(spec.torus_rank)))
        return out


# ------------------------------------------------------------------ invariants

def _moved(spec: GroupSpec, A: IntMatrix) -> list[tuple[int, ...]]:
    """(E - A)P as a list of nonzero vectors, with multiplicity."""
    m = spec.torus_rank
    out = []
    for w, k in spec.weights.entries:
        v = tuple(w[i] - sum(A[i, j] * w[j] for j in range(m)) for i in range(m))
        if any(v):
            out.extend([v] * k)
    return out


def _fixed_isotypic_ok(spec: GroupSpec, g: TorusCosetElement) -> bool:
    """Lines whose weight is fixed by A, and V0, are fixed pointwise by g."""
    c = g.component
    A = c.ad
    m = spec.torus_rank
    for j, w in enumerate(spec.lines):
        if tuple(sum(A[i, k] * w[k] for k in range(m)) for i in range(m)) != w:
            continue
        k = c.line_perm[j]
        phase = sum(a * t for a, t in zip(spec.lines[k], g.torus_offset)) + Fraction(c.line_scalar[j], c.order)
        if k != j or c.line_conj[j] or phase.numerator % phase.denominator:
            return False
    d = spec.zero_block_dim
    return not d or c.zero_block == CycloMatrix.identity(c.order, d)


def omega_invariant_failures(spec: GroupSpec, g: TorusCosetElement, two_stable: bool) -> list[str]:
    c = g.component
    A = c.ad
    m = spec.torus_rank
    E = IntMatrix.identity(m)
    rank = rank_E_minus_g(spec, g)
    moved = _moved(spec, A)
    r = _frac_rank((E - A).tolist()) if m else 0
    A2 = A @ A
    cls = omega(spec, g)
    fails = []
    if rank < len(moved):
        fails.append("rk(E - g) < ‖(E - A)P‖")
    if rank == len(moved) and (A2 != E or not _fixed_isotypic_ok(spec, g)):
        fails.append("equality rk(E - g) = ‖(E - A)P‖ without A^2 = E and fixed isotypic part")
    if not two_stable:
        return fails
    if A != E:
        if cls.omega_value < 2:
            fails.append("A != E but omega < 2")
        if cls.omega_value == 2 and (A2 != E or len(moved) - r != 2 or not _fixed_isotypic_ok(spec, g)):
            fails.append("omega = 2 without its consequences")
        if cls.in_Omega:
            if A2 != E or len(moved) - r != 2 or not _fixed_isotypic_ok(spec, g):
                fails.append("Omega element with A != E violates A^2 = E or ‖(E-A)P‖ - r = 2")
            elif len(brute_decompose(_multiset(moved, m)).components) != 1:
                fails.append("(E - A)P is decomposable for an Omega element")
            elif any(_frac_rank(list(S)) < len(S) for k in range(1, r + 1) for S in combinations(moved, k)):
                fails.append("some r vectors of (E - A)P are dependent for an Omega element")
    if cls.in_OmegaPrime and A != E:
        fails.append("Omega' element with A != E")
    return fails


def q_stable_property_failures(P: W.WeightMultiset, q: int, gen: InstanceGenerator,
                               stable: Callable) -> list[str]:
    """The elementary properties of a q-stable multiset P."""
    m = P.m
    fails = []
    vecs = P.vectors()
    rng = gen.rng
    # 1) zeros and nonzero scalings do not matter
    with_zero = _multiset(vecs + [(0,) * m] * rng.randint(1, 2), m)
    factors = [Fraction(rng.choice((-3, -2, -1, 2, 3, Fraction(1, 2)))) for _ in vecs]
    scaled = W.sign_normalize([tuple(s * x for x in v) for s, v in zip(factors, vecs)], m)
    nz = [v for v in vecs if any(v)]
    if not stable(with_zero, q) or not stable(scaled, q) or not stable(_multiset(nz, m), q):
        fails.append("property 1: zeros or scalings changed q-stability")
    # 2) images under linear maps, restrictions to subspaces
    k = rng.randint(1, m + 1)
    M = [[rng.randint(-2, 2) for _ in range(m)] for _ in range(k)]
    img = _multiset([tuple(sum(M[i][j] * v[j] for j in range(m)) for i in range(k)) for v in vecs], k)
    if not stable(img, q):
        fails.append(f"property 2: image under {M} not q-stable")
    basis = [gen.vector(m) for _ in range(rng.randint(1, m))]
    if _frac_rank(basis) == len(basis) and not stable(W.restrict(P, basis), q):
        fails.append(f"property 2: restriction to span {basis} not q-stable")
    # 3) components of decompositions
    comps = brute_decompose(P).components
    for mask in range(1, 1 << len(comps)):
        union = [v for i, c in enumerate(comps) if mask >> i & 1 for v in c.vectors()]
        if not stable(_multiset(union, m), q):
            fails.append("property 3: a union of components is not q-stable")
            break
    # 4) and 5)
    dim = _frac_rank(nz) if nz else 0
    if dim and len(nz) < dim + q:
        fails.append("property 4: fewer than m + q nonzero vectors")
    if dim and len(nz) == dim + q:
        if len(comps) != 1:
            fails.append("property 5: decomposable with exactly m + q vectors")
        elif any(_frac_rank(list(S)) < len(S) for s in range(1, dim + 1) for S in combinations(nz, s)):
            fails.append("property 5: some m vectors are dependent")
    return fails


def torsolve_failures(gen: InstanceGenerator) -> list[str]:
    return torsolve_case(gen)[0]


def torsolve_case(gen: InstanceGenerator) -> tuple[list[str], bool]:
    """Substitution soundness always; grid completeness when m <= 2 and denominators are small.

    Returns the failures and whether the grid comparison ran.
    """
    from . import torsolve
    rng = gen.rng
    m = rng.randint(1, 3)
    n = rng.randint(0, 3)
    K = [[rng.randint(-3, 3) for _ in range(m)] for _ in range(n)]
    dens = (1, 2, 3, 4, 6)
    a = [Fraction(rng.randrange(q), q) for q in (rng.choice(dens) for _ in range(n))]
    sys = torsolve.CongruenceSystem.of(K, a, m)
    sol = torsolve.solve(sys)

    def holds(th):
        return all((sum(Fraction(k) * t for k, t in zip(row, th)) - ai).denominator == 1 for row, ai in zip(K, a))

    fails = []
    if not sol.empty:
        if not holds(sol.particular):
            fails.append(f"particular solution fails for K={K}, a={a}")
        if sol.kernel.is_finite:
            for th in sol.elements():
                if not holds(th):
                    fails.append(f"solution {th} fails for K={K}, a={a}")
                    break
        else:
            for _ in range(5):
                th = list(sol.particular)
                for dvec in sol.kernel.continuous_part:
                    t = Fraction(rng.randrange(1, 97), 97)
                    th = [x + t * y for x, y in zip(th, dvec)]
                if not holds(th):
                    fails.append(f"continuous family point fails for K={K}, a={a}")
                    break
    if m <= 2:
        # solution denominators divide lcm(den a) times any nonzero maximal minor of K
        D = lcm(*(x.denominator for x in a)) * _maximal_minor(K) if a else 1
        if D ** m > 40000:
            return fails, False
        grid = [tuple(Fraction(i, D) for i in idx) for idx in product(range(D), repeat=m)]
        found = {th for th in grid if holds(th)}
        if sol.empty:
            if found:
                fails.append(f"reported empty but {sorted(found)[0]} solves K={K}, a={a}")
        else:
            member = {th for th in grid if torsolve.in_subgroup(
                sol.kernel, [x - y for x, y in zip(th, sol.particular)])}
            if member != found:
                fails.append(f"grid search disagrees for K={K}, a={a}")
            if sol.kernel.is_finite and len(found) != len(set(sol.elements())):
                fails.append(f"solution count mismatch for K={K}, a={a}")
        return fails, True
    return fails, False


def _maximal_minor(K: list[list[int]]) -> int:
    r = _frac_rank(K) if K else 0
    if not r:
        return 1
    for rows in combinations(range(len(K)), r):
        for cols in combinations(range(len(K[0])), r):
            det = _frac_det([[K[i][j] for j in cols] for i in rows])
            if det:
                return abs(int(det))
    raise AssertionError("rank and minors disagree")


# ------------------------------------------------------------------ suite

DEFAULT_COUNTS = {
    "q_stable_agreement": 300,
    "decompose_agreement": 150,
    "q_stable_properties": 200,
    "rank_numeric": 150,
    "omega_invariants": 30,
    "torsolve": 300,
    "manifold_consistency": 5,
}


@dataclass
class CaseResult:
    name: str
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


@dataclass
class SuiteReport:
    seed: int
    cases: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)

    def lines(self) -> list[str]:
        out = []
        for c in self.cases:
            status = "PASS" if c.passed else "FAIL"
            out.append(f"{status} {c.name}: {c.checked} checked, {len(c.failures)} failures")
            out.extend(f"    {f}" for f in c.failures[:5])
        return out


def run_invariant_suite(seed: int = 0, counts: int | dict | None = None,
                        overrides: dict | None = None) -> SuiteReport:
    """Evaluate the property checks on generated instances.

    ``overrides`` may replace ``is_q_stable`` (used by the mutation self-test).
    """
    if counts is None:
        counts = dict(DEFAULT_COUNTS)
    elif isinstance(counts, int):
        counts = {k: counts for k in DEFAULT_COUNTS}
    overrides = overrides or {}
    stable = overrides.get("is_q_stable", W.is_q_stable)
    report = SuiteReport(seed)
    for name in DEFAULT_COUNTS:
        n = counts.get(name, 0)
        if n <= 0:
            continue
        gen = InstanceGenerator(seed * 1000003 + sum(map(ord, name)))
        case = CaseResult(name)
        for i in range(n):
            tag = f"[seed {seed}, case {i}]"
            try:
                fails = _run_case(name, gen, stable)
            except Exception as e:  # a crash under test counts as a failure
                fails = [f"{type(e).__name__}: {e}"]
            for f in fails:
                case.failures.append(f"{tag} {f}")
            case.checked += 1
        report.cases.append(case)
    return report


def _run_case(name: str, gen: InstanceGenerator, stable: Callable) -> list[str]:
    rng = gen.rng
    if name == "q_stable_agreement":
        P = gen.multiset(n=rng.randint(0, 7), zeros=rng.choice((0, 1)))
        q = rng.randint(1, 3)
        if stable(P, q) != brute_q_stable(P, q):
            return [f"is_q_stable disagrees with brute force on {P.entries}, q={q}"]
        return []
    if name == "decompose_agreement":
        P = gen.multiset(n=rng.randint(1, 8))
        if decomposition_signature(W.decompose(P)) != decomposition_signature(brute_decompose(P)):
            return [f"decompose disagrees with brute force on {P.entries}"]
        return []
    if name == "q_stable_properties":
        q = rng.randint(1, 2)
        P = gen.q_stable_multiset(q, stable)
        if P is None:
            return ["no q-stable instance found"]
        return q_stable_property_failures(P, q, gen, stable)
    if name == "rank_numeric":
        inst = gen.spec(rng.choice(("monomial-extension", "torus-only", "finite")))
        fails = []
        for g in rng.sample(gen.elements(inst.spec, 1), k=min(4, len(gen.elements(inst.spec, 1)))):
            if not numeric_rank_check(inst.spec, g):
                fails.append(f"numeric rank differs for {g}")
            if all(g.component.line_conj) and inst.spec.n_lines:
                lines_rank = rank_E_minus_g(inst.spec, g) - _zero_rank(inst.spec, g)
                if lines_rank < inst.spec.n_lines:
                    fails.append("antilinear element fixes more than n real dimensions")
        return fails
    if name == "omega_invariants":
        inst = gen.spec("monomial-extension", two_stable=True)
        fails = []
        for g in gen.elements(inst.spec, 2):
            fails.extend(omega_invariant_failures(inst.spec, g, True))
        return fails[:3]
    if name == "torsolve":
        return torsolve_failures(gen)
    if name == "manifold_consistency":
        return manifold_consistency_failures(gen.spec("monomial-extension", two_stable=True).spec)
    raise KeyError(name)


def _zero_rank(spec: GroupSpec, g: TorusCosetElement) -> int:
    d = spec.zero_block_dim
    if not d:
        return 0
    Z = g.component.zero_block.to_complex().real
    return numeric_rank(np.eye(d) - Z)


CONSISTENCY_KEYS = ("check_weight_count_equality", "check_xi_directions", "check_commutator_identity")


def manifold_consistency_failures(spec: GroupSpec, plan=None) -> list[str]:
    """Run the decision procedure and cross-check every MANIFOLD factor."""
    from .classify import Report, Verdict, decide
    from .stabilizer import SamplingPlan
    report = decide(spec, plan or SamplingPlan(count=3))
    fails = []
    if Report.from_dict(report.to_dict()) != report:
        fails.append("report does not round-trip")
    for fr in report.factors:
        keys = {e.key: e.passed for e in fr.evidence}
        ran = any(k in keys for k in CONSISTENCY_KEYS)
        if ran and not all(e.passed for e in fr.evidence if e.key.startswith("check_")):
            fails.append(f"factor {fr.index}: a consistency check failed on a MANIFOLD classification")
        if fr.verdict is Verdict.MANIFOLD and fr.kind == "torus":
            nz = [w for w in fr.weights if any(w)]
            if len(nz) != _frac_rank(nz) + 2:
                fails.append(f"factor {fr.index}: ‖Q‖ != dim<Q> + 2 on a MANIFOLD factor")
    return fails
