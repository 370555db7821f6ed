"""Linear congruences ``K theta = a (mod 1)`` on a torus, via Smith normal form."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import prod
from typing import Sequence

from . import exactlin
from .exactlin import IntMatrix


def mod1(x) -> Fraction:
    x = Fraction(x)
    return x - (x.numerator // x.denominator)


def mod1_vec(v: Sequence) -> tuple[Fraction, ...]:
    return tuple(mod1(x) for x in v)


@dataclass(frozen=True)
class CongruenceSystem:
    K: IntMatrix
    a: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.a) != self.K.rows:
            raise ValueError("target length must equal the number of rows")
        object.__setattr__(self, "a", mod1_vec(self.a))

    @classmethod
    def of(cls, K: Sequence[Sequence[int]], a: Sequence, m: int | None = None) -> "CongruenceSystem":
        Km = K if isinstance(K, IntMatrix) else IntMatrix.from_rows(K, cols=m)
        return cls(Km, tuple(Fraction(x) for x in a))


@dataclass(frozen=True)
class TorusSubgroup:
    """Closed subgroup of (R/Z)^m: continuous directions plus finite generators."""

    m: int
    continuous_part: tuple[tuple[Fraction, ...], ...] = ()
    finite_part: tuple[tuple[tuple[Fraction, ...], int], ...] = ()

    @property
    def is_finite(self) -> bool:
        return not self.continuous_part

    @property
    def dimension(self) -> int:
        return len(self.continuous_part)

    def order(self) -> int:
        """Order of the finite group, or of the component group if continuous."""
        return prod(k for _, k in self.finite_part)


@dataclass(frozen=True)
class SolutionSet:
    empty: bool
    particular: tuple[Fraction, ...] | None = None
    kernel: TorusSubgroup | None = None

    def elements(self) -> list[tuple[Fraction, ...]]:
        if self.empty:
            return []
        return [mod1_vec(x + y for x, y in zip(self.particular, k)) for k in enumerate_finite(self.kernel)]


def component_representatives(sol: SolutionSet) -> list[tuple[Fraction, ...]]:
    """One point on each connected component of a nonempty solution set (repeats possible)."""
    if sol.empty:
        return []
    finite = TorusSubgroup(sol.kernel.m, (), sol.kernel.finite_part)
    return [mod1_vec(x + y for x, y in zip(sol.particular, k)) for k in enumerate_finite(finite)]


def solve(sys: CongruenceSystem) -> SolutionSet:
    K = sys.K
    n, m = K.rows, K.cols
    if m == 0:
        if any(sys.a):
            return SolutionSet(True)
        return SolutionSet(False, (), TorusSubgroup(0))
    if n == 0:
        return SolutionSet(False, (Fraction(0),) * m, TorusSubgroup(
            m, tuple(tuple(Fraction(int(i == j)) for j in range(m)) for i in range(m)), ()))
    snf = smith(K)
    d = snf.diagonal
    r = snf.rank
    # K = U D V  =>  D (V theta) = U^{-1} a
    b = mod1_vec(exactlin.matvec(snf.U_inv.tolist(), sys.a))
    for i in range(r, n):
        if b[i] != 0:
            return SolutionSet(True)
    psi = [Fraction(0)] * m
    for i in range(r):
        psi[i] = b[i] / d[i]
    Vinv = snf.V_inv.tolist()
    theta0 = mod1_vec(exactlin.matvec(Vinv, psi))
    cols = list(zip(*Vinv)) if m else []
    finite = []
    for i in range(r):
        if d[i] > 1:
            g = mod1_vec(Fraction(c, d[i]) for c in cols[i])
            finite.append((g, d[i]))
    cont = tuple(tuple(Fraction(c) for c in cols[j]) for j in range(r, m))
    return SolutionSet(False, theta0, TorusSubgroup(m, cont, tuple(finite)))


_SNF_CACHE: dict = {}


def smith(K: IntMatrix) -> exactlin.SnfResult:
    res = _SNF_CACHE.get(K)
    if res is None:
        if len(_SNF_CACHE) > 20000:
            _SNF_CACHE.clear()
        res = _SNF_CACHE[K] = exactlin.smith_normal_form(K)
    return res


def character_kernel(K: IntMatrix | Sequence[Sequence[int]], m: int | None = None) -> TorusSubgroup:
    """Subgroup of the torus on which every row of K is trivial."""
    Km = K if isinstance(K, IntMatrix) else IntMatrix.from_rows(K, cols=m)
    return solve(CongruenceSystem(Km, (Fraction(0),) * Km.rows)).kernel


def enumerate_finite(sub: TorusSubgroup) -> list[tuple[Fraction, ...]]:
    if not sub.is_finite:
        raise ValueError("cannot enumerate an infinite torus subgroup")
    out = []
    gens = sub.finite_part
    for ks in product(*(range(k) for _, k in gens)):
        v = [Fraction(0)] * sub.m
        for (g, _), k in zip(gens, ks):
            for i in range(sub.m):
                v[i] += k * g[i]
        out.append(mod1_vec(v))
    return out


def satisfies(sys: CongruenceSystem, theta: Sequence) -> bool:
    return all(mod1(sum(k * t for k, t in zip(sys.K.row(i), theta)) - sys.a[i]) == 0 for i in range(sys.K.rows))


def in_subgroup(sub: TorusSubgroup, theta: Sequence) -> bool:
    """Membership test for a rational point."""
    m = sub.m
    # theta = sum c_j cont_j + sum k_i g_i (mod Z^m) with real c_j, integer k_i
    gens = [g for g, _ in sub.finite_part]
    for ks in product(*(range(k) for _, k in sub.finite_part)):
        rest = [Fraction(theta[i]) - sum(k * g[i] for k, g in zip(ks, gens)) for i in range(m)]
        if not sub.continuous_part:
            if all(mod1(x) == 0 for x in rest):
                return True
            continue
        # rest must lie in span(cont) + Z^m: project onto the lattice quotient
        C = [list(c) for c in sub.continuous_part]
        if _in_span_mod_z(C, rest):
            return True
    return False


def _in_span_mod_z(C: list[list[Fraction]], v: list[Fraction]) -> bool:
    # v in span_R(C) + Z^m  <=>  w . v in Z for every integer w annihilating C
    ann = exactlin.kernel_basis(C)
    if not ann:
        return True
    # integral basis of the annihilator lattice
    from math import lcm
    rows = []
    for a in ann:
        den = lcm(*(x.denominator for x in a))
        rows.append([int(x * den) for x in a])
    snf = exactlin.smith_normal_form(rows)
    # lattice of integer w with w.C = 0 is saturated: generated by rows of V for nonzero d
    Vrows = snf.V.tolist()
    for i, dd in enumerate(snf.diagonal):
        if dd:
            if mod1(sum(a * b for a, b in zip(Vrows[i], v))) != 0:
                return False
    return True
