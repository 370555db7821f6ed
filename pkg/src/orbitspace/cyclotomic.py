"""Exact arithmetic in the cyclotomic field Q(zeta_N).

Elements are stored as integer coefficient vectors over the power basis
``1, z, ..., z^(phi(N)-1)`` with one common positive denominator, reduced
modulo the N-th cyclotomic polynomial, so equal elements compare and hash
equal.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Sequence


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    # coefficient lists, lowest degree first; den monic
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for k in range(len(out) - 1, -1, -1):
        c = num[k + len(den) - 1]
        out[k] = c
        for i, d in enumerate(den):
            num[k + i] -= c * d
    if any(num):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients of the n-th cyclotomic polynomial, lowest degree first."""
    p = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            p = _poly_divexact(p, list(cyclotomic_poly(d)))
    return tuple(p)


class _Field:
    def __init__(self, order: int):
        if order < 1:
            raise ValueError("cyclotomic order must be positive")
        self.order = order
        self.poly = cyclotomic_poly(order)
        self.phi = len(self.poly) - 1
        # z^e reduced, for 0 <= e < max(order, 2*phi)
        top = max(order, 2 * self.phi)
        cur = [0] * self.phi
        cur[0] = 1
        table = []
        for _ in range(top):
            table.append(tuple(cur))
            # multiply by z
            hi = cur[-1]
            cur = [0] + cur[:-1]
            if hi:
                cur = [c - hi * p for c, p in zip(cur, self.poly[:-1])]
        self.powers = table
        self.units = [k for k in range(1, order + 1) if gcd(k, order) == 1 and k % order != 1 % order]

    def reduce(self, coeffs: Sequence[int]) -> list[int]:
        out = list(coeffs[:self.phi]) + [0] * max(0, self.phi - len(coeffs))
        for e in range(self.phi, len(coeffs)):
            c = coeffs[e]
            if c:
                row = self.powers[e] if e < len(self.powers) else self.powers[e % self.order]
                for i, r in enumerate(row):
                    if r:
                        out[i] += c * r
        return out

    def galois(self, coeffs: Sequence[int], k: int) -> list[int]:
        out = [0] * self.phi
        for i, c in enumerate(coeffs):
            if c:
                row = self.powers[(i * k) % self.order]
                for j, r in enumerate(row):
                    if r:
                        out[j] += c * r
        return out


@lru_cache(maxsize=None)
def field(order: int) -> _Field:
    return _Field(order)


def _normalize(num: Sequence[int], den: int) -> tuple[tuple[int, ...], int]:
    if den < 0:
        num = [-c for c in num]
        den = -den
    g = den
    for c in num:
        g = gcd(g, c)
        if g == 1:
            break
    if not any(num):
        return tuple(0 for _ in num), 1
    if g > 1:
        num = [c // g for c in num]
        den //= g
    return tuple(num), den


@dataclass(frozen=True)
class CycloScalar:
    order: int
    num: tuple[int, ...]
    den: int = 1

    @classmethod
    def make(cls, order: int, coeffs: Sequence) -> "CycloScalar":
        """Build from rational coefficients over the power basis (any length)."""
        F = field(order)
        fr = [Fraction(c) for c in coeffs]
        den = lcm(*(c.denominator for c in fr)) if fr else 1
        ints = F.reduce([int(c * den) for c in fr]) if len(fr) > F.phi else [int(c * den) for c in fr] + [0] * (F.phi - len(fr))
        num, den = _normalize(ints, den)
        return cls(order, num, den)

    @classmethod
    def rational(cls, order: int, x) -> "CycloScalar":
        return cls.make(order, [Fraction(x)])

    @classmethod
    def zero(cls, order: int) -> "CycloScalar":
        return cls(order, (0,) * field(order).phi, 1)

    @classmethod
    def one(cls, order: int) -> "CycloScalar":
        return cls.rational(order, 1)

    @classmethod
    def root(cls, order: int, k: int) -> "CycloScalar":
        """zeta_order ** k"""
        F = field(order)
        return cls(order, F.powers[k % order], 1)

    @classmethod
    def from_phase(cls, order: int, phase: Fraction) -> "CycloScalar":
        """exp(2 pi i * phase); phase must have denominator dividing order."""
        phase = Fraction(phase)
        if (phase * order).denominator != 1:
            raise ValueError(f"phase {phase} is not an {order}-th root of unity")
        return cls.root(order, int(phase * order))

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.num)

    def is_zero(self) -> bool:
        return not any(self.num)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def _coerce(self, other) -> "CycloScalar":
        if isinstance(other, CycloScalar):
            if other.order != self.order:
                raise ValueError("mixing cyclotomic fields of different order")
            return other
        return CycloScalar.rational(self.order, other)

    def __add__(self, other) -> "CycloScalar":
        o = self._coerce(other)
        den = self.den * o.den // gcd(self.den, o.den)
        a, b = den // self.den, den // o.den
        num, den = _normalize([x * a + y * b for x, y in zip(self.num, o.num)], den)
        return CycloScalar(self.order, num, den)

    __radd__ = __add__

    def __neg__(self) -> "CycloScalar":
        return CycloScalar(self.order, tuple(-c for c in self.num), self.den)

    def __sub__(self, other) -> "CycloScalar":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "CycloScalar":
        return self._coerce(other) - self

    def __mul__(self, other) -> "CycloScalar":
        o = self._coerce(other)
        if self.is_zero() or o.is_zero():
            return CycloScalar.zero(self.order)
        F = field(self.order)
        prod = [0] * (2 * F.phi - 1)
        for i, x in enumerate(self.num):
            if x:
                for j, y in enumerate(o.num):
                    if y:
                        prod[i + j] += x * y
        num, den = _normalize(F.reduce(prod), self.den * o.den)
        return CycloScalar(self.order, num, den)

    __rmul__ = __mul__

    def conj(self) -> "CycloScalar":
        F = field(self.order)
        num, den = _normalize(F.galois(self.num, self.order - 1), self.den)
        return CycloScalar(self.order, num, den)

    def inverse(self) -> "CycloScalar":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in cyclotomic field")
        F = field(self.order)
        # product of the nontrivial Galois conjugates; x * it is the (rational) norm
        acc = CycloScalar.one(self.order)
        for k in F.units:
            num, den = _normalize(F.galois(self.num, k), self.den)
            acc = acc * CycloScalar(self.order, num, den)
        norm = self * acc
        if any(norm.num[1:]):
            raise ArithmeticError("norm is not rational")
        n = Fraction(norm.num[0], norm.den)
        return acc * (1 / n)

    def __truediv__(self, other) -> "CycloScalar":
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other) -> "CycloScalar":
        return self._coerce(other) * self.inverse()

    def lift(self, order: int) -> "CycloScalar":
        """Embed into Q(zeta_order); order must be a multiple of self.order."""
        if order % self.order:
            raise ValueError("target order must be a multiple")
        step = order // self.order
        F = field(order)
        out = [0] * F.phi
        for i, c in enumerate(self.num):
            if c:
                for j, r in enumerate(F.powers[(i * step) % order]):
                    out[j] += c * r
        num, den = _normalize(out, self.den)
        return CycloScalar(order, num, den)

    def is_real(self) -> bool:
        return self.conj() == self

    def to_complex(self) -> complex:
        z = cmath.exp(2j * cmath.pi / self.order)
        return sum(c * z ** i for i, c in enumerate(self.num)) / self.den

    def __repr__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*z^{i}")
        return f"Cyclo{self.order}({' + '.join(terms) or '0'})"


@dataclass(frozen=True)
class CycloMatrix:
    rows: int
    cols: int
    entries: tuple[CycloScalar, ...]
    order: int

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match shape")

    @classmethod
    def from_rows(cls, order: int, rows: Sequence[Sequence], cols: int | None = None) -> "CycloMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else (cols or 0)
        flat = []
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged rows")
            for x in r:
                flat.append(x if isinstance(x, CycloScalar) else CycloScalar.rational(order, x))
        return cls(len(rows), ncols, tuple(flat), order)

    @classmethod
    def identity(cls, order: int, n: int) -> "CycloMatrix":
        one, zero = CycloScalar.one(order), CycloScalar.zero(order)
        return cls(n, n, tuple(one if i == j else zero for i in range(n) for j in range(n)), order)

    @classmethod
    def zeros(cls, order: int, rows: int, cols: int) -> "CycloMatrix":
        return cls(rows, cols, (CycloScalar.zero(order),) * (rows * cols), order)

    def __getitem__(self, ij) -> CycloScalar:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[CycloScalar, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def tolist(self) -> list[list[CycloScalar]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def __matmul__(self, other: "CycloMatrix") -> "CycloMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        zero = CycloScalar.zero(self.order)
        out = []
        for i in range(self.rows):
            r = self.row(i)
            for j in range(other.cols):
                acc = zero
                for k in range(self.cols):
                    a = r[k]
                    if a:
                        b = other.entries[k * other.cols + j]
                        if b:
                            acc = acc + a * b
                out.append(acc)
        return CycloMatrix(self.rows, other.cols, tuple(out), self.order)

    def __add__(self, other: "CycloMatrix") -> "CycloMatrix":
        return CycloMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)), self.order)

    def __sub__(self, other: "CycloMatrix") -> "CycloMatrix":
        return CycloMatrix(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)), self.order)

    def __neg__(self) -> "CycloMatrix":
        return CycloMatrix(self.rows, self.cols, tuple(-a for a in self.entries), self.order)

    def conj(self) -> "CycloMatrix":
        return CycloMatrix(self.rows, self.cols, tuple(a.conj() for a in self.entries), self.order)

    @property
    def T(self) -> "CycloMatrix":
        return CycloMatrix(self.cols, self.rows,
                           tuple(self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)),
                           self.order)

    def lift(self, order: int) -> "CycloMatrix":
        return CycloMatrix(self.rows, self.cols, tuple(a.lift(order) for a in self.entries), order)

    def to_complex(self):
        import numpy as np
        return np.array([[x.to_complex() for x in self.row(i)] for i in range(self.rows)], dtype=complex).reshape(
            self.rows, self.cols)


def complex_rank(M: CycloMatrix | Sequence[Sequence[CycloScalar]]) -> int:
    """Rank over Q(zeta_N) by Gaussian elimination."""
    rows = [list(r) for r in (M.tolist() if isinstance(M, CycloMatrix) else M)]
    rows = [r for r in rows if any(r)]
    if not rows:
        return 0
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c].inverse()
        prow = [x * inv if x else x for x in rows[r]]
        rows[r] = prow
        for i in range(r + 1, len(rows)):
            f = rows[i][c]
            if f:
                rows[i] = [x - f * y if y else x for x, y in zip(rows[i], prow)]
        r += 1
        if r == len(rows):
            break
    return r


@dataclass(frozen=True)
class SemilinearOp:
    """Real-linear operator ``v -> A v + B conj(v)`` on C^n."""

    A: CycloMatrix
    B: CycloMatrix

    @property
    def dim(self) -> int:
        return self.A.rows

    @property
    def order(self) -> int:
        return self.A.order


def semilinear_real_rank(T: SemilinearOp) -> int:
    """Real rank of ``v -> A v + B conj(v)``.

    Equals the complex rank of ``[[A, B], [conj B, conj A]]`` acting on
    V + conj(V).
    """
    n = T.dim
    if n == 0:
        return 0
    A, B = T.A.tolist(), T.B.tolist()
    Ac, Bc = T.A.conj().tolist(), T.B.conj().tolist()
    doubled = [A[i] + B[i] for i in range(n)] + [Bc[i] + Ac[i] for i in range(n)]
    return complex_rank(doubled)
