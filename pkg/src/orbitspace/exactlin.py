"""Exact linear algebra over the integers and rationals.

Rank (fraction-free Bareiss elimination), right kernels and Smith normal form
with unimodular transforms.  Matrices are immutable; every routine also
accepts plain nested lists.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match shape")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else (cols or 0)
        flat = []
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged rows")
            for x in r:
                if isinstance(x, Fraction):
                    if x.denominator != 1:
                        raise ValueError(f"non-integer entry {x}")
                    x = x.numerator
                flat.append(int(x))
        return cls(len(rows), ncols, tuple(flat))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple[int, ...]:
        return self.entries[j::self.cols] if self.cols else ()

    def tolist(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix.from_rows([self.col(j) for j in range(self.cols)], cols=self.rows)

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            return IntMatrix.from_rows(matmul(self.tolist(), other.tolist()), cols=other.cols)
        return matvec(self.tolist(), other)

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(-x for x in self.entries))

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))


@dataclass(frozen=True)
class RatMatrix:
    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match shape")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "RatMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else (cols or 0)
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), ncols, tuple(Fraction(x) for r in rows for x in r))

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def tolist(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]


@dataclass(frozen=True)
class SnfResult:
    """``A = U @ D @ V`` with ``D`` diagonal and ``d1 | d2 | ...``.

    ``U_inv`` and ``V_inv`` are carried along because the congruence solver
    needs them and recomputing inverses of unimodular matrices is wasteful.
    """

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix
    V_inv: IntMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.D[i, i] for i in range(min(self.D.rows, self.D.cols)))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


def _as_rows(M) -> list[list]:
    if isinstance(M, (IntMatrix, RatMatrix)):
        return M.tolist()
    return [list(r) for r in M]


def _ncols(M) -> int:
    if isinstance(M, (IntMatrix, RatMatrix)):
        return M.cols
    M = list(M)
    return len(M[0]) if M else 0


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list[list]:
    Bt = list(zip(*B)) if B else []
    ncols = len(B[0]) if B else 0
    if not Bt:
        return [[0] * ncols for _ in A]
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A: Sequence[Sequence], v: Sequence) -> list:
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def _integer_rows(rows: Iterable[Sequence]) -> list[list[int]]:
    out = []
    for r in rows:
        r = [Fraction(x) for x in r]
        den = lcm(*(x.denominator for x in r)) if r else 1
        out.append([int(x * den) for x in r])
    return out


def rank(M) -> int:
    """Row rank of a rational matrix via fraction-free Bareiss elimination."""
    rows = _integer_rows(_as_rows(M))
    rows = [r for r in rows if any(r)]
    if not rows:
        return 0
    ncols = len(rows[0])
    r = 0
    prev = 1
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        for i in range(r + 1, len(rows)):
            a = rows[i][c]
            rows[i] = [(p * x - a * y) // prev for x, y in zip(rows[i], rows[r])]
        prev = p
        r += 1
        if r == len(rows):
            break
    return r


def rref(M) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q and the pivot columns."""
    rows = [[Fraction(x) for x in r] for r in _as_rows(M)]
    ncols = _ncols(M)
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def kernel_basis(M) -> list[tuple[Fraction, ...]]:
    """Basis of the right kernel ``{v : M v = 0}``; empty iff full column rank."""
    ncols = _ncols(M)
    R, pivots = rref(M)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(R, pivots):
            v[pc] = -row[f]
        basis.append(tuple(v))
    return basis


def solve_rational(M, b) -> tuple[Fraction, ...] | None:
    """One solution of ``M x = b`` over Q, or None."""
    rows = _as_rows(M)
    ncols = _ncols(M)
    aug = [list(r) + [bi] for r, bi in zip(rows, b)]
    R, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, pc in zip(R, pivots):
        x[pc] = row[-1]
    return tuple(x)


def inverse(M) -> list[list[Fraction]]:
    rows = _as_rows(M)
    n = len(rows)
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(rows)]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(R) < n:
        raise ZeroDivisionError("matrix is singular")
    return [r[n:] for r in R]


def int_inverse(M) -> IntMatrix:
    """Inverse of a unimodular integer matrix."""
    inv = inverse(M)
    return IntMatrix.from_rows(inv, cols=len(inv))


def determinant(M) -> Fraction:
    rows = [[Fraction(x) for x in r] for r in _as_rows(M)]
    n = len(rows)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            det = -det
        det *= rows[c][c]
        for i in range(c + 1, n):
            f = rows[i][c] / rows[c][c]
            if f:
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return det


# --- Smith normal form -----------------------------------------------------

def _swap_rows(M, i, j):
    M[i], M[j] = M[j], M[i]


def _swap_cols(M, i, j):
    for r in M:
        r[i], r[j] = r[j], r[i]


def _add_row(M, src, dst, f):
    # row dst += f * row src
    M[dst] = [a + f * b for a, b in zip(M[dst], M[src])]


def _add_col(M, src, dst, f):
    for r in M:
        r[dst] += f * r[src]


def smith_normal_form(A) -> SnfResult:
    """Smith normal form ``A = U D V`` with nonnegative divisibility chain.

    Pivot: smallest nonzero absolute value in the active submatrix, ties broken
    by lowest (row, col), so the output is deterministic.
    """
    D = [list(map(int, r)) for r in _as_rows(A)]
    n = len(D)
    m = _ncols(A)
    # L @ A @ R = D; keep L^{-1} and R^{-1} in step so that U = L^{-1}, V = R^{-1}.
    L = [[int(i == j) for j in range(n)] for i in range(n)]
    Linv = [[int(i == j) for j in range(n)] for i in range(n)]
    R = [[int(i == j) for j in range(m)] for i in range(m)]
    Rinv = [[int(i == j) for j in range(m)] for i in range(m)]

    def row_swap(i, j):
        _swap_rows(D, i, j)
        _swap_rows(L, i, j)
        _swap_cols(Linv, i, j)

    def col_swap(i, j):
        _swap_cols(D, i, j)
        _swap_cols(R, i, j)
        _swap_rows(Rinv, i, j)

    def row_add(src, dst, f):
        _add_row(D, src, dst, f)
        _add_row(L, src, dst, f)
        _add_col(Linv, dst, src, -f)

    def col_add(src, dst, f):
        _add_col(D, src, dst, f)
        _add_col(R, src, dst, f)
        _add_row(Rinv, dst, src, -f)

    def row_neg(i):
        D[i] = [-x for x in D[i]]
        L[i] = [-x for x in L[i]]
        for r in Linv:
            r[i] = -r[i]

    t = 0
    while t < min(n, m):
        best = None
        for i in range(t, n):
            for j in range(t, m):
                v = abs(D[i][j])
                if v and (best is None or v < best[0]):
                    best = (v, i, j)
        if best is None:
            break
        _, pi, pj = best
        row_swap(t, pi)
        col_swap(t, pj)
        while True:
            p = D[t][t]
            dirty = False
            for i in range(t + 1, n):
                if D[i][t]:
                    row_add(t, i, -(D[i][t] // p))
                    dirty = dirty or D[i][t] != 0
            for j in range(t + 1, m):
                if D[t][j]:
                    col_add(t, j, -(D[t][j] // p))
                    dirty = dirty or D[t][j] != 0
            if dirty:
                best = None
                for i in range(t, n):
                    for j in range(t, m):
                        if (i == t or j == t) and D[i][j]:
                            v = abs(D[i][j])
                            if best is None or v < best[0]:
                                best = (v, i, j)
                _, pi, pj = best
                row_swap(t, pi)
                col_swap(t, pj)
                continue
            bad = next(((i, j) for i in range(t + 1, n) for j in range(t + 1, m) if D[i][j] % p), None)
            if bad is None:
                break
            row_add(bad[0], t, 1)
        if D[t][t] < 0:
            row_neg(t)
        t += 1

    return SnfResult(
        U=IntMatrix.from_rows(Linv, cols=n),
        D=IntMatrix.from_rows(D, cols=m),
        V=IntMatrix.from_rows(Rinv, cols=m),
        U_inv=IntMatrix.from_rows(L, cols=n),
        V_inv=IntMatrix.from_rows(R, cols=m),
    )
