"""Weight multisets of a torus representation.

Weights are integer (occasionally rational, after restriction) vectors known
only up to sign; multiplicities always count.  ``‖P‖`` in the docstrings is
the number of nonzero vectors counted with multiplicity.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import exactlin

Vector = tuple


def canonical_sign(v: Sequence) -> Vector:
    """Flip ``v`` so that its first nonzero coordinate is positive."""
    v = tuple(v)
    for x in v:
        if x:
            return v if x > 0 else tuple(-y for y in v)
    return v


def _clean(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    return x


@dataclass(frozen=True)
class WeightMultiset:
    m: int
    entries: tuple[tuple[Vector, int], ...]

    def __post_init__(self):
        for w, k in self.entries:
            if len(w) != self.m:
                raise ValueError(f"weight {w} has wrong dimension (expected {self.m})")
            if k < 1:
                raise ValueError("multiplicities must be positive")

    def vectors(self) -> list[Vector]:
        """Expanded list, one entry per copy."""
        return [w for w, k in self.entries for _ in range(k)]

    def nonzero(self) -> list[Vector]:
        return [w for w in self.vectors() if any(w)]

    def norm(self) -> int:
        """‖P‖: nonzero vectors counted with multiplicity."""
        return sum(k for w, k in self.entries if any(w))

    def zero_multiplicity(self) -> int:
        return sum(k for w, k in self.entries if not any(w))

    def __len__(self) -> int:
        return sum(k for _, k in self.entries)

    def __iter__(self):
        return iter(self.entries)


def sign_normalize(vectors: Iterable, m: int | None = None) -> WeightMultiset:
    """Merge raw vectors (or ``(vector, multiplicity)`` pairs) up to sign."""
    counts: Counter = Counter()
    for item in vectors:
        if isinstance(item, tuple) and len(item) == 2 and isinstance(item[0], (tuple, list)):
            v, k = item
        else:
            v, k = item, 1
        v = tuple(_clean(Fraction(x)) for x in v)
        if m is None:
            m = len(v)
        elif len(v) != m:
            raise ValueError(f"dimension mismatch: {v} is not in dimension {m}")
        counts[canonical_sign(v)] += k
    if m is None:
        raise ValueError("cannot infer ambient rank of an empty multiset")
    if m < 0:
        raise ValueError("ambient rank must be nonnegative")
    return WeightMultiset(m, tuple(sorted(counts.items())))


def span_rank(P: WeightMultiset | Sequence[Sequence]) -> int:
    vecs = P.nonzero() if isinstance(P, WeightMultiset) else [v for v in P if any(v)]
    return exactlin.rank(vecs) if vecs else 0


def is_q_stable(P: WeightMultiset, q: int) -> bool:
    """Whether removing any q vectors (with multiplicity) keeps the span.

    Removing fewer vectors can only keep more of the span, so only removals of
    exactly ``min(q, ‖P‖)`` nonzero vectors are checked.
    """
    if q < 1:
        raise ValueError("q must be positive")
    nz = [(w, k) for w, k in P.entries if any(w)]
    total = sum(k for _, k in nz)
    full = span_rank(P)
    if full == 0:
        return True
    if total <= q:
        return False
    for removal in _removals([k for _, k in nz], q):
        rest = [w for (w, k), r in zip(nz, removal) for _ in range(k - r)]
        if exactlin.rank(rest) < full:
            return False
    return True


def _removals(mults: list[int], q: int):
    """All ways to remove exactly q items from a multiset with given counts."""
    def rec(i, left):
        if i == len(mults):
            if left == 0:
                yield ()
            return
        for r in range(min(mults[i], left) + 1):
            for tail in rec(i + 1, left - r):
                yield (r,) + tail
    yield from rec(0, q)


def stability_level(P: WeightMultiset, q_max: int = 4) -> int:
    """Largest q <= q_max for which P is q-stable (0 if not even 1-stable)."""
    level = 0
    for q in range(1, q_max + 1):
        if not is_q_stable(P, q):
            break
        level = q
    return level


@dataclass(frozen=True)
class Decomposition:
    components: tuple[WeightMultiset, ...]
    zero_multiplicity: int


def component_indices(vectors: Sequence[Sequence]) -> list[list[int]]:
    """Indices of the nonzero vectors grouped into indecomposable components.

    Two vectors lie in the same component iff some circuit contains both; the
    fundamental circuits of one greedy basis already connect every component.
    """
    idx = [i for i, v in enumerate(vectors) if any(v)]
    parent = {i: i for i in idx}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    basis: list[int] = []
    for i in idx:
        cand = basis + [i]
        mat = [vectors[j] for j in cand]
        if exactlin.rank(mat) == len(cand):
            basis.append(i)
            continue
        # express vectors[i] in the current basis; nonzero coefficients form the circuit
        cols = [[vectors[j][r] for j in basis] for r in range(len(vectors[i]))]
        coeffs = exactlin.solve_rational(cols, list(vectors[i]))
        for j, c in zip(basis, coeffs):
            if c:
                parent[find(j)] = find(i)
    groups: dict[int, list[int]] = {}
    for i in idx:
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: g[0])


def decompose(P: WeightMultiset) -> Decomposition:
    vecs = P.vectors()
    comps = []
    for group in component_indices(vecs):
        comps.append(sign_normalize([vecs[i] for i in group], P.m))
    comps.sort(key=lambda c: c.entries)
    return Decomposition(tuple(comps), P.zero_multiplicity())


def restrict(P: WeightMultiset, basis: Sequence[Sequence]) -> WeightMultiset:
    """Restrict each weight (a functional) to ``span(basis)``.

    The result is written in the dual of the given basis: the weight ``l``
    becomes ``(l(h_1), ..., l(h_r))``.
    """
    basis = [tuple(Fraction(x) for x in h) for h in basis]
    if basis and exactlin.rank(basis) != len(basis):
        raise ValueError("restriction basis is linearly dependent")
    out = []
    for w, k in P.entries:
        img = tuple(sum(Fraction(a) * b for a, b in zip(w, h)) for h in basis)
        out.append((img, k))
    return sign_normalize(out, len(basis))


def select_xi(P: WeightMultiset, xi: Sequence) -> WeightMultiset:
    """Sub-multiset of weights that do not vanish on ``xi``."""
    keep = [(w, k) for w, k in P.entries if sum(Fraction(a) * b for a, b in zip(w, xi)) != 0]
    return WeightMultiset(P.m, tuple(keep))


def image(P: WeightMultiset, M: Sequence[Sequence]) -> WeightMultiset:
    """Image of P under the linear map with matrix M (rows x m)."""
    out = [(tuple(exactlin.matvec(M, w)), k) for w, k in P.entries]
    return sign_normalize(out, len(M))
