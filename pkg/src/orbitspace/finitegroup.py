"""Finite groups given by hashable elements and a multiplication callback.

Elements are enumerated once; afterwards every element is represented by its
left-regular permutation so products, inverses and subgroup closures are
integer lookups.
"""

from __future__ import annotations

from collections import deque
from typing import Callable, Hashable, Iterable, Sequence


class ClosureBoundExceeded(RuntimeError):
    pass


class FiniteGroup:
    def __init__(self, generators: Sequence, mul: Callable, key: Callable[[object], Hashable], identity,
                 bound: int | None = None):
        self.mul = mul
        self.key = key
        self.generators = list(generators)
        self.elements = [identity]
        self.index = {key(identity): 0}
        self._parent: list = [None]
        lgen = [dict() for _ in self.generators]
        queue = deque([0])
        while queue:
            x = queue.popleft()
            for s_i, s in enumerate(self.generators):
                y = mul(s, self.elements[x])
                k = key(y)
                j = self.index.get(k)
                if j is None:
                    j = len(self.elements)
                    if bound is not None and j >= bound:
                        raise ClosureBoundExceeded(f"more than {bound} elements")
                    self.index[k] = j
                    self.elements.append(y)
                    self._parent.append((s_i, x))
                    queue.append(j)
                lgen[s_i][x] = j
        n = len(self.elements)
        self._lgen = [tuple(d[i] for i in range(n)) for d in lgen]
        self._perms: list[tuple[int, ...] | None] = [None] * n
        self._perms[0] = tuple(range(n))

    @classmethod
    def from_elements(cls, elements: Iterable, mul, key, identity, bound: int | None = None) -> "FiniteGroup":
        """Group generated by ``elements``, using a greedily thinned generating set."""
        gens: list = []
        seen = {key(identity)}
        group = None
        for e in elements:
            if key(e) in seen:
                continue
            gens.append(e)
            group = cls(gens, mul, key, identity, bound)
            seen = set(group.index)
        return group if group is not None else cls([], mul, key, identity, bound)

    def __len__(self) -> int:
        return len(self.elements)

    def perm(self, i: int) -> tuple[int, ...]:
        p = self._perms[i]
        if p is None:
            s_i, x = self._parent[i]
            px = self.perm(x)
            ls = self._lgen[s_i]
            p = tuple(ls[z] for z in px)
            self._perms[i] = p
        return p

    def mul_idx(self, i: int, j: int) -> int:
        return self.perm(i)[j]

    def inv_idx(self, i: int) -> int:
        return self.perm(i).index(0)

    def idx(self, element) -> int:
        return self.index[self.key(element)]

    def order_of(self, i: int) -> int:
        k, x = 1, i
        while x != 0:
            x = self.mul_idx(i, x)
            k += 1
        return k

    def closure(self, gens: Iterable[int]) -> frozenset[int]:
        gens = [g for g in set(gens) if g != 0]
        seen = {0}
        queue = deque([0])
        while queue:
            x = queue.popleft()
            for g in gens:
                y = self.mul_idx(g, x)
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return frozenset(seen)

    def commutator_subgroup(self, H: Iterable[int] | None = None) -> frozenset[int]:
        H = list(range(len(self))) if H is None else list(H)
        comms = set()
        for a in H:
            ai = self.inv_idx(a)
            for b in H:
                bi = self.inv_idx(b)
                comms.add(self.mul_idx(self.mul_idx(a, b), self.mul_idx(ai, bi)))
        return self.closure(comms)

    def product_set(self, A: Iterable[int], B: Iterable[int]) -> frozenset[int]:
        B = list(B)
        return frozenset(self.mul_idx(a, b) for a in A for b in B)

    def commute(self, a: int, b: int) -> bool:
        return self.mul_idx(a, b) == self.mul_idx(b, a)
