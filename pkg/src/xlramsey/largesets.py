"""Exactly large finite sets.

A finite set of naturals is *exactly large* when its cardinality is one
more than its minimum.  Every coloring in this package takes such sets
as input, so this module fixes the shared conventions: sets are strictly
increasing tuples of naturals, enumeration is lexicographic, and the
text form is ``{a,b,c}``.

The predicate is kept literal: ``{0}`` counts as exactly large (one
element, minimum zero).  Constructions that need their universe to start
at 1 or 2 restrict it themselves.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from itertools import combinations
from typing import Iterable, Iterator


class FinSet:
    """A strictly increasing tuple of naturals.

    Instances are immutable by convention and hashable; all higher-level
    code treats them as values.
    """

    __slots__ = ("elems", "_hash")

    def __init__(self, elems: Iterable[int] = ()):
        elems = tuple(elems)
        last = -1
        for v in elems:
            if not isinstance(v, int) or isinstance(v, bool):
                raise ValueError(f"not a natural number: {v!r}")
            if v < 0:
                raise ValueError(f"negative element: {v}")
            if v <= last:
                raise ValueError("elements must be strictly increasing")
            last = v
        self.elems = elems
        self._hash = hash(elems)

    @classmethod
    def of(cls, *elems: int) -> "FinSet":
        return cls(elems)

    @classmethod
    def from_iterable(cls, it: Iterable[int]) -> "FinSet":
        """Build from any iterable, sorting and deduplicating."""
        return cls(sorted(set(it)))

    @classmethod
    def parse(cls, text: str) -> "FinSet":
        """Parse ``{a,b,c}`` with optional whitespace."""
        t = text.strip()
        if not (t.startswith("{") and t.endswith("}")):
            raise ValueError(f"bad set literal: {text!r}")
        body = t[1:-1].strip()
        if not body:
            return cls(())
        return cls(int(p.strip()) for p in body.split(","))

    def render(self) -> str:
        return "{" + ",".join(str(v) for v in self.elems) + "}"

    def min(self) -> int:
        if not self.elems:
            raise ValueError("empty set has no minimum")
        return self.elems[0]

    def max(self) -> int:
        if not self.elems:
            raise ValueError("empty set has no maximum")
        return self.elems[-1]

    def card(self) -> int:
        return len(self.elems)

    def above(self, x: int) -> "FinSet":
        """Elements strictly greater than x."""
        return FinSet(self.elems[bisect_left(self.elems, x + 1):])

    def below(self, bound: int) -> "FinSet":
        """Elements strictly less than bound."""
        return FinSet(self.elems[:bisect_left(self.elems, bound)])

    def union(self, other: "FinSet") -> "FinSet":
        return FinSet.from_iterable(self.elems + other.elems)

    def issubset(self, other: "FinSet") -> bool:
        pool = set(other.elems)
        return all(v in pool for v in self.elems)

    def __contains__(self, x: int) -> bool:
        i = bisect_left(self.elems, x)
        return i < len(self.elems) and self.elems[i] == x

    def __iter__(self):
        return iter(self.elems)

    def __len__(self) -> int:
        return len(self.elems)

    def __bool__(self) -> bool:
        return bool(self.elems)

    def __eq__(self, other) -> bool:
        return isinstance(other, FinSet) and self.elems == other.elems

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"FinSet({self.elems!r})"

    def __str__(self) -> str:
        return self.render()


class ExactlyLargeSet:
    """A FinSet whose cardinality equals its minimum plus one."""

    __slots__ = ("fin",)

    def __init__(self, fin):
        if not isinstance(fin, FinSet):
            fin = FinSet(fin)
        if not fin.elems or len(fin.elems) != fin.elems[0] + 1:
            raise ValueError(f"not exactly large: {fin.render()}")
        self.fin = fin

    @property
    def elems(self) -> tuple:
        return self.fin.elems

    def min(self) -> int:
        return self.fin.elems[0]

    def card(self) -> int:
        return len(self.fin.elems)

    def render(self) -> str:
        return self.fin.render()

    def __iter__(self):
        return iter(self.fin.elems)

    def __len__(self) -> int:
        return len(self.fin.elems)

    def __eq__(self, other) -> bool:
        return isinstance(other, ExactlyLargeSet) and self.fin == other.fin

    def __hash__(self) -> int:
        return hash(("!", self.fin.elems))

    def __repr__(self) -> str:
        return f"ExactlyLargeSet({self.fin.elems!r})"

    def __str__(self) -> str:
        return self.render()


def is_exactly_large(s) -> bool:
    """True iff s is nonempty and card(s) = min(s) + 1."""
    if isinstance(s, ExactlyLargeSet):
        return True
    elems = s.elems if isinstance(s, FinSet) else FinSet(s).elems
    return bool(elems) and len(elems) == elems[0] + 1


def min_decompose(s) -> tuple[int, FinSet]:
    """Split an exactly large set into (minimum, rest).

    The rest has exactly ``minimum`` elements, all above it.  Rejects
    input that is not exactly large.
    """
    if not is_exactly_large(s):
        raise ValueError(f"not exactly large: {s}")
    elems = s.elems
    return elems[0], FinSet(elems[1:])


def enumerate_exactly_large(universe: FinSet) -> Iterator[ExactlyLargeSet]:
    """Yield every exactly large subset of the universe, lexicographically.

    Lazy by design: exactly large families explode combinatorially, so
    verifiers stream this rather than materializing it.
    """
    elems = universe.elems if isinstance(universe, FinSet) else tuple(universe)
    for i, m in enumerate(elems):
        rest = elems[i + 1:]
        if m > len(rest):
            continue
        for combo in combinations(rest, m):
            yield ExactlyLargeSet(FinSet((m,) + combo))


def count_exactly_large(universe: FinSet) -> int:
    """Number of exactly large subsets, by the binomial sum."""
    elems = universe.elems if isinstance(universe, FinSet) else tuple(universe)
    total = 0
    for i, m in enumerate(elems):
        total += math.comb(len(elems) - i - 1, m)
    return total
