"""Colorings of exactly large sets and fixed-arity tuples.

Every coloring here is a pure total function behind one of two small
wrappers: FiniteColoring for a fixed arity, ExactColoring for exactly
large sets.  Both memoize evaluations (purity makes that invisible) and
both may be shared freely between threads once built.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Optional

from .decoders import _ApproxJumpOracle, _halts
from .largesets import ExactlyLargeSet, FinSet, enumerate_exactly_large
from .machines import (
    OracleSet,
    encode_list,
    jump_halt0,
    run_bounded,
    staged_jump,
)


class FiniteColoring:
    """A deterministic coloring of strictly increasing fixed-size tuples."""

    def __init__(self, dimension: int, fn: Callable[[tuple], int],
                 palette: int = 2, name: str = ""):
        if dimension < 1:
            raise ValueError("dimension must be at least 1")
        self.dimension = dimension
        self.palette = palette
        self.name = name
        self._fn = fn
        self._memo: dict[tuple, int] = {}

    def __call__(self, tpl) -> int:
        tpl = tuple(tpl)
        hit = self._memo.get(tpl)
        if hit is not None:
            return hit
        if len(tpl) != self.dimension:
            raise ValueError(f"expected {self.dimension}-tuple, got {tpl}")
        if any(a >= b for a, b in zip(tpl, tpl[1:])):
            raise ValueError(f"tuple must increase: {tpl}")
        v = self._fn(tpl)
        if not 0 <= v < self.palette:
            raise ValueError(f"color {v} outside palette of {self.palette}")
        self._memo[tpl] = v
        return v

    def __repr__(self) -> str:
        return f"FiniteColoring(dim={self.dimension}, name={self.name!r})"


class ExactColoring:
    """A deterministic coloring of exactly large sets."""

    def __init__(self, fn: Callable[[ExactlyLargeSet], int],
                 palette: Optional[int] = 2, name: str = ""):
        self.palette = palette
        self.name = name
        self._fn = fn
        self._memo: dict[tuple, int] = {}

    def __call__(self, s) -> int:
        if not isinstance(s, ExactlyLargeSet):
            s = ExactlyLargeSet(s if isinstance(s, FinSet) else FinSet(s))
        hit = self._memo.get(s.elems)
        if hit is not None:
            return hit
        v = self._fn(s)
        if v < 0 or (self.palette is not None and v >= self.palette):
            raise ValueError(f"color {v} outside palette of {self.palette}")
        self._check(s, v)
        self._memo[s.elems] = v
        return v

    def _check(self, s: ExactlyLargeSet, v: int) -> None:
        pass

    def __repr__(self) -> str:
        return f"{type(self).__name__}(name={self.name!r})"


class RegressiveColoring(ExactColoring):
    """An exact coloring with color below the minimum (0 at minimum 0)."""

    def __init__(self, fn, name: str = ""):
        super().__init__(fn, palette=None, name=name)

    def _check(self, s: ExactlyLargeSet, v: int) -> None:
        m = s.min()
        if m == 0:
            if v != 0:
                raise ValueError(f"regressive coloring must be 0 at minimum 0, got {v}")
        elif v >= m:
            raise ValueError(f"regressive violation: color {v} with minimum {m}")


# ---------------------------------------------------------------------------
# embedding fixed-arity colorings into exact colorings

@dataclass(frozen=True)
class Embedding:
    """An exact coloring built from a fixed-arity one, plus the witness
    transform that recovers a finite-coloring witness."""

    coloring: ExactColoring
    dimension: int

    def to_finite_witness(self, H: FinSet) -> FinSet:
        return H.above(self.dimension - 1)


def embed_finite(c: FiniteColoring) -> Embedding:
    """Lift an n-ary coloring to exactly large sets.

    The lifted coloring reads the first n elements of the set when the
    minimum admits them, 0 otherwise; homogeneous sets for the lift,
    intersected with [n, oo), are homogeneous for the original.
    """
    n = c.dimension

    def fn(s: ExactlyLargeSet) -> int:
        elems = s.elems
        if elems[0] >= n:
            return c(elems[:n])
        return 0

    return Embedding(
        ExactColoring(fn, palette=c.palette, name=f"embed[{c.name or n}]"), n
    )


# ---------------------------------------------------------------------------
# oracle-uniform colorings and the diagonal tower

class OracleColoringFamily:
    """A fixed-arity coloring uniform in its oracle.

    ``eval_at(oracle, tpl, bound)`` colors a tuple relative to an oracle;
    bound, when given, caps any machine runs inside.  ``at`` freezes the
    oracle and returns an ordinary FiniteColoring.
    """

    def __init__(self, dimension: int, eval_at, name: str = ""):
        self.dimension = dimension
        self.name = name
        self._eval_at = eval_at

    def eval_at(self, oracle: OracleSet, tpl: tuple, bound: Optional[int] = None) -> int:
        return self._eval_at(oracle, tuple(tpl), bound)

    def at(self, oracle: OracleSet, bound: Optional[int] = None) -> FiniteColoring:
        return FiniteColoring(
            self.dimension,
            lambda tpl: self.eval_at(oracle, tpl, bound),
            name=f"{self.name}@oracle",
        )


def program_family(e: int, dimension: int, default_bound: int = 10 ** 6) -> OracleColoringFamily:
    """The coloring computed by program e against a pluggable oracle.

    The tuple is passed as its sequence code in register 0; a run that
    exceeds the bound colors 0.
    """

    def eval_at(oracle, tpl, bound):
        b = bound if bound is not None else default_bound
        out = run_bounded(e, oracle, encode_list(tpl), b)
        return out.value if out.halted and out.value in (0, 1) else 0

    return OracleColoringFamily(dimension, eval_at, name=f"prog[{e}]")


def disagreement_base_family() -> OracleColoringFamily:
    """Default pluggable base: colors (x, y) by whether the pair-coded
    jump approximations at stages x and y disagree below x.  Genuinely
    two-valued, since a code below x may first enter the jump after
    stage x."""
    from .machines import jump_codes_below

    def eval_at(oracle, tpl, bound):
        x, y = tpl
        if x <= 0:
            return 0
        return 1 if jump_codes_below(oracle, x, x) != jump_codes_below(oracle, y, x) else 0

    return OracleColoringFamily(2, eval_at, name="disagreement-base")


def tower_step_family(family: OracleColoringFamily) -> OracleColoringFamily:
    """One tower level up: the new coloring reads its last coordinate as
    a stage, replaces the oracle by that stage's cutoff jump, and runs
    the previous level under the stage bound.  Stage 0 colors 0."""

    def eval_at(oracle, tpl, bound):
        *xs, s = tpl
        if s <= 0:
            return 0
        return family.eval_at(jump_halt0(oracle, s), tuple(xs), s)

    return OracleColoringFamily(
        family.dimension + 1, eval_at, name=f"step[{family.name}]"
    )


def tower_step(family: OracleColoringFamily, oracle: OracleSet) -> FiniteColoring:
    """The next tower level, frozen at an oracle."""
    return tower_step_family(family).at(oracle)


def jump_tower(base: OracleColoringFamily, oracle: OracleSet):
    """Lazy level access: level k is the base stepped k times, frozen at
    the oracle.  Level 0 must be 2-dimensional."""
    if base.dimension != 2:
        raise ValueError("tower base must be 2-dimensional")
    families = [base]

    def level(k: int) -> FiniteColoring:
        while len(families) <= k:
            families.append(tower_step_family(families[-1]))
        return families[k].at(oracle)

    return level


def diagonal_coloring(tower) -> ExactColoring:
    """Diagonalize a tower of fixed-arity colorings over exactly large
    sets: a set with minimum m >= 2 is colored by level m-1 applied to
    its full tuple; minimum below 2 colors 0."""
    if not callable(tower):
        seq = list(tower)
        tower = lambda k: seq[k]  # noqa: E731

    def fn(s: ExactlyLargeSet) -> int:
        m = s.min()
        if m < 2:
            return 0
        level = tower(m - 1)
        if level.dimension != len(s.elems):
            raise ValueError(
                f"tower level {m - 1} has dimension {level.dimension}, "
                f"need {len(s.elems)}"
            )
        return level(s.elems)

    return ExactColoring(fn, palette=2, name="diagonal")


# ---------------------------------------------------------------------------
# the stage-comparison family

def c2_coloring(A: OracleSet, direction: str = "capture") -> FiniteColoring:
    """Three-place stage comparison: color 1 when halting behavior below
    the guard is consistent between the two stages.

    literal mode checks "halts by the earlier stage implies halts by the
    later" for every index up to the guard; under monotone step bounds
    that implication always holds, so literal mode is constant 1 (kept
    for fidelity experiments).  capture mode, the default, checks the
    reverse implication, which is what makes the matching decoder read
    jump membership off homogeneous sets.
    """
    if direction not in ("capture", "literal"):
        raise ValueError(f"unknown direction: {direction!r}")

    def fn(tpl):
        k, y, z = tpl
        for e in range(k + 1):
            hy = _halts(e, A, y)
            hz = _halts(e, A, z)
            if direction == "literal":
                if hy and not hz:
                    return 0
            else:
                if hz and not hy:
                    return 0
        return 1

    return FiniteColoring(3, fn, name=f"c2[{direction}]")


def cn_from(prev: FiniteColoring, A: OracleSet) -> FiniteColoring:
    """One level up from a given stage-comparison coloring: the new
    color is 1 iff the tuple is homogeneous for the previous level and
    the capture implication holds between the second and third entries
    relative to the decoder-approximated oracle built from the tail."""
    dim = prev.dimension + 1

    def fn(tpl):
        colors = {prev(sub) for sub in combinations(tpl, prev.dimension)}
        if len(colors) > 1:
            return 0
        a1, a2, a3 = tpl[0], tpl[1], tpl[2]
        # The approximating oracle runs the decoder one level below the
        # coloring being built, on the tail tuple.
        y = _ApproxJumpOracle(prev.dimension - 1, tpl[1:], A)
        for e in range(a1 + 1):
            if _halts(e, y, a3) and not _halts(e, y, a2):
                return 0
        return 1

    return FiniteColoring(dim, fn, name=f"c{dim - 1}")


def cn_coloring(n: int, A: OracleSet) -> FiniteColoring:
    """The level-n stage-comparison coloring ((n+1)-tuples), built by
    recursion grounded at level 2.  Only decoder approximations of the
    iterated jumps are consulted, never the jumps themselves."""
    if n < 2:
        raise ValueError("levels start at 2")
    c = c2_coloring(A, "capture")
    for _ in range(n - 2):
        c = cn_from(c, A)
    return c


def comega_coloring(A: OracleSet) -> ExactColoring:
    """Dispatch an exactly large set with minimum m >= 2 to the level-m
    coloring on its full tuple; minimum below 2 colors 0."""
    levels: dict[int, FiniteColoring] = {}

    def fn(s: ExactlyLargeSet) -> int:
        m = s.min()
        if m < 2:
            return 0
        c = levels.get(m)
        if c is None:
            c = cn_coloring(m, A)
            levels[m] = c
        return c(s.elems)

    return ExactColoring(fn, palette=2, name="comega")


# ---------------------------------------------------------------------------
# disagreement-hardness colorings

def _least_disagreement_level(X: OracleSet, elems: tuple, programs) -> int:
    """Least level i in [1, n] at which the two staged jumps read off an
    exactly large tuple with even minimum 2n disagree below the tuple's
    bounding entry; 0 when they all agree or the minimum is odd."""
    a0 = elems[0]
    if a0 % 2 or a0 == 0:
        return 0
    n = a0 // 2
    for i in range(1, n + 1):
        bound = elems[n - i]
        first = staged_jump(X, tuple(reversed(elems[n - i + 1: n + 1])), programs)
        second = staged_jump(X, tuple(reversed(elems[2 * n - i + 1: 2 * n + 1])), programs)
        if first.below(bound) != second.below(bound):
            return i
    return 0


def dh_coloring(X: OracleSet, programs=None) -> ExactColoring:
    """The flagship hardness coloring: color 1 iff some level's staged
    jump approximations, read at stages taken from the middle and the
    top of the tuple, disagree below the tuple's bounding entry.  Odd
    minima color 0 (the value is irrelevant there)."""
    progs = None if programs is None else tuple(sorted(set(programs)))

    def fn(s: ExactlyLargeSet) -> int:
        return 1 if _least_disagreement_level(X, s.elems, progs) else 0

    return ExactColoring(fn, palette=2, name="dh")


def km_dh_coloring(X: OracleSet, programs=None) -> RegressiveColoring:
    """Regressive variant: the least disagreeing level itself (0 when
    none).  Regressive because the level is at most half the minimum."""
    progs = None if programs is None else tuple(sorted(set(programs)))

    def fn(s: ExactlyLargeSet) -> int:
        return _least_disagreement_level(X, s.elems, progs)

    return RegressiveColoring(fn, name="km-dh")


# ---------------------------------------------------------------------------
# regressive <-> two-color reductions

@dataclass(frozen=True)
class KmRtReduction:
    """Two-coloring derived from a regressive coloring, plus the witness
    transform (shift every element down by one)."""

    coloring: ExactColoring

    @staticmethod
    def transform(H: FinSet) -> FinSet:
        return FinSet([x - 1 for x in H.elems])


def km_to_rt(c: ExactColoring) -> KmRtReduction:
    """Two-color an exactly large set by whether every exactly large
    tuple drawn from its shifted-down elements (keeping the shifted
    minimum) gets one color under the regressive coloring.

    A homogeneous set for the result, shifted down, is min-homogeneous
    for the input.  The singleton {0} is fixed to color 0.
    """

    def fn(s: ExactlyLargeSet) -> int:
        elems = s.elems
        if elems[0] == 0:
            return 0
        shifted = [x - 1 for x in elems]
        head = shifted[0]
        seen = set()
        for combo in combinations(shifted[1:], head):
            seen.add(c(FinSet((head,) + combo)))
            if len(seen) > 1:
                return 0
        return 1

    return KmRtReduction(ExactColoring(fn, palette=2, name=f"km-to-rt[{c.name}]"))


def _min_color_map(H: FinSet, c: ExactColoring):
    """Induced per-minimum colors over exactly large subsets of H.
    Raises on a min-homogeneity violation, reporting the offending pair."""
    colors: dict[int, tuple] = {}
    for s in enumerate_exactly_large(H):
        m = s.min()
        v = c(s)
        prev = colors.get(m)
        if prev is None:
            colors[m] = (v, s)
        elif prev[0] != v:
            raise ValueError(
                f"not min-homogeneous: {prev[1]} has color {prev[0]} "
                f"but {s} has color {v}"
            )
    return {m: v for m, (v, _) in colors.items()}


def rt_via_km(c: ExactColoring, H: FinSet) -> FinSet:
    """Thin a min-homogeneous set down to a homogeneous one.

    Each element's induced color is the color of exactly large subsets
    of H with that minimum; the pigeonhole keeps the larger induced
    class (ties to color 0) together with elements that induce nothing,
    which cannot carry a counterexample.  Rejects H that is not
    min-homogeneous.
    """
    induced = _min_color_map(H, c)
    count0 = sum(1 for v in induced.values() if v == 0)
    count1 = len(induced) - count0
    chosen = 0 if count0 >= count1 else 1
    kept = [x for x in H.elems if induced.get(x, chosen) == chosen]
    return FinSet(kept)
