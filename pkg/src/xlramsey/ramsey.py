"""Search, extraction, and verification for homogeneous sets.

The verifiers here are the ground truth for every other module: they
are pure enumerations with no shared search state, so a Witness marked
verified has actually been re-checked against them.  All infinitary
questions (does a branch extend forever, does a color class recur) are
answered by budgeted search with the budget recorded in the witness, so
every run is reproducible and every approximation visible.
"""

from __future__ import annotations

import json
from bisect import bisect_right
from dataclasses import dataclass, field
from itertools import combinations
from typing import NamedTuple, Optional

from .colorings import ExactColoring, FiniteColoring
from .largesets import ExactlyLargeSet, FinSet, enumerate_exactly_large


@dataclass(frozen=True)
class SearchBudget:
    """Caps the finite searches standing in for infinitary questions."""

    max_universe: int = 128
    max_candidates: int = 1_000_000
    stage_cutoffs: tuple[int, ...] = ()

    def __post_init__(self):
        if self.max_universe <= 0 or self.max_candidates <= 0:
            raise ValueError("budget bounds must be positive")
        if any(c <= 0 for c in self.stage_cutoffs):
            raise ValueError("stage cutoffs must be positive")


DEFAULT_BUDGET = SearchBudget()


@dataclass
class Witness:
    """A found set together with its color data and verification state.

    ``verified`` is only set after the matching verifier has passed.
    """

    set: FinSet
    kind: str  # "homogeneous" | "min-homogeneous" | "chain"
    color: Optional[int] = None
    per_min_colors: Optional[dict[int, int]] = None
    verified: bool = False
    budget_used: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "schema": "xlramsey.witness/1",
            "kind": self.kind,
            "set": list(self.set.elems),
            "color": self.color,
            "per_min": (
                None
                if self.per_min_colors is None
                else {str(k): v for k, v in sorted(self.per_min_colors.items())}
            ),
            "verified": self.verified,
            "budget": self.budget_used,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Witness":
        per_min = d.get("per_min")
        return cls(
            set=FinSet(d["set"]),
            kind=d["kind"],
            color=d.get("color"),
            per_min_colors=(
                None if per_min is None else {int(k): v for k, v in per_min.items()}
            ),
            verified=bool(d.get("verified")),
            budget_used=d.get("budget", {}),
        )


def save_witness(w: Witness, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(w.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_witness(path) -> Witness:
    with open(path, "r", encoding="utf-8") as fh:
        return Witness.from_dict(json.load(fh))


class SearchResult(NamedTuple):
    """Outcome of an exhaustive search; a None witness together with
    exhaustive=True is a certificate that the whole space was scanned."""

    witness: Optional[Witness]
    examined: int
    exhaustive: bool


# ---------------------------------------------------------------------------
# verifiers (the independent oracles)

@dataclass
class VerifyReport:
    passed: bool
    kind: str
    checked: int
    color: Optional[int] = None
    per_min: Optional[dict[int, int]] = None
    counterexample: Optional[tuple] = None

    def to_dict(self) -> dict:
        ce = None
        if self.counterexample:
            a, ca, b, cb = self.counterexample
            ce = {"set_a": list(a), "color_a": ca, "set_b": list(b), "color_b": cb}
        return {
            "passed": self.passed,
            "kind": self.kind,
            "checked": self.checked,
            "color": self.color,
            "per_min": (
                None if self.per_min is None
                else {str(k): v for k, v in sorted(self.per_min.items())}
            ),
            "counterexample": ce,
        }


def verify_exact_homogeneous(H: FinSet, c: ExactColoring) -> VerifyReport:
    """Stream every exactly large subset of H and demand one color.
    A set with no exactly large subsets passes vacuously."""
    first = None
    checked = 0
    for s in enumerate_exactly_large(H):
        v = c(s)
        checked += 1
        if first is None:
            first = (s.elems, v)
        elif v != first[1]:
            return VerifyReport(
                False, "homogeneous", checked,
                counterexample=(first[0], first[1], s.elems, v),
            )
    return VerifyReport(
        True, "homogeneous", checked, color=None if first is None else first[1]
    )


def verify_min_homogeneous(H: FinSet, c: ExactColoring) -> VerifyReport:
    """Stream every exactly large subset of H and demand that color
    depend only on the minimum."""
    seen: dict[int, tuple] = {}
    checked = 0
    for s in enumerate_exactly_large(H):
        v = c(s)
        checked += 1
        prev = seen.get(s.min())
        if prev is None:
            seen[s.min()] = (v, s.elems)
        elif prev[0] != v:
            return VerifyReport(
                False, "min-homogeneous", checked,
                counterexample=(prev[1], prev[0], s.elems, v),
            )
    return VerifyReport(
        True, "min-homogeneous", checked,
        per_min={m: v for m, (v, _) in seen.items()},
    )


# ---------------------------------------------------------------------------
# brute-force finite Ramsey

def brute_homogeneous(c: FiniteColoring, universe: FinSet, k: int) -> SearchResult:
    """Exhaustive scan for a size-k subset monochromatic under c.

    Returns the first witness in lexicographic order, or a None witness
    with an exhaustiveness certificate.
    """
    if k < c.dimension:
        raise ValueError(f"k={k} below coloring dimension {c.dimension}")
    examined = 0
    for cand in combinations(universe.elems, k):
        examined += 1
        color = None
        ok = True
        for sub in combinations(cand, c.dimension):
            v = c(sub)
            if color is None:
                color = v
            elif v != color:
                ok = False
                break
        if ok:
            w = Witness(
                FinSet(cand), "homogeneous", color=color,
                verified=True,
                budget_used={"examined": examined, "k": k},
            )
            return SearchResult(w, examined, False)
    return SearchResult(None, examined, True)


def exact_homog_search(c: ExactColoring, universe: FinSet, k: int) -> SearchResult:
    """Exhaustive scan for a size-k subset all of whose exactly large
    subsets get one color under c."""
    examined = 0
    for cand in combinations(universe.elems, k):
        examined += 1
        report = verify_exact_homogeneous(FinSet(cand), c)
        if report.passed:
            w = Witness(
                FinSet(cand), "homogeneous", color=report.color,
                verified=True,
                budget_used={"examined": examined, "k": k},
            )
            return SearchResult(w, examined, False)
    return SearchResult(None, examined, True)


def min_homog_search(c: ExactColoring, universe: FinSet, k: int) -> SearchResult:
    """Exhaustive scan for a size-k subset whose exactly large subsets
    get colors depending only on their minimum."""
    if k < 2:
        raise ValueError("k must be at least 2")
    examined = 0
    for cand in combinations(universe.elems, k):
        examined += 1
        report = verify_min_homogeneous(FinSet(cand), c)
        if report.passed:
            w = Witness(
                FinSet(cand), "min-homogeneous",
                per_min_colors=report.per_min,
                verified=True,
                budget_used={"examined": examined, "k": k},
            )
            return SearchResult(w, examined, False)
    return SearchResult(None, examined, True)


# ---------------------------------------------------------------------------
# the branching-tree extraction machinery

class ChildSet(NamedTuple):
    values: tuple[int, ...]
    complete: bool


def er_children(node, c: FiniteColoring, universe: FinSet,
                budget: SearchBudget = DEFAULT_BUDGET) -> ChildSet:
    """Children of a tree node.

    A candidate must lie above every node entry and must agree with the
    colors the node has already committed to: every tuple it finishes
    must get the same color as the tuple finished by any existing later
    entry.  Surviving candidates are grouped by their color signature
    (the colors of every way to finish a tuple from the node with the
    candidate) and the least member of each class is a child, ordered by
    value.  Nodes shorter than the signature arity have a single child,
    the least candidate.  A truncated candidate scan flags the child
    list incomplete.
    """
    node = tuple(node)
    a = c.dimension - 1
    lo = node[-1] if node else -1
    start = bisect_right(universe.elems, lo)
    candidates = universe.elems[start:]
    subsets = list(combinations(node, a)) if len(node) >= a else []
    # Committed color per subset: the color alongside the first node
    # entry above the subset (later entries agree along a valid branch).
    committed = {}
    for sub in subsets:
        i = bisect_right(node, sub[-1])
        if i < len(node):
            committed[sub] = c(sub + (node[i],))
    seen: dict[tuple, int] = {}
    complete = True
    scanned = 0
    for j in candidates:
        if scanned >= budget.max_candidates:
            complete = False
            break
        scanned += 1
        sig = []
        ok = True
        for sub in subsets:
            v = c(sub + (j,))
            want = committed.get(sub)
            if want is not None and v != want:
                ok = False
                break
            sig.append(v)
        if ok:
            key = tuple(sig)
            if key not in seen:
                seen[key] = j
    return ChildSet(tuple(sorted(seen.values())), complete)


class PathResult(NamedTuple):
    path: FinSet
    stable: bool
    expanded: int


def leftmost_path(c: FiniteColoring, universe: FinSet, length: int,
                  budget: SearchBudget = DEFAULT_BUDGET) -> PathResult:
    """The lexicographically least length-`length` branch of the tree,
    found by first-child depth-first search.

    On a finite universe this is the exact leftmost maximal branch
    (truncated to the requested length).  The stability flag is true
    when the requested length was reached and no abandoned subtree was
    cut short by the candidate budget rather than by the universe.
    """
    if length < 1:
        raise ValueError("length must be at least 1")
    truncated = False
    expanded = 0

    def extend(node: tuple) -> Optional[tuple]:
        nonlocal truncated, expanded
        if len(node) == length:
            return node
        if expanded >= budget.max_candidates:
            # Global node budget: give up on this region rather than
            # exploring an adversarial tree forever.
            truncated = True
            return None
        ch = er_children(node, c, universe, budget)
        expanded += 1
        if not ch.complete:
            truncated = True
        for j in ch.values:
            found = extend(node + (j,))
            if found is not None:
                return found
        return None

    best = extend(())
    if best is None:
        # No branch of full length: report the longest leftmost prefix.
        node: tuple = ()
        while True:
            ch = er_children(node, c, universe, budget)
            expanded += 1
            if not ch.values:
                break
            node = node + (ch.values[0],)
        return PathResult(FinSet(node), False, expanded)
    return PathResult(FinSet(best), not truncated, expanded)


def _restricted_coloring(c: FiniteColoring, path: tuple) -> FiniteColoring:
    """Treat a coloring along a branch as one dimension lower: finish
    each tuple with the next branch element above it.  Sound because the
    branch makes colors independent of the last element."""

    def fn(tpl):
        i = bisect_right(path, tpl[-1])
        return c(tpl + (path[i],))

    return FiniteColoring(c.dimension - 1, fn, palette=c.palette,
                          name=f"{c.name}|path")


def _greedy_extend(c: FiniteColoring, base: FinSet, color: Optional[int],
                   universe: FinSet, target: int) -> FinSet:
    """Grow a monochromatic set with universe elements that keep every
    tuple the same color, capped at the target size.  Each candidate is
    checked against all tuples it completes, so the result stays exactly
    as verified as the input."""
    if color is None or len(base) >= target:
        return base
    chosen = list(base.elems)
    pool = set(chosen)
    a = c.dimension
    for x in universe.elems:
        if len(chosen) >= target:
            break
        if x in pool:
            continue
        trial = sorted(chosen + [x])
        if len(trial) < a:
            ok = True
        else:
            ok = all(
                c(sub) == color
                for sub in combinations(trial, a)
                if x in sub
            )
        if ok:
            chosen = trial
            pool.add(x)
    return FinSet(chosen)


def f_a_extract(a: int, c: FiniteColoring, universe: FinSet, target: int,
                budget: SearchBudget = DEFAULT_BUDGET) -> Witness:
    """Extract a homogeneous set for an a-ary coloring by iterated
    branch restriction.

    Arity 1 is the budgeted stand-in for "does color 0 recur forever":
    the 0 class is searched first, then the 1 class, then the larger
    class as a flagged best effort.  Higher arities build the leftmost
    branch, restrict the coloring to it, and recurse.  The witness is
    re-verified internally; shortfall or a budget cut leaves it
    unverified.
    """
    if a < 1:
        raise ValueError("arity must be at least 1")
    if c.dimension != a:
        raise ValueError(f"coloring has dimension {c.dimension}, expected {a}")
    elems = universe.elems[: budget.max_universe]

    if a == 1:
        class0 = [x for x in elems if c((x,)) == 0]
        class1 = [x for x in elems if c((x,)) == 1]
        if len(class0) >= target:
            chosen, color = class0[:target], 0
        elif len(class1) >= target:
            chosen, color = class1[:target], 1
        elif len(class0) >= len(class1):
            chosen, color = class0, 0
        else:
            chosen, color = class1, 1
        return Witness(
            FinSet(chosen), "homogeneous", color=color,
            verified=len(chosen) >= target,
            budget_used={"arity": 1, "target": target, "achieved": len(chosen)},
        )

    want = min(len(elems), target + a - 1)
    pr = leftmost_path(c, FinSet(elems), want, budget) if want else PathResult(FinSet(), False, 0)
    path = pr.path.elems
    if len(path) < 2:
        return Witness(
            FinSet(path[:1]), "homogeneous", color=None, verified=False,
            budget_used={"arity": a, "target": target, "achieved": len(path[:1]),
                         "path_len": len(path), "path_stable": pr.stable},
        )
    inner = f_a_extract(
        a - 1, _restricted_coloring(c, path), FinSet(path[:-1]), target, budget
    )
    chosen = _greedy_extend(c, inner.set, inner.color, FinSet(elems), target)
    recheck = all(
        c(sub) == inner.color for sub in combinations(chosen.elems, a)
    ) if inner.color is not None else False
    stats = {
        "arity": a, "target": target, "achieved": len(chosen),
        "path_len": len(path), "path_stable": pr.stable,
        "homogeneous_recheck": recheck,
        "inner": inner.budget_used,
    }
    return Witness(
        chosen, "homogeneous", color=inner.color,
        verified=recheck and len(chosen) >= target,
        budget_used=stats,
    )


# ---------------------------------------------------------------------------
# the iterated chain construction

def _stage_coloring(c: ExactColoring, a: int) -> FiniteColoring:
    def fn(tpl):
        return c(ExactlyLargeSet(FinSet((a,) + tpl)))

    return FiniteColoring(a, fn, palette=c.palette or 2, name=f"{c.name}@{a}")


def iterate_rtomega(c: ExactColoring, universe: FinSet,
                    budget: SearchBudget = DEFAULT_BUDGET,
                    start: Optional[int] = None) -> Witness:
    """Build a chain by repeatedly extracting a homogeneous set for the
    stage coloring induced by the current minimum.

    Stage i colors tuples above a_i by the exact coloring applied to
    the tuple with a_i prepended; extraction supplies the stage's
    homogeneous set, whose minimum becomes the next chain element.  The
    chain stops when a stage search fails inside its budget.  A final
    pigeonhole pass thins the chain to one induced per-minimum color
    class (larger class, ties to color 0); elements with no induced
    color are kept, since no exactly large subset starts at them.
    """
    if not universe:
        raise ValueError("universe must be nonempty")
    if universe.min() < 2:
        raise ValueError("universe must start at 2 or above")
    a0 = universe.min() if start is None else start
    chain = [a0]
    stage_colors: dict[int, int] = {}
    stages = []
    current = universe.above(a0).elems[: budget.max_universe]
    while True:
        a = chain[-1]
        if len(current) < a:
            break
        w = f_a_extract(a, _stage_coloring(c, a), FinSet(current), len(current), budget)
        if not w.set or w.color is None:
            break
        if not w.budget_used.get("homogeneous_recheck", True):
            break
        stage_colors[a] = w.color
        stages.append({
            "a": a, "size": len(w.set), "color": w.color, "verified": w.verified,
        })
        nxt = w.set.elems
        chain.append(nxt[0])
        current = nxt[1:]
        if not current:
            break

    count0 = sum(1 for v in stage_colors.values() if v == 0)
    count1 = len(stage_colors) - count0
    chosen = 0 if count0 >= count1 else 1
    thinned = [x for x in chain if stage_colors.get(x, chosen) == chosen]
    result = FinSet(thinned)
    report = verify_exact_homogeneous(result, c)
    return Witness(
        result, "chain",
        color=report.color,
        per_min_colors={x: stage_colors[x] for x in thinned if x in stage_colors},
        verified=report.passed,
        budget_used={
            "start": a0,
            "stages": stages,
            "chain_before_thinning": chain,
            "pigeonhole_color": chosen,
            "verified_subsets": report.checked,
        },
    )
