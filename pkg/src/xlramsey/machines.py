"""Toy oracle machines under a total program numbering.

The machine is a 4-register counter machine with one oracle-query
instruction.  Registers hold naturals; the input arrives in register 0
and the output is register 0 at HALT.  ``QUERY r`` replaces the value of
r by 1 if that value is a member of the oracle, else 0.  Decoding is a
total bijection between naturals and instruction sequences, so "index e"
ranges over all naturals; index 0 is the empty program, which diverges
by convention (the program counter leaves the program and never halts).

Step-bounded runs follow the convention that a run halts under bound s
only when the index, input, and output are all below s, the run takes
fewer than s steps, and every register value (hence every queried value)
stays below s.  This makes halting-under-s decidable, monotone in s, and
dependent on the oracle only through values below s.

Two jump flavors are provided and never mixed implicitly:

* pair-coded jumps: stage-s sets of codes ``pair(m, e)`` with m in the
  stage-s domain of program e;
* halt-on-0 jumps: cutoff-semantic sets of indices that halt on input 0.

Divergence is detected early where possible (program counter out of
range, repeated machine state via Brent's cycle finding); otherwise runs
are cut off at the requested bound.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from functools import lru_cache
from math import isqrt
from typing import Iterable, NamedTuple, Optional, Sequence

REGISTERS = 4

_HALT, _INC, _DEC, _JZ, _QUERY = 0, 1, 2, 3, 4
_OP_NAMES = {"HALT": _HALT, "INC": _INC, "DEC": _DEC, "JZ": _JZ, "QUERY": _QUERY}
_OP_TEXT = {v: k for k, v in _OP_NAMES.items()}


class Instr(NamedTuple):
    op: str
    reg: int = 0
    off: int = 0


# ---------------------------------------------------------------------------
# pairing

def pair(x: int, y: int) -> int:
    """Diagonal pairing x(x+1)/2 + y.

    Bijective from {(x, y) : y <= x} onto N, with x read as the diagonal
    index.  Total on all pairs; off the canonical domain distinct inputs
    can share a code, so consumers always speak in codes.
    """
    return x * (x + 1) // 2 + y


def unpair(n: int) -> tuple[int, int]:
    """Inverse of ``pair`` on the canonical domain, via triangular root."""
    x = (isqrt(8 * n + 1) - 1) // 2
    return x, n - x * (x + 1) // 2


def _cantor(a: int, b: int) -> int:
    # Full-plane bijection used only for sequence coding.
    return pair(a + b, b)


def _uncantor(n: int) -> tuple[int, int]:
    x, y = unpair(n)
    return x - y, y


def encode_list(values: Sequence[int]) -> int:
    """Bijective code of a finite sequence of naturals."""
    code = 0
    for v in reversed(values):
        code = _cantor(v, code) + 1
    return code


def decode_list(code: int) -> list[int]:
    out = []
    while code:
        head, code = _uncantor(code - 1)
        out.append(head)
    return out


# ---------------------------------------------------------------------------
# instruction and program coding

def _zigzag(off: int) -> int:
    return 2 * off if off >= 0 else -2 * off - 1


def _unzigzag(z: int) -> int:
    return z // 2 if z % 2 == 0 else -(z + 1) // 2


def _instr_code(ins: Instr) -> int:
    op = ins.op
    if not 0 <= ins.reg < REGISTERS:
        raise ValueError(f"register out of range: {ins}")
    if op == "HALT":
        return 0
    if op == "INC":
        return 1 + ins.reg
    if op == "DEC":
        return 5 + ins.reg
    if op == "QUERY":
        return 9 + ins.reg
    if op == "JZ":
        return 13 + 4 * _zigzag(ins.off) + ins.reg
    raise ValueError(f"unknown op: {op!r}")


def _code_instr(c: int) -> Instr:
    if c == 0:
        return Instr("HALT")
    if c <= 4:
        return Instr("INC", c - 1)
    if c <= 8:
        return Instr("DEC", c - 5)
    if c <= 12:
        return Instr("QUERY", c - 9)
    k = c - 13
    return Instr("JZ", k % 4, _unzigzag(k // 4))


class Program:
    """An immutable instruction sequence with its numeric index."""

    __slots__ = ("instructions", "_compiled")

    def __init__(self, instructions: Iterable[Instr] = ()):
        ins = tuple(
            i if isinstance(i, Instr) else Instr(*i) for i in instructions
        )
        for i in ins:
            _instr_code(i)  # validates op and register
        self.instructions = ins
        self._compiled = tuple(
            (_OP_NAMES[i.op], i.reg, i.off) for i in ins
        )

    @property
    def compiled(self):
        return self._compiled

    @property
    def index(self) -> int:
        return encode_program(self)

    def render(self) -> str:
        lines = []
        for i in self.instructions:
            if i.op == "HALT":
                lines.append("HALT")
            elif i.op == "JZ":
                lines.append(f"JZ {i.reg} {i.off}")
            else:
                lines.append(f"{i.op} {i.reg}")
        return "\n".join(lines)

    @classmethod
    def parse(cls, text: str) -> "Program":
        ins = []
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            op = parts[0].upper()
            if op == "HALT":
                ins.append(Instr("HALT"))
            elif op == "JZ":
                ins.append(Instr("JZ", int(parts[1]), int(parts[2])))
            elif op in ("INC", "DEC", "QUERY"):
                ins.append(Instr(op, int(parts[1])))
            else:
                raise ValueError(f"bad instruction: {raw!r}")
        return cls(ins)

    def __eq__(self, other) -> bool:
        return isinstance(other, Program) and self.instructions == other.instructions

    def __hash__(self) -> int:
        return hash(self.instructions)

    def __len__(self) -> int:
        return len(self.instructions)

    def __repr__(self) -> str:
        return f"Program({list(self.instructions)!r})"


def encode_program(program: Program) -> int:
    return encode_list([_instr_code(i) for i in program.instructions])


@lru_cache(maxsize=65536)
def decode_program(e: int) -> Program:
    if e < 0:
        raise ValueError("index must be a natural")
    return Program(_code_instr(c) for c in decode_list(e))


def load_program_universe(path) -> list[Program]:
    """Read a program-universe file: blocks separated by blank lines.

    A block that is a single decimal number names a program by index;
    any other block is parsed as instruction text.  '#' starts a comment.
    """
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    programs = []
    for block in text.split("\n\n"):
        lines = [ln.split("#", 1)[0].strip() for ln in block.splitlines()]
        lines = [ln for ln in lines if ln]
        if not lines:
            continue
        if len(lines) == 1 and lines[0].isdigit():
            programs.append(decode_program(int(lines[0])))
        else:
            programs.append(Program.parse("\n".join(lines)))
    return programs


# ---------------------------------------------------------------------------
# oracles

_REGISTRY_LOCK = threading.Lock()
_CONTENT_TOKENS: dict[tuple, int] = {}


def _content_token(elems: tuple) -> int:
    # Interns set contents so cache keys hash in O(1).
    with _REGISTRY_LOCK:
        tok = _CONTENT_TOKENS.get(elems)
        if tok is None:
            tok = len(_CONTENT_TOKENS)
            _CONTENT_TOKENS[elems] = tok
        return tok


class OracleSet:
    """A pure membership predicate on naturals.

    Implementations must be deterministic and side-effect-free; repeated
    queries agree.  ``key`` is a hashable structural identity used by the
    run caches, or None when the oracle cannot be keyed.
    """

    def member(self, n: int) -> bool:
        raise NotImplementedError

    @property
    def key(self):
        return None

    def __contains__(self, n: int) -> bool:
        return self.member(n)


class ExplicitOracle(OracleSet):
    """Membership in an explicit finite set."""

    def __init__(self, elems: Iterable[int] = ()):
        self.elems = tuple(sorted(set(elems)))
        self._set = frozenset(self.elems)
        self._key = ("fin", _content_token(self.elems))

    def member(self, n: int) -> bool:
        return n in self._set

    @property
    def key(self):
        return self._key

    def __repr__(self) -> str:
        return f"ExplicitOracle({list(self.elems)!r})"


EMPTY = ExplicitOracle(())


class FuncOracle(OracleSet):
    """Wrap an arbitrary pure predicate; uncacheable unless keyed."""

    def __init__(self, fn, key=None):
        self._fn = fn
        self._key = key

    def member(self, n: int) -> bool:
        return bool(self._fn(n))

    @property
    def key(self):
        return self._key


class JoinOracle(OracleSet):
    """Join of two oracles: left on evens, right on odds."""

    def __init__(self, left: OracleSet, right: OracleSet):
        self.left, self.right = left, right

    def member(self, n: int) -> bool:
        if n % 2 == 0:
            return self.left.member(n // 2)
        return self.right.member(n // 2)

    @property
    def key(self):
        kl, kr = self.left.key, self.right.key
        if kl is None or kr is None:
            return None
        return ("join", kl, kr)


class CutoffJumpOracle(OracleSet):
    """Halt-on-0 jump with cutoff semantics: e is in iff {e} with the
    base oracle halts on input 0 under the cutoff bound."""

    def __init__(self, base: OracleSet, cutoff: int):
        if cutoff <= 0:
            raise ValueError("cutoff must be positive")
        self.base, self.cutoff = base, cutoff
        self._memo: dict[int, bool] = {}
        self._lock = threading.Lock()

    def member(self, e: int) -> bool:
        with self._lock:
            if e in self._memo:
                return self._memo[e]
        tau = halt_threshold(e, self.base, 0, self.cutoff)
        ans = tau is not None and tau <= self.cutoff
        with self._lock:
            self._memo[e] = ans
        return ans

    @property
    def key(self):
        kb = self.base.key
        return None if kb is None else ("halt0", kb, self.cutoff)


class DomainStageOracle(OracleSet):
    """Stage-s domain of program i over a base oracle."""

    def __init__(self, i: int, base: OracleSet, s: int):
        self.i, self.base, self.s = i, base, s

    def member(self, m: int) -> bool:
        if self.s <= 0:
            return False
        tau = halt_threshold(self.i, self.base, m, self.s)
        return tau is not None and tau <= self.s

    @property
    def key(self):
        kb = self.base.key
        return None if kb is None else ("dom", self.i, kb, self.s)


class LazyJumpOracle(OracleSet):
    """Pair-coded jump at a fixed stage, answered code by code.

    Membership of code c probes every decomposition c = pair(m, e); this
    avoids materializing the whole stage set when only a few codes are
    ever queried.
    """

    def __init__(self, base: OracleSet, stage: int, programs=None):
        self.base, self.stage = base, stage
        self.programs = None if programs is None else frozenset(programs)
        self._memo: dict[int, bool] = {}
        self._lock = threading.Lock()

    def member(self, c: int) -> bool:
        with self._lock:
            if c in self._memo:
                return self._memo[c]
        ans = _code_in_jump(self.base, self.stage, c, self.programs)
        with self._lock:
            self._memo[c] = ans
        return ans

    @property
    def key(self):
        kb = self.base.key
        if kb is None:
            return None
        ptok = None if self.programs is None else _content_token(tuple(sorted(self.programs)))
        return ("jlazy", kb, self.stage, ptok)


# ---------------------------------------------------------------------------
# bounded runs

class RunOutcome(NamedTuple):
    """Result of a step-bounded run; value is None when the bound was
    exceeded (divergence is a value here, not an error)."""

    value: Optional[int]
    steps_used: int
    max_value_seen: int

    @property
    def halted(self) -> bool:
        return self.value is not None


def _simulate(compiled, oracle: OracleSet, x: int, step_cap: int, value_cap: int):
    """Run until HALT, detected divergence, or a cap.

    Returns (status, steps, maxval, y) with status one of "halt",
    "diverge" (pc left the program or the state cycled), or "cap"
    (step or value cap reached; behavior beyond is unknown).
    """
    n = len(compiled)
    r = [x, 0, 0, 0]
    pc = 0
    steps = 0
    maxval = x
    # Brent cycle detection: compare against a saved state, resaving at
    # powers of two.  Sound because runs are deterministic.
    saved = (0, x, 0, 0, 0)
    power = 1
    lam = 0
    while True:
        if pc < 0 or pc >= n:
            return ("diverge", steps, maxval, None)
        if steps >= step_cap:
            return ("cap", steps, maxval, None)
        op, reg, off = compiled[pc]
        steps += 1
        if op == _HALT:
            return ("halt", steps, maxval, r[0])
        if op == _INC:
            v = r[reg] + 1
            if v > value_cap:
                return ("cap", steps, maxval, None)
            r[reg] = v
            if v > maxval:
                maxval = v
            pc += 1
        elif op == _DEC:
            if r[reg]:
                r[reg] -= 1
            pc += 1
        elif op == _JZ:
            pc = pc + off if r[reg] == 0 else pc + 1
        else:  # _QUERY
            v = 1 if oracle.member(r[reg]) else 0
            if v > value_cap:
                return ("cap", steps, maxval, None)
            r[reg] = v
            if v > maxval:
                maxval = v
            pc += 1
        state = (pc, r[0], r[1], r[2], r[3])
        if state == saved:
            return ("diverge", steps, maxval, None)
        lam += 1
        if lam == power:
            saved = state
            power *= 2
            lam = 0


def run_bounded(e: int, oracle: OracleSet, x: int, s: int) -> RunOutcome:
    """Step-bounded run of program e on input x.

    Halts with value y iff e, x, y < s, s > 0, the run takes fewer than
    s steps, and every register value stays below s.  Anything else is
    an exceeded-bound outcome.
    """
    if s <= 0 or e >= s or x >= s:
        return RunOutcome(None, 0, x)
    status, steps, maxval, y = _simulate(
        decode_program(e).compiled, oracle, x, s - 1, s - 1
    )
    if status == "halt":
        return RunOutcome(y, steps, maxval)
    return RunOutcome(None, steps, maxval)


_THRESHOLD_LOCK = threading.Lock()
_THRESHOLD_CACHE: dict[tuple, tuple[int, Optional[int]]] = {}
# key -> (checked_cap, tau); tau None means "no halt found up to checked_cap".
# checked_cap == -1 marks a definite diverger (valid at every cap).


def halt_threshold(e: int, oracle: OracleSet, x: int, cap: int) -> Optional[int]:
    """Least bound s <= cap under which run_bounded(e, oracle, x, s)
    halts, or None if there is none up to cap.

    The threshold is max(e, x, y, steps, values) + 1 for a halting run,
    so one simulation answers every bound at once; results are memoized
    per (oracle key, e, x) when the oracle is keyable.
    """
    okey = oracle.key
    mkey = None if okey is None else (okey, e, x)
    if mkey is not None:
        with _THRESHOLD_LOCK:
            hit = _THRESHOLD_CACHE.get(mkey)
        if hit is not None:
            checked, tau = hit
            if tau is not None:
                return tau if tau <= cap else None
            if checked == -1 or checked >= cap:
                return None
    if cap <= 0:
        return None
    status, steps, maxval, y = _simulate(
        decode_program(e).compiled, oracle, x, cap - 1, cap - 1
    )
    if status == "halt":
        tau = max(e, x, y, steps, maxval) + 1
        entry = (cap, tau)
    elif status == "diverge":
        entry = (-1, None)
    else:
        entry = (cap, None)
    if mkey is not None:
        with _THRESHOLD_LOCK:
            _THRESHOLD_CACHE[mkey] = entry
    tau = entry[1]
    return tau if tau is not None and tau <= cap else None


def clear_caches() -> None:
    """Drop all memoized run and jump data (test hygiene)."""
    with _THRESHOLD_LOCK:
        _THRESHOLD_CACHE.clear()
    with _JUMP_LOCK:
        _JUMP_CACHE.clear()
    decode_program.cache_clear()


# ---------------------------------------------------------------------------
# limit functions and jumps

def g_limit(i: int, e: int, s: int, x: int, oracle: OracleSet) -> int:
    """Value of program e run under bound s with the stage-s domain of
    program i over the oracle as its own oracle; 0 when the bound is
    exceeded."""
    if s <= 0:
        return 0
    out = run_bounded(e, DomainStageOracle(i, oracle, s), x, s)
    return out.value if out.halted else 0


_JUMP_LOCK = threading.Lock()
_JUMP_CACHE: dict[tuple, "FinSet"] = {}


def _programs_token(programs) -> Optional[int]:
    if programs is None:
        return None
    return _content_token(tuple(sorted(set(programs))))


def jump_pairs_approx(oracle: OracleSet, s: int, programs=None) -> "FinSet":
    """Stage-s pair-coded jump: all codes pair(m, e) such that m enters
    the domain of program e over the oracle at some stage t < s.

    Monotone nondecreasing in s.  ``programs`` optionally restricts the
    contributing indices e to a curated finite list.
    """
    from .largesets import FinSet

    okey = oracle.key
    ckey = None
    if okey is not None:
        ckey = ("jp", okey, s, _programs_token(programs))
        with _JUMP_LOCK:
            hit = _JUMP_CACHE.get(ckey)
        if hit is not None:
            return hit
    codes = set()
    es = range(s) if programs is None else [e for e in programs if 0 <= e < s]
    for e in es:
        for m in range(s):
            tau = halt_threshold(e, oracle, m, s - 1) if s > 0 else None
            if tau is not None:
                codes.add(pair(m, e))
    result = FinSet(sorted(codes))
    if ckey is not None:
        with _JUMP_LOCK:
            _JUMP_CACHE[ckey] = result
    return result


def _code_in_jump(oracle: OracleSet, s: int, c: int, programs=None) -> bool:
    # Probe every decomposition c = pair(m, e) = m(m+1)/2 + e.
    m = 0
    while m * (m + 1) // 2 <= c:
        e = c - m * (m + 1) // 2
        if programs is None or e in programs:
            tau = halt_threshold(e, oracle, m, s - 1) if s > 0 else None
            if tau is not None:
                return True
        m += 1
    return False


def jump_codes_below(oracle: OracleSet, s: int, bound: int, programs=None) -> "FinSet":
    """The stage-s pair-coded jump restricted below a code bound,
    computed by probing code decompositions instead of scanning the
    whole index range.  Agrees with jump_pairs_approx on the bound."""
    from .largesets import FinSet

    okey = oracle.key
    ckey = None
    progset = None if programs is None else frozenset(programs)
    if okey is not None:
        ckey = ("jb", okey, s, bound, _programs_token(programs))
        with _JUMP_LOCK:
            hit = _JUMP_CACHE.get(ckey)
        if hit is not None:
            return hit
    members = [c for c in range(bound) if _code_in_jump(oracle, s, c, progset)]
    result = FinSet(members)
    if ckey is not None:
        with _JUMP_LOCK:
            _JUMP_CACHE[ckey] = result
    return result


@dataclass(frozen=True)
class JumpStageSpec:
    """A nonempty list of jump stages, applied innermost first."""

    stages: tuple[int, ...]

    def __post_init__(self):
        if not self.stages:
            raise ValueError("stage list must be nonempty")
        for u in self.stages:
            if u < 0:
                raise ValueError("stages must be naturals")

    def render(self) -> str:
        return ",".join(str(u) for u in self.stages)

    @classmethod
    def parse(cls, text: str) -> "JumpStageSpec":
        return cls(tuple(int(p.strip()) for p in text.split(",")))


def staged_jump(oracle: OracleSet, spec, programs=None) -> "FinSet":
    """Fold the pair-coded jump along a stage list, innermost stage
    first; the base oracle plays the role of the zeroth level."""
    stages = spec.stages if isinstance(spec, JumpStageSpec) else tuple(spec)
    JumpStageSpec(stages)  # validates
    current: OracleSet = oracle
    result = None
    for u in stages:
        result = jump_pairs_approx(current, u, programs)
        current = ExplicitOracle(result.elems)
    return result


def jump_halt0(oracle: OracleSet, cutoff: int) -> CutoffJumpOracle:
    """Cutoff-semantic halt-on-0 jump of the oracle.

    Composing n times yields the cutoff tower standing in for the
    iterated halting problem."""
    return CutoffJumpOracle(oracle, cutoff)


# ---------------------------------------------------------------------------
# many-one reductions between jump levels

@lru_cache(maxsize=1)
def _query_loop_program() -> Program:
    # Halts on input m iff m is in the oracle; otherwise spins forever.
    return Program([Instr("QUERY", 0), Instr("JZ", 0, 0), Instr("HALT")])


def query_loop_index() -> int:
    """Index of the membership probe: halts on input m iff m is in the
    oracle."""
    return _query_loop_program().index


_REDUCTION_LIMIT = 10 ** 5


def mone_reduction(i: int, j: int, m: int, flavor: str = "pair") -> int:
    """Map m through the level-raising reduction from jump level i to j.

    pair flavor:  one step sends m to pair(m, q) with q the membership
    probe, matching the pair-coded jump.  halt0 flavor: one step sends m
    to the index of a program that loads m, probes the oracle, and halts
    exactly on membership, matching the halt-on-0 jump.  Rejects i > j.
    """
    if i > j:
        raise ValueError("reduction requires i <= j")
    if flavor not in ("pair", "halt0"):
        raise ValueError(f"unknown flavor: {flavor!r}")
    for _ in range(j - i):
        if flavor == "pair":
            m = pair(m, query_loop_index())
        else:
            if m > _REDUCTION_LIMIT:
                raise ValueError(
                    f"halt0 reduction of {m} exceeds the desk-scale program size limit"
                )
            body = [Instr("INC", 0)] * m
            body += [Instr("QUERY", 0), Instr("JZ", 0, 0), Instr("HALT")]
            m = Program(body).index
    return m
