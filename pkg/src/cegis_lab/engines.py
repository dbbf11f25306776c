"""Synthesis engines: the CEGIS recursion, per-family generalizers, and
the simulation of minimal-counterexample synthesis on top of the
arbitrary-counterexample verifier.

A Generalizer is the inductive function F: it maps (previous program,
trace entry, verifier response) to the next program and is reused across
engine variants so that only the verifier changes between experiments.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Optional

from .core import (
    BOT,
    Language,
    Program,
    Trace,
    TraceEntry,
    explicit_language,
    pair_decode,
    semantically_equal,
)
from .families import ChainFamily, DiagonalFamily, GoldFamily, RectangleFamily
from .verifiers import NO_CEX, CexStrategy, Verdict, check, hcheck, mincheck

CEGIS = "cegis"
MINCEGIS = "mincegis"
HCEGIS = "hcegis"
POSITIVE_ONLY = "positive-only"
SIMULATED_MINCEGIS = "simulated-mincegis"

VARIANTS = (CEGIS, MINCEGIS, HCEGIS, POSITIVE_ONLY)

CONVERGED = "converged"
STALLED = "stalled"
BUDGET_EXHAUSTED = "budget-exhausted"


class EngineFaultError(RuntimeError):
    """The generalizer left the family's representable set."""


class InconsistentOracleError(RuntimeError):
    """A verifier answer contradicts engine state; impossible when sound."""


class ProbeOverflowError(RuntimeError):
    """Auxiliary probe budget exhausted."""


ProbeFn = Callable[[Language], Verdict]
StepFn = Callable[[Program, TraceEntry, Optional[int], Optional[ProbeFn]], Program]


@dataclass(frozen=True)
class Generalizer:
    name: str
    initial: Program
    step: StepFn


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    entry: TraceEntry
    candidate: str
    cex: Optional[int]
    event: str  # conjecture | probe | replay | freeze


@dataclass
class SimState:
    lce: "LceMap"
    p_sim: Program
    p_last: Program
    mu: int
    backlog: tuple
    tau_done_len: int


@dataclass
class EngineRun:
    variant: str
    iterations: list[IterationRecord]
    final: Program
    status: str
    converged_at: Optional[int]
    queries: int
    probes: int
    cex_count: int
    stability_window: int
    semantic_match: bool
    sim_state: Optional[SimState] = None


def _is_frozen(program: Program) -> bool:
    return bool(getattr(program.aux, "frozen", False))


# ---------------------------------------------------------------------------
# Engine loop


def run_engine(
    variant: str,
    target: Language,
    trace: Trace,
    generalizer: Generalizer,
    strategy: Optional[CexStrategy] = None,
    budget: int = 100,
    stability_window: int = 10,
    probe_cap: int = 100_000,
) -> EngineRun:
    """Execute the recursion for up to ``budget`` steps.

    Iteration i verifies the candidate produced at iteration i-1 and then
    applies F to (candidate, tau(i), verdict).  The run halts early on a
    frozen conjecture or once the candidate has been stable under
    no-counterexample verdicts for the stability window.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown engine variant: {variant}")
    if budget < 1:
        return EngineRun(
            variant, [], generalizer.initial, BUDGET_EXHAUSTED, None, 0, 0, 0,
            stability_window,
            semantically_equal(generalizer.initial.language, target),
        )
    strategy = strategy or CexStrategy()
    entries = trace.entries
    limit = min(budget, len(entries))

    records: list[IterationRecord] = []
    current = generalizer.initial
    queries = 0
    probes = 0
    cex_count = 0
    streak = 0
    last_change = 0
    status: Optional[str] = None

    for i in range(1, limit + 1):
        entry = entries[i - 1]
        prev = current

        if variant == CEGIS:
            verdict = check(prev.language, target, strategy)
        elif variant == MINCEGIS:
            verdict = mincheck(prev.language, target)
        elif variant == HCEGIS:
            verdict = hcheck(prev.language, target, entries[: i - 1])
        else:  # positive-only ablation: the counterexample channel is cut
            verdict = NO_CEX
        queries += 1
        if not verdict.is_bot:
            cex_count += 1

        probe: Optional[ProbeFn] = None
        if variant == HCEGIS:
            history = entries[:i]

            def probe(lang: Language, _h=history) -> Verdict:
                nonlocal probes
                probes += 1
                if probes > probe_cap:
                    raise ProbeOverflowError(f"more than {probe_cap} probes")
                return hcheck(lang, target, _h)

        current = generalizer.step(prev, entry, verdict.counterexample, probe)
        records.append(
            IterationRecord(i, entry, prev.descriptor(), verdict.counterexample, "conjecture")
        )

        changed = current is not prev and current.semantic_key() != prev.semantic_key()
        if changed:
            last_change = i
            streak = 0
        elif verdict.is_bot:
            streak += 1
        else:
            streak = 0

        if _is_frozen(current):
            records.append(IterationRecord(i, entry, current.descriptor(), None, "freeze"))
            status = CONVERGED
            break
        if streak >= stability_window and (
            cex_count > 0 or semantically_equal(current.language, target)
        ):
            status = CONVERGED
            break

    match = semantically_equal(current.language, target)
    if status is None:
        if not records:
            status = BUDGET_EXHAUSTED
        elif cex_count == 0 and not match:
            # Never refuted and wrong: the observable signature of
            # non-identifiability at this budget.
            status = STALLED
        elif streak >= min(stability_window, len(records)) and match:
            status = CONVERGED
        else:
            status = BUDGET_EXHAUSTED

    converged_at = last_change if status == CONVERGED else None
    return EngineRun(
        variant, records, current, status, converged_at, queries, probes,
        cex_count, stability_window, match,
    )


# ---------------------------------------------------------------------------
# Per-family generalizers


@dataclass(frozen=True)
class ChainAux:
    frozen: bool = False


def chain_generalizer(family: ChainFamily) -> Generalizer:
    """Enumerate up the chain while unrefuted; freeze one below on refutation."""

    def make(i: int, frozen: bool) -> Program:
        return Program("chain", i, family.language(i), ChainAux(frozen))

    def step(prev: Program, entry, cex, probe=None) -> Program:
        if prev.aux.frozen:
            return prev
        j = prev.index
        if cex is not None:
            if j == 0:
                raise InconsistentOracleError("counterexample against chain[0]")
            return make(j - 1, True)
        if j + 1 > family.max_index:
            raise EngineFaultError(f"chain index {j + 1} beyond cap {family.max_index}")
        return make(j + 1, False)

    return Generalizer("chain", make(0, False), step)


@dataclass(frozen=True)
class RectAux:
    # Inner hull of positive examples as a bounding box, or None.
    hull: Optional[tuple[int, int, int, int]] = None


def rectangle_generalizer(family: RectangleFamily) -> Generalizer:
    """Start universal; grow the hull on positives, tighten bounds on cexs.

    A counterexample shrinks one bound on the axis with the largest
    absolute coordinate (tie: x first), on the side that excludes it
    without cutting the hull; with an empty hull the side follows the
    coordinate's sign.
    """
    g = family.grid_bound

    def make(bounds: tuple[int, int, int, int], hull) -> Program:
        ax, bx, ay, by = bounds
        return Program("rectangle", bounds, family.language(ax, bx, ay, by), RectAux(hull))

    def hull_add(hull, x: int, y: int):
        if hull is None:
            return (x, x, y, y)
        hx0, hx1, hy0, hy1 = hull
        return (min(hx0, x), max(hx1, x), min(hy0, y), max(hy1, y))

    def shrink(bounds, hull, xc: int, yc: int):
        ax, bx, ay, by = bounds
        axes = [("x", xc), ("y", yc)]
        if abs(yc) > abs(xc):
            axes.reverse()
        for axis, c in axes:
            lo, hi = (ax, bx) if axis == "x" else (ay, by)
            span = None
            if hull is not None:
                span = (hull[0], hull[1]) if axis == "x" else (hull[2], hull[3])
            if span is None:
                sides = ["upper", "lower"] if c >= 0 else ["lower", "upper"]
            elif c > span[1]:
                sides = ["upper"]
            elif c < span[0]:
                sides = ["lower"]
            else:
                continue
            for side in sides:
                nlo, nhi = (lo, c - 1) if side == "upper" else (c + 1, hi)
                if nlo > nhi:
                    continue
                if span is not None and not (nlo <= span[0] and span[1] <= nhi):
                    continue
                if axis == "x":
                    return (nlo, nhi, ay, by)
                return (ax, bx, nlo, nhi)
        raise InconsistentOracleError(
            f"counterexample ({xc},{yc}) inside the positive hull {hull}"
        )

    def step(prev: Program, entry, cex, probe=None) -> Program:
        bounds = prev.index
        hull = prev.aux.hull
        if entry is not BOT:
            x, y = family.decode(entry)
            hull = hull_add(hull, x, y)
            ax, bx, ay, by = bounds
            # Repair: a positive example outside the bounds re-expands them.
            if not (ax <= x <= bx and ay <= y <= by):
                bounds = (min(ax, x), max(bx, x), min(ay, y), max(by, y))
        if cex is not None:
            xc, yc = family.decode(cex)
            bounds = shrink(bounds, hull, xc, yc)
        if bounds == prev.index:
            if hull == prev.aux.hull:
                return prev
            return Program("rectangle", bounds, prev.language, RectAux(hull))
        return make(bounds, hull)

    return Generalizer("rectangle", make((-g, g, -g, g), None), step)


@dataclass(frozen=True)
class DiagAux:
    mode: str = "A"  # A: only <0, .> seen; B: some <1, .> seen
    min_j: Optional[int] = None
    x_max: Optional[int] = None
    recovered: frozenset = frozenset()


def diag_generalizer(family: DiagonalFamily) -> Generalizer:
    """The two-mode learner for the diagonal family (history-bounded runs).

    Mode A conjectures diag(j) for the minimum j with <0, j> observed.
    Mode B tracks the largest observed code x_max and reconstructs every
    smaller member through singleton probes: the probe {x'} draws no
    counterexample exactly when x' is in the target (x' < x_max keeps the
    probe inside the history bound).  Without a probe oracle the learner
    keeps only x_max, which is precisely what it cannot recover from.
    """
    bound = family.universe_bound

    def recset_program(aux: DiagAux) -> Program:
        members = frozenset(aux.recovered) | {aux.x_max}
        label = ",".join(str(m) for m in sorted(members))
        lang = explicit_language(members, bound, f"recset[{label}]")
        return Program("diagonal", ("recset", tuple(sorted(members))), lang, aux)

    def reconstruct(x_max: int, probe: Optional[ProbeFn]) -> frozenset:
        if probe is None:
            return frozenset()
        found = []
        for x in range(x_max):
            lang = explicit_language({x}, bound, f"probe[{x}]")
            if probe(lang).is_bot:
                found.append(x)
        return frozenset(found)

    def step(prev: Program, entry, cex, probe=None) -> Program:
        aux: DiagAux = prev.aux
        if entry is BOT:
            return prev
        j, n = pair_decode(entry)
        if aux.mode == "A":
            if j == 0:
                if aux.min_j is not None and n >= aux.min_j:
                    return prev
                new = DiagAux("A", n, None, frozenset())
                return Program("diagonal", ("diag", n), family.diag_language(n), new)
            new = DiagAux("B", None, entry, reconstruct(entry, probe))
            return recset_program(new)
        # mode B
        if aux.x_max is not None and entry <= aux.x_max:
            return prev
        new = DiagAux("B", None, entry, reconstruct(entry, probe))
        return recset_program(new)

    initial = Program(
        "diagonal",
        ("diag", "init"),
        explicit_language((), bound, "diag[init]"),
        DiagAux(),
    )
    return Generalizer("diagonal", initial, step)


@dataclass(frozen=True)
class GoldAux:
    frozen: bool = False


def gold_generalizer(family: GoldFamily) -> Generalizer:
    """Guess the universal set; one counterexample pins the deleted point."""

    def step(prev: Program, entry, cex, probe=None) -> Program:
        if cex is None:
            return prev
        if prev.aux.frozen:
            raise InconsistentOracleError(
                f"counterexample {cex} after the conjecture was pinned"
            )
        return Program("gold", ("minus", cex), family.minus_language(cex), GoldAux(True))

    initial = Program("gold", ("full",), family.full_language(), GoldAux(False))
    return Generalizer("gold", initial, step)


# ---------------------------------------------------------------------------
# Simulation machinery: lce map, replay, and the micro-step engine


_TOP = "top"


class LceMap:
    """Finite cache from programs to their minimal counterexamples.

    Keys are semantic (member sets): syntactically different programs for
    the same language share one entry.  Absent key = unknown (top); a
    stored None = no counterexample exists.
    """

    def __init__(self):
        self._entries: dict[frozenset, Optional[int]] = {}

    def get(self, program: Program):
        return self._entries.get(program.semantic_key(), _TOP)

    def set(self, program: Program, value: Optional[int]) -> None:
        self._entries[program.semantic_key()] = value

    def items(self):
        return self._entries.items()

    def __len__(self) -> int:
        return len(self._entries)


@dataclass(frozen=True)
class Undefined:
    at: Program


def _replay_longest(
    lce: LceMap, start: Program, entries: list[TraceEntry], step: StepFn
) -> tuple[Program, int]:
    """Replay F substituting cached minimal counterexamples for verifier
    calls; stop before the first program whose cache entry is unknown."""
    prog = start
    consumed = 0
    for e in entries:
        value = lce.get(prog)
        if value is _TOP:
            break
        prog = step(prog, e, value, None)
        consumed += 1
    return prog, consumed


def t_lce_replay(
    lce: LceMap, p0: Program, prefix: list[TraceEntry], generalizer: Generalizer
):
    """Replay over a full prefix; Undefined names the stuck program."""
    prog, consumed = _replay_longest(lce, p0, list(prefix), generalizer.step)
    if consumed < len(prefix):
        return Undefined(at=prog)
    return prog


def simulate_min_via_arbitrary(
    target: Language,
    trace: Trace,
    generalizer: Generalizer,
    strategy: Optional[CexStrategy] = None,
    budget: int = 10_000,
    stability_window: int = 10,
) -> EngineRun:
    """Reproduce a minimal-counterexample run using only the arbitrary
    verifier, finding each minimal counterexample in micro-steps.

    Probing walks the universe in the declared element ordering: the first
    singleton intersection that draws a counterexample is the minimal one.
    Every micro-step consumes one trace entry into a backlog that is
    replayed once the needed cache entries exist.
    """
    strategy = strategy or CexStrategy()
    entries = trace.entries
    limit = min(budget, len(entries))
    step = generalizer.step

    base = generalizer.initial.language
    rank = sorted(range(base.universe_bound + 1), key=base.ordering_key)

    lce = LceMap()
    p_sim = generalizer.initial
    p_last = generalizer.initial
    probing = False
    mu = 0
    backlog: list[TraceEntry] = []
    tau_done = 0

    records: list[IterationRecord] = []
    queries = 0
    cex_count = 0
    streak = 0
    last_change = 0
    since_progress = 0
    status: Optional[str] = None

    def probe_program(elem: int) -> Program:
        return Program(
            p_last.family, ("probe", elem),
            p_last.language.intersect_singleton(elem), None,
        )

    def replay_from(start: Program, avail: list[TraceEntry]):
        nonlocal backlog, tau_done, since_progress
        prog, consumed = _replay_longest(lce, start, avail, step)
        backlog = avail[consumed:]
        tau_done += consumed
        if consumed:
            since_progress = 0
        return prog

    for m in range(1, limit + 1):
        entry = entries[m - 1]
        since_progress += 1
        # Progress invariant: between extensions of the consumed prefix the
        # simulation can spend at most one full probe sweep plus overhead.
        if since_progress > len(rank) + 2:
            raise EngineFaultError("simulation stopped making progress")

        if not probing:
            verdict = check(p_sim.language, target, strategy)
            queries += 1
            records.append(
                IterationRecord(m, entry, p_sim.descriptor(), verdict.counterexample, "conjecture")
            )
            if not verdict.is_bot:
                cex_count += 1
                if lce.get(p_sim) is not _TOP:  # Case 1.1.1
                    prog = replay_from(p_sim, backlog + [entry])
                    records.append(IterationRecord(m, None, prog.descriptor(), None, "replay"))
                    if prog.semantic_key() != p_sim.semantic_key():
                        last_change = m
                    p_sim = p_last = prog
                    streak = 0
                else:  # Case 1.1.2
                    backlog.append(entry)
                    mu = 0
                    p_sim = probe_program(rank[0])
                    probing = True
                    streak = 0
            else:  # Case 1.2
                lce.set(p_sim, None)
                prog = replay_from(p_sim, backlog + [entry])
                changed = prog.semantic_key() != p_sim.semantic_key()
                if changed:
                    last_change = m
                    records.append(IterationRecord(m, None, prog.descriptor(), None, "replay"))
                p_sim = p_last = prog
                streak = 0 if changed else streak + 1
                if _is_frozen(prog) or (
                    streak >= stability_window
                    and (cex_count > 0 or semantically_equal(prog.language, target))
                ):
                    status = CONVERGED
                    break
        else:
            verdict = check(p_sim.language, target, strategy)
            queries += 1
            records.append(
                IterationRecord(m, entry, p_sim.descriptor(), verdict.counterexample, "probe")
            )
            if not verdict.is_bot:  # Case 2.1: the probe's sole element
                cex_count += 1
                lce.set(p_last, verdict.counterexample)
                mu = 0
                probing = False
                prog = replay_from(p_last, backlog + [entry])
                records.append(IterationRecord(m, None, prog.descriptor(), None, "replay"))
                if prog.semantic_key() != p_last.semantic_key():
                    last_change = m
                p_sim = p_last = prog
                streak = 0
            else:  # Case 2.2
                mu += 1
                if mu >= len(rank):
                    raise InconsistentOracleError(
                        "probe sweep exhausted the universe without a counterexample"
                    )
                backlog.append(entry)
                p_sim = probe_program(rank[mu])

    final = p_last
    match = semantically_equal(final.language, target)
    if status is None:
        if not records:
            status = BUDGET_EXHAUSTED
        elif cex_count == 0 and not match:
            status = STALLED
        elif streak >= min(stability_window, len(records)) and match:
            status = CONVERGED
        else:
            status = BUDGET_EXHAUSTED

    return EngineRun(
        SIMULATED_MINCEGIS, records, final, status,
        last_change if status == CONVERGED else None,
        queries, 0, cex_count, stability_window, match,
        sim_state=SimState(lce, p_sim, p_last, mu, tuple(backlog), tau_done),
    )
