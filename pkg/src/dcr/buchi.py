"""Automaton-level acceptance for condition response graphs.

The construction turns a distributed graph into an automaton over words
of (event, (principal, action, role)) letters plus a silent delay letter.
States carry the marking, a rank index and an accept flag.  A fixed total
order (the rank) schedules which owed event must be discharged next: a
step is flagged accepting when it leaves no included obligations, or when
it executes or excludes the lowest-ranked obligation above the current
index (wrapping around to the lowest obligation overall when none sits
above the index).  The delay letter never moves the marking or the index;
it re-derives the flag from the marking, so a state owing nothing can be
revisited as accepting forever.

This gives an independent decision procedure for run acceptance that the
direct marking semantics can be compared against, which is what
:func:`compare_acceptance` does exhaustively at small bounds.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence, Union

from .errors import LassoNotReplayable, OrderNotPermutation, StateBoundExceeded
from .model import DistributedDcrGraph, Marking
from .semantics import (
    LassoRun,
    enabled_events,
    execute,
    is_accepting_marking,
    periodic_positions_accepting,
)

TAU = "tau"

Triple = tuple[str, str, str]  # (principal, action, role)
Letter = Union[str, tuple[str, Triple]]  # TAU or (event, triple)


@dataclass(frozen=True)
class BuchiState:
    marking: Marking
    index: int
    flag: int


@dataclass(frozen=True)
class BuchiTransition:
    source: BuchiState
    letter: Letter
    target: BuchiState


@dataclass(frozen=True)
class BuchiAutomaton:
    """Reachable fragment of the automaton for one graph and rank order."""

    states: tuple[BuchiState, ...]
    initial: BuchiState
    transitions: tuple[BuchiTransition, ...]
    accepting: frozenset[BuchiState]
    rank_order: tuple[str, ...]
    letters_by_event: Mapping[str, tuple[Triple, ...]]

    @cached_property
    def event_successors(self) -> dict[BuchiState, dict[str, BuchiState]]:
        out: dict[BuchiState, dict[str, BuchiState]] = {s: {} for s in self.states}
        for t in self.transitions:
            if t.letter != TAU:
                event, _ = t.letter
                out[t.source][event] = t.target
        return out

    @cached_property
    def _tau_successors(self) -> dict[BuchiState, BuchiState]:
        return {
            t.source: t.target for t in self.transitions if t.letter == TAU
        }

    def successor(self, state: BuchiState, event: str) -> BuchiState | None:
        return self.event_successors.get(state, {}).get(event)

    def tau_successor(self, state: BuchiState) -> BuchiState:
        return self._tau_successors[state]

    @cached_property
    def alphabet(self) -> frozenset[Letter]:
        letters: set[Letter] = {TAU}
        for event, triples in self.letters_by_event.items():
            for triple in triples:
                letters.add((event, triple))
        return frozenset(letters)


def _authorized_letters(dist: DistributedDcrGraph) -> dict[str, tuple[Triple, ...]]:
    out: dict[str, tuple[Triple, ...]] = {}
    for event in dist.graph.events:
        action = dist.graph.labeling[event]
        triples = []
        for role in sorted(dist.roles_of_action.get(action, frozenset())):
            for principal in sorted(dist.principals):
                if (principal, role) in dist.principal_assignments:
                    triples.append((principal, action, role))
        out[event] = tuple(sorted(triples))
    return out


def build_buchi(
    dist: DistributedDcrGraph,
    order: Sequence[str] | None = None,
    *,
    max_states: int = 1_000_000,
) -> BuchiAutomaton:
    """Construct the reachable automaton fragment.

    ``order`` must be a permutation of the events and defaults to the
    declaration order.  On a graph with no events the index is pinned at
    1 and only the delay letter remains.
    """
    graph = dist.graph
    declared = graph.events
    rank_order = declared if order is None else tuple(order)
    if sorted(rank_order) != sorted(set(declared)) or len(rank_order) != len(declared):
        raise OrderNotPermutation(rank_order)
    rank = {e: i + 1 for i, e in enumerate(rank_order)}
    letters = _authorized_letters(dist)

    def flag_of(marking: Marking) -> int:
        return 1 if is_accepting_marking(marking) else 0

    initial = BuchiState(graph.initial_marking, 1, flag_of(graph.initial_marking))
    states: set[BuchiState] = {initial}
    discovery: list[BuchiState] = [initial]
    queue: deque[BuchiState] = deque([initial])
    transitions: list[BuchiTransition] = []

    def note(state: BuchiState) -> None:
        if state not in states:
            if len(states) >= max_states:
                raise StateBoundExceeded(max_states)
            states.add(state)
            discovery.append(state)
            queue.append(state)

    while queue:
        state = queue.popleft()
        marking = state.marking
        tau_target = BuchiState(marking, state.index, flag_of(marking))
        note(tau_target)
        transitions.append(BuchiTransition(state, TAU, tau_target))
        owed_before = marking.included & marking.pending
        above_index = {e for e in owed_before if rank[e] > state.index}
        min_above = min(above_index, key=rank.__getitem__) if above_index else None
        min_owed = min(owed_before, key=rank.__getitem__) if owed_before else None
        enabled = enabled_events(graph, marking)
        for event in declared:
            if event not in enabled or not letters[event]:
                continue
            nxt = execute(graph, marking, event)
            owed_after = nxt.included & nxt.pending
            discharged = (owed_before - owed_after) | {event}
            if not owed_after:
                flag = 1
            elif min_above is not None and min_above in discharged:
                flag = 1
            elif min_above is None and min_owed is not None and min_owed in discharged:
                flag = 1
            else:
                flag = 0
            if min_above is not None and min_above in discharged:
                index = rank[min_above]
            elif min_above is None and min_owed is not None and min_owed in discharged:
                index = rank[min_owed]
            else:
                index = state.index
            target = BuchiState(nxt, index, flag)
            note(target)
            for triple in letters[event]:
                transitions.append(BuchiTransition(state, (event, triple), target))

    return BuchiAutomaton(
        states=tuple(discovery),
        initial=initial,
        transitions=tuple(transitions),
        accepting=frozenset(s for s in discovery if s.flag == 1),
        rank_order=rank_order,
        letters_by_event=letters,
    )


def buchi_accepts_finite(automaton: BuchiAutomaton, run: Sequence[str]) -> bool:
    """Accept the word followed by delays forever.

    The delay successor keeps marking and index, so the infinite word is
    accepted exactly when the run is a valid transition sequence and the
    final state's delay successor is accepting.  Non-replayable runs are
    rejected, not raised.
    """
    state = automaton.initial
    for event in run:
        nxt = automaton.successor(state, event)
        if nxt is None:
            return False
        state = nxt
    return automaton.tau_successor(state).flag == 1


def _cycle_states(
    automaton: BuchiAutomaton, start: BuchiState, loop: Sequence[str]
) -> list[BuchiState]:
    """States visited in the periodic part; raises when unrolling fails."""
    entry_pass: dict[BuchiState, int] = {}
    passes: list[list[BuchiState]] = []
    state = start
    while state not in entry_pass:
        entry_pass[state] = len(passes)
        trace: list[BuchiState] = []
        for step, event in enumerate(loop):
            nxt = automaton.successor(state, event)
            if nxt is None:
                raise LassoNotReplayable(len(passes) + 1, step)
            trace.append(nxt)
            state = nxt
        passes.append(trace)
    first = entry_pass[state]
    return [s for trace in passes[first:] for s in trace]


def _cycle_accepting(cycle: Iterable[BuchiState]) -> bool:
    # a delay can be inserted once per period wherever the marking owes
    # nothing, which yields an accepting visit every cycle
    for state in cycle:
        if state.flag == 1 or is_accepting_marking(state.marking):
            return True
    return False


def buchi_accepts_lasso(automaton: BuchiAutomaton, lasso: LassoRun) -> bool:
    """Accept the infinite word prefix . loop . loop . ...

    Unrolls until the automaton state at a loop entry repeats and accepts
    when the periodic part visits an accepting state, or a state whose
    marking owes nothing (a delay visit to the accepting copy can then be
    inserted every period without disturbing the remaining word).
    """
    state = automaton.initial
    for step, event in enumerate(lasso.prefix):
        nxt = automaton.successor(state, event)
        if nxt is None:
            raise LassoNotReplayable(0, step)
        state = nxt
    cycle = _cycle_states(automaton, state, lasso.loop)
    return _cycle_accepting(cycle)


@dataclass(frozen=True)
class Disagreement:
    kind: str  # "enabled-set", "finite" or "lasso"
    run: tuple[str, ...]
    loop: tuple[str, ...] | None
    engine_verdict: object
    automaton_verdict: object


@dataclass(frozen=True)
class ComparisonReport:
    finite_runs: int
    lassos: int
    disagreements: tuple[Disagreement, ...]
    run_bound: int
    lasso_bound: int

    @property
    def ok(self) -> bool:
        return not self.disagreements


def compare_acceptance(
    dist: DistributedDcrGraph,
    run_bound: int,
    lasso_bound: int,
    order: Sequence[str] | None = None,
    *,
    max_states: int = 1_000_000,
) -> ComparisonReport:
    """Exhaustively cross-check marking semantics against the automaton.

    Walks both structures jointly over every replayable run up to
    ``run_bound``, comparing enabled-event sets and finite acceptance at
    each point, and checks every lasso with prefix and loop up to
    ``lasso_bound`` for agreement on infinite acceptance (including
    agreement on which lassos are replayable at all).  An empty
    disagreement list means the two decision procedures coincide on the
    whole bounded language.
    """
    if run_bound < 1 or lasso_bound < 1:
        raise ValueError("bounds must be at least 1")
    graph = dist.graph
    automaton = build_buchi(dist, order, max_states=max_states)
    letters = automaton.letters_by_event

    step_cache: dict[tuple[Marking, str], Marking] = {}
    enabled_cache: dict[Marking, frozenset[str]] = {}

    def enabled(marking: Marking) -> frozenset[str]:
        value = enabled_cache.get(marking)
        if value is None:
            value = frozenset(
                e for e in enabled_events(graph, marking) if letters[e]
            )
            enabled_cache[marking] = value
        return value

    def step(marking: Marking, event: str) -> Marking:
        key = (marking, event)
        value = step_cache.get(key)
        if value is None:
            value = execute(graph, marking, event)
            step_cache[key] = value
        return value

    NOT_REPLAYABLE = "not-replayable"

    def engine_lasso_verdict(marking: Marking, loop: tuple[str, ...]):
        entry_pass: dict[Marking, int] = {}
        passes: list[list[tuple[Marking, str]]] = []
        current = marking
        while current not in entry_pass:
            entry_pass[current] = len(passes)
            trace: list[tuple[Marking, str]] = []
            for event in loop:
                if event not in enabled(current):
                    return NOT_REPLAYABLE
                trace.append((current, event))
                current = step(current, event)
            passes.append(trace)
        periodic = [pos for trace in passes[entry_pass[current]:] for pos in trace]
        # obligations before the periodic part are subsumed: an obligation
        # never discharged stays owed and included through every periodic
        # position, where the periodic window already rejects it
        return periodic_positions_accepting([], periodic)

    def automaton_lasso_verdict(state: BuchiState, loop: tuple[str, ...]):
        try:
            cycle = _cycle_states(automaton, state, loop)
        except LassoNotReplayable:
            return NOT_REPLAYABLE
        return _cycle_accepting(cycle)

    def loop_words(marking: Marking):
        stack: list[tuple[tuple[str, ...], Marking]] = [((), marking)]
        while stack:
            word, current = stack.pop()
            for event in graph.events:
                if event not in enabled(current):
                    continue
                extended = word + (event,)
                yield extended
                if len(extended) < lasso_bound:
                    stack.append((extended, step(current, event)))

    disagreements: list[Disagreement] = []
    finite_runs = 0
    lassos = 0
    engine_verdicts: dict[tuple[Marking, tuple[str, ...]], object] = {}
    automaton_verdicts: dict[tuple[BuchiState, tuple[str, ...]], object] = {}
    lasso_seen: set[tuple[BuchiState, tuple[str, ...]]] = set()

    stack: list[tuple[tuple[str, ...], Marking, BuchiState]] = [
        ((), graph.initial_marking, automaton.initial)
    ]
    while stack:
        run, marking, state = stack.pop()
        finite_runs += 1
        engine_enabled = enabled(marking)
        automaton_enabled = frozenset(automaton.event_successors.get(state, {}))
        if engine_enabled != automaton_enabled:
            disagreements.append(
                Disagreement(
                    "enabled-set",
                    run,
                    None,
                    tuple(sorted(engine_enabled)),
                    tuple(sorted(automaton_enabled)),
                )
            )
        engine_accepts = is_accepting_marking(marking)
        automaton_accepts = automaton.tau_successor(state).flag == 1
        if engine_accepts != automaton_accepts:
            disagreements.append(
                Disagreement("finite", run, None, engine_accepts, automaton_accepts)
            )
        if len(run) <= lasso_bound:
            for word in loop_words(marking):
                key = (state, word)
                if key in lasso_seen:
                    continue
                lasso_seen.add(key)
                lassos += 1
                engine_key = (marking, word)
                if engine_key not in engine_verdicts:
                    engine_verdicts[engine_key] = engine_lasso_verdict(marking, word)
                if key not in automaton_verdicts:
                    automaton_verdicts[key] = automaton_lasso_verdict(state, word)
                engine_v = engine_verdicts[engine_key]
                automaton_v = automaton_verdicts[key]
                if engine_v != automaton_v:
                    disagreements.append(
                        Disagreement("lasso", run, word, engine_v, automaton_v)
                    )
        if len(run) < run_bound:
            for event in graph.events:
                if event not in engine_enabled or event not in automaton_enabled:
                    continue
                stack.append(
                    (run + (event,), step(marking, event), automaton.successor(state, event))
                )
    return ComparisonReport(
        finite_runs=finite_runs,
        lassos=lassos,
        disagreements=tuple(disagreements),
        run_bound=run_bound,
        lasso_bound=lasso_bound,
    )
