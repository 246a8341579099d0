"""Execution semantics: enabledness, the transition rule, run acceptance.

All operations are pure; callers hand in a graph and a marking and get
fresh values back.  Finite runs are accepted when the final marking owes
nothing that is still included.  Infinite runs are represented as lassos
(finite prefix plus a repeated loop) and decided on the eventually
periodic marking sequence: an obligation is discharged when the owed
event is executed or drops out of the included set within one period.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    ConditionsUnmet,
    ExecutionError,
    LassoNotReplayable,
    NotIncluded,
    Unauthorized,
    UnknownEvent,
    UnknownPrincipal,
)
from .model import DcrGraph, DistributedDcrGraph, Marking


@dataclass(frozen=True)
class TransitionLabel:
    """Label of one execution step.

    ``principal`` and ``role`` are filled for role-gated execution on a
    distributed graph and stay None for plain execution.
    """

    event: str
    action: str
    principal: str | None = None
    role: str | None = None


FiniteRun = tuple[TransitionLabel, ...]


@dataclass(frozen=True)
class LassoRun:
    """Finite prefix plus a nonempty loop of event ids, repeated forever."""

    prefix: tuple[str, ...]
    loop: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "loop", tuple(self.loop))
        if not self.loop:
            raise ValueError("lasso loop must be nonempty")


def enabled_events(graph: DcrGraph, marking: Marking) -> frozenset[str]:
    """Events executable right now.

    An event qualifies when it is included and every *included* condition
    source has already been executed; excluded sources impose nothing.
    """
    out = set()
    for e in marking.included & graph.event_set:
        sources = graph.condition_sources.get(e, frozenset())
        if (sources & marking.included) <= marking.executed:
            out.add(e)
    return frozenset(out)


def blocking_conditions(graph: DcrGraph, marking: Marking, event: str) -> frozenset[str]:
    """The included-but-unexecuted condition sources holding an event back."""
    sources = graph.condition_sources.get(event, frozenset())
    return frozenset((sources & marking.included) - marking.executed)


def execute(graph: DcrGraph, marking: Marking, event: str) -> Marking:
    """Apply one execution step and return the successor marking.

    The pending update removes the executed event before adding its own
    response targets, so a self-response leaves the event owed again.
    """
    if event not in graph.event_set:
        raise UnknownEvent(event)
    if event not in marking.included:
        raise NotIncluded(event)
    blocking = blocking_conditions(graph, marking, event)
    if blocking:
        raise ConditionsUnmet(event, blocking)
    return Marking(
        executed=marking.executed | {event},
        pending=(marking.pending - {event}) | graph.response_targets[event],
        included=(marking.included | graph.include_targets[event])
        - graph.exclude_targets[event],
    )


def is_accepting_marking(marking: Marking) -> bool:
    """True when no pending response is still included."""
    return not (marking.pending & marking.included)


def replay(graph: DcrGraph, events: Sequence[str]) -> tuple[list[Marking], FiniteRun]:
    """Run a sequence of events from the initial marking.

    Returns the visited markings (one more than the events) and the
    labelled run.  A non-enabled step raises the underlying execution
    error with its ``step`` index filled in.
    """
    markings = [graph.initial_marking]
    labels: list[TransitionLabel] = []
    for i, event in enumerate(events):
        try:
            nxt = execute(graph, markings[-1], event)
        except ExecutionError as err:
            err.step = i
            raise
        labels.append(TransitionLabel(event, graph.labeling[event]))
        markings.append(nxt)
    return markings, tuple(labels)


def finite_run_accepting(graph: DcrGraph, events: Sequence[str]) -> bool:
    """True when the run replays and ends owing nothing that is included."""
    markings, _ = replay(graph, events)
    return is_accepting_marking(markings[-1])


def execute_as(
    dist: DistributedDcrGraph, marking: Marking, principal: str, event: str
) -> tuple[Marking, TransitionLabel]:
    """Role-gated execution by a principal.

    Enabledness is checked before authorization, mirroring the service
    behaviour: a blocked event is reported as blocked no matter who asks.
    When several roles witness the authorization the lexicographically
    least one goes on the label.
    """
    graph = dist.graph
    if event not in graph.event_set:
        raise UnknownEvent(event)
    if principal not in dist.principal_set:
        raise UnknownPrincipal(principal)
    nxt = execute(graph, marking, event)
    roles = dist.witnessing_roles(principal, event)
    if not roles:
        raise Unauthorized(principal, event)
    return nxt, TransitionLabel(event, graph.labeling[event], principal, roles[0])


def enabled_for(
    dist: DistributedDcrGraph, marking: Marking, principal: str
) -> frozenset[tuple[str, str, str]]:
    """All (event, action, role) triples the principal can execute now."""
    if principal not in dist.principal_set:
        raise UnknownPrincipal(principal)
    held = dist.roles_of_principal.get(principal, frozenset())
    out = set()
    for event in enabled_events(dist.graph, marking):
        action = dist.graph.labeling[event]
        for role in dist.roles_of_action.get(action, frozenset()) & held:
            out.add((event, action, role))
    return frozenset(out)


def replay_as(
    dist: DistributedDcrGraph, steps: Iterable[tuple[str, str]]
) -> tuple[list[Marking], FiniteRun]:
    """Replay (principal, event) steps from the initial marking."""
    markings = [dist.graph.initial_marking]
    labels: list[TransitionLabel] = []
    for i, (principal, event) in enumerate(steps):
        try:
            nxt, label = execute_as(dist, markings[-1], principal, event)
        except ExecutionError as err:
            err.step = i
            raise
        markings.append(nxt)
        labels.append(label)
    return markings, tuple(labels)


def lasso_run_accepting(graph: DcrGraph, lasso: LassoRun) -> bool:
    """Decide acceptance of the infinite run prefix . loop . loop . ...

    The loop is unrolled until the marking at a loop entry repeats, which
    the finite marking space guarantees.  Obligations inside the periodic
    segment must be discharged within one period (cyclically); earlier
    obligations get the remaining pre-periodic positions plus one full
    period as their window.
    """
    marking = graph.initial_marking
    pre: list[tuple[Marking, str]] = []
    for step, event in enumerate(lasso.prefix):
        try:
            nxt = execute(graph, marking, event)
        except ExecutionError as err:
            raise LassoNotReplayable(0, step, err) from err
        pre.append((marking, event))
        marking = nxt
    entry_pass: dict[Marking, int] = {}
    passes: list[list[tuple[Marking, str]]] = []
    while marking not in entry_pass:
        entry_pass[marking] = len(passes)
        trace: list[tuple[Marking, str]] = []
        for step, event in enumerate(lasso.loop):
            try:
                nxt = execute(graph, marking, event)
            except ExecutionError as err:
                raise LassoNotReplayable(len(passes) + 1, step, err) from err
            trace.append((marking, event))
            marking = nxt
        passes.append(trace)
    first = entry_pass[marking]
    for trace in passes[:first]:
        pre.extend(trace)
    periodic = [pos for trace in passes[first:] for pos in trace]
    return periodic_positions_accepting(pre, periodic)


def periodic_positions_accepting(
    pre: Sequence[tuple[Marking, str]], periodic: Sequence[tuple[Marking, str]]
) -> bool:
    """Quantified acceptance over an eventually periodic position sequence.

    Each position pairs the marking before a step with the event executed
    at that step.  An obligation at position i is discharged at a
    position j >= i where the owed event is executed or not included.
    """
    period = len(periodic)
    seq = list(pre) + list(periodic) + list(periodic)
    start = len(pre)

    def discharged(owed: str, j: int) -> bool:
        marking, event = seq[j]
        return event == owed or owed not in marking.included

    for i, (marking, _) in enumerate(pre):
        for owed in marking.pending & marking.included:
            if not any(discharged(owed, j) for j in range(i, start + period)):
                return False
    for k in range(period):
        i = start + k
        marking, _ = seq[i]
        for owed in marking.pending & marking.included:
            if not any(discharged(owed, j) for j in range(i, i + period)):
                return False
    return True


@dataclass(frozen=True)
class Lts:
    """Reachable transition system of a graph under the execution rule."""

    states: tuple[Marking, ...]
    initial: Marking
    transitions: tuple[tuple[Marking, TransitionLabel, Marking], ...]
    accepting: frozenset[Marking]
    truncated: bool


def explore_lts(graph: DcrGraph, max_states: int = 100_000) -> Lts:
    """Breadth-first closure of the reachable markings.

    States appear in discovery order with events tried in declaration
    order, so the result is canonical.  When expanding a state would push
    the state count past ``max_states`` the exploration stops there:
    the remaining frontier states are kept but their outgoing transitions
    are omitted, and ``truncated`` is set.
    """
    if max_states < 1:
        raise ValueError("max_states must be at least 1")
    initial = graph.initial_marking
    order: list[Marking] = [initial]
    seen = {initial}
    queue: deque[Marking] = deque([initial])
    edges: list[tuple[Marking, TransitionLabel, Marking]] = []
    truncated = False
    while queue:
        marking = queue.popleft()
        enabled = enabled_events(graph, marking)
        outs = [(e, execute(graph, marking, e)) for e in graph.events if e in enabled]
        fresh: list[Marking] = []
        for _, target in outs:
            if target not in seen and target not in fresh:
                fresh.append(target)
        if len(seen) + len(fresh) > max_states:
            truncated = True
            break
        for target in fresh:
            seen.add(target)
            order.append(target)
            queue.append(target)
        for event, target in outs:
            edges.append((marking, TransitionLabel(event, graph.labeling[event]), target))
    accepting = frozenset(m for m in order if is_accepting_marking(m))
    return Lts(tuple(order), initial, tuple(edges), accepting, truncated)
