"""Finite prime event structures and their condition-response extension.

A prime event structure orders events causally and rules out combinations
through a symmetric, hereditary conflict relation; each event occurs at
most once.  The condition-response extension adds a response relation and
a set of initially owed events, giving runs an acceptance criterion:
every owed event must eventually occur or fall into conflict with
something that did.

Three encodings connect these models to condition response graphs: the
plain and the fairness-preserving embedding of event structures, and the
conflict encoding of a condition-response structure as a graph in which
every event excludes itself and conflicting events exclude each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import InvalidRun, RepeatedEvent
from .model import (
    DcrGraph,
    Marking,
    Pair,
    ValidationReport,
    _Collector,
    _pair_set,
)


def _reachability(events: Sequence[str], pairs: frozenset[Pair]) -> dict[str, frozenset[str]]:
    """For each event, everything strictly reachable through the pairs."""
    direct: dict[str, set[str]] = {e: set() for e in events}
    for a, b in pairs:
        if a in direct:
            direct[a].add(b)
    out: dict[str, frozenset[str]] = {}
    for e in events:
        seen: set[str] = set()
        stack = list(direct.get(e, ()))
        while stack:
            x = stack.pop()
            if x in seen or x not in direct:
                continue
            seen.add(x)
            stack.extend(direct[x])
        out[e] = frozenset(seen)
    return out


@dataclass(frozen=True)
class PrimeEventStructure:
    """Events with a causal order and a symmetric conflict relation.

    ``causality`` holds arbitrary generating pairs; the reflexive and
    transitive closure is computed on demand.  ``conflict`` lists each
    unordered pair once; symmetry is implicit.
    """

    events: tuple[str, ...]
    causality: frozenset[Pair]
    conflict: frozenset[Pair]
    labeling: Mapping[str, str]

    @classmethod
    def make(
        cls,
        events: Iterable[str],
        *,
        causality: Iterable[Iterable[str]] = (),
        conflict: Iterable[Iterable[str]] = (),
        labels: Mapping[str, str] | None = None,
    ) -> "PrimeEventStructure":
        event_tuple = tuple(events)
        labeling = {e: e for e in event_tuple}
        if labels:
            labeling.update(labels)
        return cls(event_tuple, _pair_set(causality), _pair_set(conflict), labeling)

    @cached_property
    def event_set(self) -> frozenset[str]:
        return frozenset(self.events)

    @cached_property
    def strict_below(self) -> dict[str, frozenset[str]]:
        """The cause set of each event under the transitive closure."""
        above = _reachability(self.events, self.causality)
        out: dict[str, set[str]] = {e: set() for e in self.events}
        for e, reach in above.items():
            for x in reach:
                if x != e:
                    out[x].add(e)
        return {e: frozenset(v) for e, v in out.items()}

    @cached_property
    def conflict_closed(self) -> frozenset[Pair]:
        """Both orientations of every declared conflict pair."""
        out = set()
        for a, b in self.conflict:
            out.add((a, b))
            out.add((b, a))
        return frozenset(out)

    def in_conflict(self, a: str, b: str) -> bool:
        return (a, b) in self.conflict_closed

    @cached_property
    def strict_order(self) -> frozenset[Pair]:
        """All pairs (a, b) with a strictly below b in the closure."""
        return frozenset(
            (a, b) for b, causes in self.strict_below.items() for a in causes
        )


@dataclass(frozen=True)
class Cres:
    """A prime event structure extended with responses and initial obligations."""

    events: tuple[str, ...]
    initial_responses: frozenset[str]
    conditions: frozenset[Pair]
    responses: frozenset[Pair]
    conflict: frozenset[Pair]
    labeling: Mapping[str, str]

    @classmethod
    def make(
        cls,
        events: Iterable[str],
        *,
        initial_responses: Iterable[str] = (),
        conditions: Iterable[Iterable[str]] = (),
        responses: Iterable[Iterable[str]] = (),
        conflict: Iterable[Iterable[str]] = (),
        labels: Mapping[str, str] | None = None,
    ) -> "Cres":
        event_tuple = tuple(events)
        labeling = {e: e for e in event_tuple}
        if labels:
            labeling.update(labels)
        return cls(
            event_tuple,
            frozenset(initial_responses),
            _pair_set(conditions),
            _pair_set(responses),
            _pair_set(conflict),
            labeling,
        )

    @cached_property
    def underlying(self) -> PrimeEventStructure:
        return PrimeEventStructure(self.events, self.conditions, self.conflict, self.labeling)

    @cached_property
    def response_targets(self) -> dict[str, frozenset[str]]:
        out: dict[str, set[str]] = {e: set() for e in self.events}
        for a, b in self.responses:
            if a in out:
                out[a].add(b)
        return {e: frozenset(v) for e, v in out.items()}


def validate_pes(pes: PrimeEventStructure) -> ValidationReport:
    """Check the event structure axioms.

    Errors: duplicate or undeclared events, a causality cycle (the
    closure must stay antisymmetric), a reflexive conflict pair, and
    conflict pairs whose hereditary consequences are missing: a conflict
    with an event propagates to everything above it.
    """
    out = _Collector()
    seen: set[str] = set()
    for e in pes.events:
        if e in seen:
            out.error("duplicate-event", f"event '{e}' declared more than once", e)
        seen.add(e)
    declared = pes.event_set
    for name, pairs in (("causality", pes.causality), ("conflict", pes.conflict)):
        for a, b in sorted(pairs):
            for end in (a, b):
                if end not in declared:
                    out.error(
                        "unknown-event",
                        f"{name} pair ({a},{b}) names undeclared event '{end}'",
                        f"{name}:{a}-{b}",
                    )
    if not out.findings:
        reach = _reachability(pes.events, pes.causality)
        for e in pes.events:
            if e in reach[e]:
                out.error("causality-cycle", f"event '{e}' causally depends on itself", e)
        for a, b in sorted(pes.conflict):
            if a == b:
                out.error("conflict-irreflexive", f"event '{a}' conflicts with itself", a)
        if not out.findings:
            closed = pes.conflict_closed
            below = pes.strict_below
            for a, b in sorted(closed):
                for c in sorted(pes.events):
                    if b not in below[c] or (a, c) in closed:
                        continue
                    if a == c:
                        # propagating would force a into conflict with itself
                        out.error(
                            "conflict-heredity",
                            f"conflict ({a},{b}) with '{b}' below '{a}' forces a self-conflict",
                            f"{a}-{b}",
                        )
                    else:
                        out.error(
                            "conflict-heredity",
                            f"conflict ({a},{b}) must propagate to '{c}' above '{b}'",
                            f"{a}-{c}",
                        )
    return out.report()


def validate_cres(cres: Cres) -> ValidationReport:
    """Underlying structure axioms plus acyclicity of conditions and responses."""
    report = validate_pes(cres.underlying)
    out = _Collector()
    declared = frozenset(cres.events)
    for a, b in sorted(cres.responses):
        for end in (a, b):
            if end not in declared:
                out.error(
                    "unknown-event",
                    f"responses pair ({a},{b}) names undeclared event '{end}'",
                    f"responses:{a}-{b}",
                )
    for e in sorted(cres.initial_responses - declared):
        out.error("unknown-event", f"initial response '{e}' is undeclared", e)
    if report.ok and not out.findings:
        union = cres.conditions | cres.responses
        reach = _reachability(cres.events, union)
        on_cycle = sorted(e for e in cres.events if e in reach[e])
        if on_cycle:
            out.error(
                "condition-response-cycle",
                "conditions and responses together form a cycle through "
                + ",".join(on_cycle),
                on_cycle[0],
            )
    return report.merged(out.report())


def is_configuration(pes: PrimeEventStructure, events: Iterable[str]) -> bool:
    """True when the set is conflict-free and closed under causes."""
    chosen = frozenset(events)
    for e in chosen:
        if not pes.strict_below[e] <= chosen:
            return False
    for a in chosen:
        for b in chosen:
            if pes.in_conflict(a, b):
                return False
    return True


def _check_no_repeats(run: Sequence[str]) -> None:
    seen: set[str] = set()
    for e in run:
        if e in seen:
            raise RepeatedEvent(e)
        seen.add(e)


def pes_run_valid(pes: PrimeEventStructure, run: Sequence[str]) -> bool:
    """True when every prefix of the run forms a configuration."""
    _check_no_repeats(run)
    done: set[str] = set()
    for e in run:
        if e not in pes.event_set:
            return False
        if not pes.strict_below[e] <= done:
            return False
        if any(pes.in_conflict(e, x) for x in done):
            return False
        done.add(e)
    return True


def pes_run_maximal(pes: PrimeEventStructure, run: Sequence[str]) -> bool:
    """True when the run is valid and cannot be extended.

    An extension would be an event outside the run whose causes all
    occurred and which conflicts with nothing that occurred.
    """
    if not pes_run_valid(pes, run):
        return False
    done = frozenset(run)
    for e in pes.events:
        if e in done:
            continue
        if pes.strict_below[e] <= done and not any(pes.in_conflict(e, x) for x in done):
            return False
    return True


def cres_run_accepting(cres: Cres, run: Sequence[str]) -> bool:
    """Acceptance of a finite run of a condition-response structure.

    Every initial obligation must occur in the run or conflict with some
    event of the run.  Every obligation raised along the run must occur
    strictly later than the occurrence that raised it, or conflict with
    some event of the run; an earlier occurrence of the owed event does
    not discharge it.
    """
    pes = cres.underlying
    if not pes_run_valid(pes, run):
        raise InvalidRun(f"{list(run)} is not a run of the structure")
    occurred = list(run)
    occurred_set = frozenset(occurred)

    def conflicts_with_run(owed: str) -> bool:
        return any(pes.in_conflict(owed, x) for x in occurred)

    for owed in cres.initial_responses:
        if owed not in occurred_set and not conflicts_with_run(owed):
            return False
    position = {e: i for i, e in enumerate(occurred)}
    for i, e in enumerate(occurred):
        for owed in cres.response_targets.get(e, frozenset()):
            happened_later = owed in position and position[owed] > i
            if not happened_later and not conflicts_with_run(owed):
                return False
    return True


def pes_to_cres_plain(pes: PrimeEventStructure) -> Cres:
    """Embedding with no obligations at all; every run is accepting."""
    return Cres(
        events=pes.events,
        initial_responses=frozenset(),
        conditions=pes.causality,
        responses=frozenset(),
        conflict=pes.conflict,
        labeling=pes.labeling,
    )


def pes_to_cres_fair(pes: PrimeEventStructure) -> Cres:
    """Embedding whose accepting runs are exactly the maximal runs.

    Every causal edge doubles as a response and the cause-free events are
    owed from the start, so a run may only stop once nothing enabled is
    left unexecuted and unconflicted.
    """
    return Cres(
        events=pes.events,
        initial_responses=frozenset(e for e in pes.events if not pes.strict_below[e]),
        conditions=pes.causality,
        responses=pes.strict_order,
        conflict=pes.conflict,
        labeling=pes.labeling,
    )


def cres_to_dcrg(cres: Cres) -> DcrGraph:
    """Encode a condition-response structure as a graph.

    Conflicts become mutual exclusions, every event excludes itself so it
    can run at most once, and the initial marking owes exactly the
    initial responses with everything included.
    """
    excludes = {(e, e) for e in cres.events}
    for a, b in cres.conflict:
        excludes.add((a, b))
        excludes.add((b, a))
    return DcrGraph(
        events=cres.events,
        labeling=dict(cres.labeling),
        conditions=cres.conditions,
        responses=cres.responses,
        includes=frozenset(),
        excludes=frozenset(excludes),
        initial_marking=Marking(
            executed=frozenset(),
            pending=cres.initial_responses,
            included=frozenset(cres.events),
        ),
    )
