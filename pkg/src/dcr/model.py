"""Core data model for dynamic condition response graphs.

A graph is a finite event set wired together by four relations
(condition, response, include, exclude) and a labelling of events with
actions.  Runtime state is a marking: the sets of executed, pending and
currently included events.  The distributed variant adds roles and
principals with an assignment relation gating who may execute what.

Graph and marking values are immutable after construction and safe to
share across concurrent readers.  Event declaration order is preserved
and significant: it is the default rank order for the automaton
construction and the iteration order of every deterministic traversal.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

Pair = tuple[str, str]

_IDENTIFIER = re.compile(r"^[A-Za-z0-9_-]+$")


def _pair_set(pairs: Iterable[Iterable[str]]) -> frozenset[Pair]:
    return frozenset((a, b) for a, b in pairs)


@dataclass(frozen=True)
class Marking:
    """Runtime state triple: executed, pending-response and included events."""

    executed: frozenset[str] = frozenset()
    pending: frozenset[str] = frozenset()
    included: frozenset[str] = frozenset()

    @classmethod
    def of(
        cls,
        executed: Iterable[str] = (),
        pending: Iterable[str] = (),
        included: Iterable[str] = (),
    ) -> "Marking":
        return cls(frozenset(executed), frozenset(pending), frozenset(included))


@dataclass(frozen=True)
class DcrGraph:
    """A dynamic condition response graph with its initial marking.

    Relation pairs are oriented source-first: ``(c, t)`` in ``conditions``
    means c must have been executed (or be excluded) before t can run;
    ``(a, b)`` in ``responses`` means executing a obligates b; pairs in
    ``includes``/``excludes`` add/remove their target from the included
    set when the source executes.
    """

    events: tuple[str, ...]
    labeling: Mapping[str, str]
    conditions: frozenset[Pair]
    responses: frozenset[Pair]
    includes: frozenset[Pair]
    excludes: frozenset[Pair]
    initial_marking: Marking

    @classmethod
    def make(
        cls,
        events: Iterable[str],
        *,
        conditions: Iterable[Iterable[str]] = (),
        responses: Iterable[Iterable[str]] = (),
        includes: Iterable[Iterable[str]] = (),
        excludes: Iterable[Iterable[str]] = (),
        labels: Mapping[str, str] | None = None,
        marking: Marking | None = None,
    ) -> "DcrGraph":
        """Build a graph with the standard defaults.

        Labels default to the event's own identifier; the marking defaults
        to nothing executed, nothing pending and every event included.
        """
        event_tuple = tuple(events)
        labeling = {e: e for e in event_tuple}
        if labels:
            labeling.update(labels)
        if marking is None:
            marking = Marking(included=frozenset(event_tuple))
        return cls(
            events=event_tuple,
            labeling=labeling,
            conditions=_pair_set(conditions),
            responses=_pair_set(responses),
            includes=_pair_set(includes),
            excludes=_pair_set(excludes),
            initial_marking=marking,
        )

    @cached_property
    def event_set(self) -> frozenset[str]:
        return frozenset(self.events)

    @cached_property
    def declaration_index(self) -> dict[str, int]:
        return {e: i for i, e in enumerate(self.events)}

    @cached_property
    def condition_sources(self) -> dict[str, frozenset[str]]:
        """For each event, the events that must precede it."""
        return self._by_target(self.conditions)

    @cached_property
    def response_targets(self) -> dict[str, frozenset[str]]:
        return self._by_source(self.responses)

    @cached_property
    def include_targets(self) -> dict[str, frozenset[str]]:
        return self._by_source(self.includes)

    @cached_property
    def exclude_targets(self) -> dict[str, frozenset[str]]:
        return self._by_source(self.excludes)

    def action(self, event: str) -> str:
        return self.labeling[event]

    def _by_source(self, pairs: frozenset[Pair]) -> dict[str, frozenset[str]]:
        out: dict[str, set[str]] = {e: set() for e in self.events}
        for a, b in pairs:
            if a in out:
                out[a].add(b)
        return {e: frozenset(v) for e, v in out.items()}

    def _by_target(self, pairs: frozenset[Pair]) -> dict[str, frozenset[str]]:
        out: dict[str, set[str]] = {e: set() for e in self.events}
        for a, b in pairs:
            if b in out:
                out[b].add(a)
        return {e: frozenset(v) for e, v in out.items()}


@dataclass(frozen=True)
class DistributedDcrGraph:
    """A graph plus roles, principals and the role assignment relation.

    ``principal_assignments`` holds (principal, role) pairs and
    ``action_assignments`` holds (action, role) pairs; a principal may
    execute an event when some role appears in both for the principal and
    the event's action.
    """

    graph: DcrGraph
    roles: tuple[str, ...] = ()
    principals: tuple[str, ...] = ()
    principal_assignments: frozenset[Pair] = frozenset()
    action_assignments: frozenset[Pair] = frozenset()

    @classmethod
    def make(
        cls,
        graph: DcrGraph,
        roles: Iterable[str] = (),
        principals: Iterable[str] = (),
        principal_assignments: Iterable[Iterable[str]] = (),
        action_assignments: Iterable[Iterable[str]] = (),
    ) -> "DistributedDcrGraph":
        return cls(
            graph=graph,
            roles=tuple(roles),
            principals=tuple(principals),
            principal_assignments=_pair_set(principal_assignments),
            action_assignments=_pair_set(action_assignments),
        )

    @classmethod
    def solo(
        cls, graph: DcrGraph, role: str = "any", principal: str = "anyone"
    ) -> "DistributedDcrGraph":
        """Wrap a plain graph so a single principal may execute every action."""
        actions = {graph.labeling[e] for e in graph.events}
        return cls.make(
            graph,
            roles=(role,),
            principals=(principal,),
            principal_assignments={(principal, role)},
            action_assignments={(a, role) for a in actions},
        )

    @cached_property
    def role_set(self) -> frozenset[str]:
        return frozenset(self.roles)

    @cached_property
    def principal_set(self) -> frozenset[str]:
        return frozenset(self.principals)

    @cached_property
    def roles_of_principal(self) -> dict[str, frozenset[str]]:
        out: dict[str, set[str]] = {p: set() for p in self.principals}
        for p, r in self.principal_assignments:
            out.setdefault(p, set()).add(r)
        return {p: frozenset(v) for p, v in out.items()}

    @cached_property
    def roles_of_action(self) -> dict[str, frozenset[str]]:
        out: dict[str, set[str]] = {}
        for a, r in self.action_assignments:
            out.setdefault(a, set()).add(r)
        return {a: frozenset(v) for a, v in out.items()}

    def witnessing_roles(self, principal: str, event: str) -> tuple[str, ...]:
        """Roles that let the principal execute the event, sorted by name."""
        action = self.graph.labeling[event]
        held = self.roles_of_principal.get(principal, frozenset())
        allowed = self.roles_of_action.get(action, frozenset())
        return tuple(sorted(held & allowed))


@dataclass(frozen=True)
class Finding:
    severity: str  # "error" or "warning"
    code: str
    message: str
    element: str = ""


@dataclass(frozen=True)
class ValidationReport:
    findings: tuple[Finding, ...] = ()

    @property
    def errors(self) -> tuple[Finding, ...]:
        return tuple(f for f in self.findings if f.severity == "error")

    @property
    def warnings(self) -> tuple[Finding, ...]:
        return tuple(f for f in self.findings if f.severity == "warning")

    @property
    def ok(self) -> bool:
        return not self.errors

    def codes(self) -> tuple[str, ...]:
        return tuple(f.code for f in self.findings)

    def merged(self, other: "ValidationReport") -> "ValidationReport":
        return ValidationReport(self.findings + other.findings)


class _Collector:
    def __init__(self) -> None:
        self.findings: list[Finding] = []

    def error(self, code: str, message: str, element: str = "") -> None:
        self.findings.append(Finding("error", code, message, element))

    def warning(self, code: str, message: str, element: str = "") -> None:
        self.findings.append(Finding("warning", code, message, element))

    def report(self) -> ValidationReport:
        return ValidationReport(tuple(self.findings))


def validate_graph(graph: DcrGraph) -> ValidationReport:
    """Structural validation of a graph.

    Errors: duplicate or malformed event identifiers, relation pairs or
    marking members naming undeclared events, and pairs present in both
    the include and the exclude relation (the dynamic inclusion map is a
    partial function, so conflicting input is a user error and is never
    silently resolved).  Warnings: events touched by no relation at all.
    """
    out = _Collector()
    seen: set[str] = set()
    for e in graph.events:
        if e in seen:
            out.error("duplicate-event", f"event '{e}' declared more than once", e)
        seen.add(e)
        if not _IDENTIFIER.match(e):
            out.error(
                "invalid-identifier",
                f"event id '{e}' is not a nonempty [A-Za-z0-9_-] token",
                e,
            )
    declared = graph.event_set
    for e in declared:
        if e not in graph.labeling:
            out.error("missing-label", f"event '{e}' has no action label", e)
    relations = (
        ("conditions", graph.conditions),
        ("responses", graph.responses),
        ("includes", graph.includes),
        ("excludes", graph.excludes),
    )
    for name, pairs in relations:
        for a, b in sorted(pairs):
            for end in (a, b):
                if end not in declared:
                    out.error(
                        "unknown-event",
                        f"{name} pair ({a},{b}) names undeclared event '{end}'",
                        f"{name}:{a}->{b}",
                    )
    for a, b in sorted(graph.includes & graph.excludes):
        out.error(
            "include-exclude-conflict",
            f"pair ({a},{b}) appears in both includes and excludes",
            f"{a}->{b}",
        )
    marking = graph.initial_marking
    for part, members in (
        ("executed", marking.executed),
        ("pending", marking.pending),
        ("included", marking.included),
    ):
        for e in sorted(members - declared):
            out.error(
                "unknown-event",
                f"marking set '{part}' names undeclared event '{e}'",
                f"marking:{part}:{e}",
            )
    related = set()
    for _, pairs in relations:
        for a, b in pairs:
            related.add(a)
            related.add(b)
    for e in graph.events:
        if e not in related:
            out.warning("no-relations", f"event '{e}' takes part in no relation", e)
    return out.report()


def validate_distributed(dist: DistributedDcrGraph) -> ValidationReport:
    """Validation of the role and principal layer.

    Assumes the underlying graph already validates; graph-level findings
    are not repeated here.  Errors: assignments naming undeclared roles,
    principals or actions, and duplicate role or principal declarations.
    Warnings: actions nobody is assigned to execute, and a nonempty
    action assignment with no principals at all.
    """
    out = _Collector()
    for kind, names in (("role", dist.roles), ("principal", dist.principals)):
        seen: set[str] = set()
        for n in names:
            if n in seen:
                out.error(f"duplicate-{kind}", f"{kind} '{n}' declared more than once", n)
            seen.add(n)
    actions = {dist.graph.labeling[e] for e in dist.graph.events}
    for p, r in sorted(dist.principal_assignments):
        if p not in dist.principal_set:
            out.error("unknown-principal", f"assignment ({p},{r}) names undeclared principal", p)
        if r not in dist.role_set:
            out.error("unknown-role", f"assignment ({p},{r}) names undeclared role", r)
    for a, r in sorted(dist.action_assignments):
        if a not in actions:
            out.error("unknown-action", f"assignment ({a},{r}) names unused action", a)
        if r not in dist.role_set:
            out.error("unknown-role", f"assignment ({a},{r}) names undeclared role", r)
    assigned_actions = {a for a, _ in dist.action_assignments}
    for a in sorted(actions - assigned_actions):
        out.warning("unassigned-action", f"action '{a}' has no role assignment", a)
    if dist.action_assignments and not dist.principals:
        out.warning("no-executors", "action assignments exist but no principals are declared")
    return out.report()
