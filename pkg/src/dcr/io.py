"""Reading and writing the JSON document formats.

A graph document carries the event list, optional labels, the four
relation pair lists, an optional marking and, when the graph is
distributed, roles, principals and the assignment maps.  Pair orientation
is fixed source-first.  Event structure documents mirror the same shape
with ``causality``/``conflict``/``initialResponses`` fields.

Shape problems raise :class:`DocumentError`; semantic problems are
reported through validation, and loading refuses documents whose report
contains errors.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Mapping

from .errors import DocumentError, GraphValidationError
from .eventstructures import Cres, PrimeEventStructure, validate_cres, validate_pes
from .model import (
    DcrGraph,
    DistributedDcrGraph,
    Marking,
    ValidationReport,
    validate_distributed,
    validate_graph,
)

_GRAPH_KEYS = {
    "events",
    "labels",
    "conditions",
    "responses",
    "includes",
    "excludes",
    "marking",
    "roles",
    "principals",
    "assignments",
}
_DISTRIBUTED_KEYS = {"roles", "principals", "assignments"}
_MARKING_KEYS = {"executed", "pending", "included"}
_PES_KEYS = {"events", "labels", "causality", "conflict"}
_CRES_KEYS = {"events", "labels", "causality", "conflict", "responses", "initialResponses"}


def _require_mapping(data: Any, what: str) -> Mapping:
    if not isinstance(data, Mapping):
        raise DocumentError(f"{what} must be a JSON object, got {type(data).__name__}")
    return data


def _string_list(data: Any, key: str) -> list[str]:
    if not isinstance(data, list) or not all(isinstance(x, str) for x in data):
        raise DocumentError(f"'{key}' must be a list of strings")
    return data


def _pair_list(data: Any, key: str) -> list[tuple[str, str]]:
    if not isinstance(data, list):
        raise DocumentError(f"'{key}' must be a list of two-element string pairs")
    pairs = []
    for item in data:
        if (
            not isinstance(item, list)
            or len(item) != 2
            or not all(isinstance(x, str) for x in item)
        ):
            raise DocumentError(f"'{key}' must be a list of two-element string pairs")
        pairs.append((item[0], item[1]))
    return pairs


def _string_map(data: Any, key: str) -> dict[str, str]:
    if not isinstance(data, Mapping) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in data.items()
    ):
        raise DocumentError(f"'{key}' must map strings to strings")
    return dict(data)


def _role_map(data: Any, key: str) -> dict[str, list[str]]:
    if not isinstance(data, Mapping):
        raise DocumentError(f"'{key}' must map names to role lists")
    out = {}
    for name, roles in data.items():
        if not isinstance(name, str):
            raise DocumentError(f"'{key}' must map names to role lists")
        out[name] = _string_list(roles, f"{key}.{name}")
    return out


def _check_keys(data: Mapping, allowed: set[str], what: str) -> None:
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise DocumentError(f"{what} has unknown keys: {', '.join(unknown)}")


def _marking_from(data: Any, events: tuple[str, ...]) -> Marking:
    if data is None:
        return Marking(included=frozenset(events))
    data = _require_mapping(data, "'marking'")
    _check_keys(data, _MARKING_KEYS, "'marking'")
    return Marking.of(
        executed=_string_list(data.get("executed", []), "marking.executed"),
        pending=_string_list(data.get("pending", []), "marking.pending"),
        included=_string_list(data.get("included", list(events)), "marking.included"),
    )


def graph_from_dict(data: Any) -> DcrGraph | DistributedDcrGraph:
    """Build a graph from a parsed document without semantic validation.

    Returns a distributed graph when any of the role-related keys is
    present, otherwise a plain one.
    """
    data = _require_mapping(data, "graph document")
    _check_keys(data, _GRAPH_KEYS, "graph document")
    if "events" not in data:
        raise DocumentError("graph document lacks the 'events' list")
    events = tuple(_string_list(data["events"], "events"))
    labels = _string_map(data.get("labels", {}), "labels")
    graph = DcrGraph.make(
        events,
        conditions=_pair_list(data.get("conditions", []), "conditions"),
        responses=_pair_list(data.get("responses", []), "responses"),
        includes=_pair_list(data.get("includes", []), "includes"),
        excludes=_pair_list(data.get("excludes", []), "excludes"),
        labels=labels,
        marking=_marking_from(data.get("marking"), events),
    )
    if not (_DISTRIBUTED_KEYS & set(data)):
        return graph
    assignments = _require_mapping(data.get("assignments", {}), "'assignments'")
    _check_keys(assignments, {"principals", "actions"}, "'assignments'")
    principal_map = _role_map(assignments.get("principals", {}), "assignments.principals")
    action_map = _role_map(assignments.get("actions", {}), "assignments.actions")
    return DistributedDcrGraph.make(
        graph,
        roles=_string_list(data.get("roles", []), "roles"),
        principals=_string_list(data.get("principals", []), "principals"),
        principal_assignments=[
            (p, r) for p, rs in principal_map.items() for r in rs
        ],
        action_assignments=[(a, r) for a, rs in action_map.items() for r in rs],
    )


def graph_to_dict(value: DcrGraph | DistributedDcrGraph) -> dict:
    """Serialize back to the document shape, with deterministic ordering."""
    dist = value if isinstance(value, DistributedDcrGraph) else None
    graph = dist.graph if dist else value
    doc: dict[str, Any] = {
        "events": list(graph.events),
        "labels": {e: graph.labeling[e] for e in graph.events},
        "conditions": [list(p) for p in sorted(graph.conditions)],
        "responses": [list(p) for p in sorted(graph.responses)],
        "includes": [list(p) for p in sorted(graph.includes)],
        "excludes": [list(p) for p in sorted(graph.excludes)],
        "marking": {
            "executed": sorted(graph.initial_marking.executed),
            "pending": sorted(graph.initial_marking.pending),
            "included": sorted(graph.initial_marking.included),
        },
    }
    if dist is not None:
        principal_map: dict[str, list[str]] = {}
        for p, r in sorted(dist.principal_assignments):
            principal_map.setdefault(p, []).append(r)
        action_map: dict[str, list[str]] = {}
        for a, r in sorted(dist.action_assignments):
            action_map.setdefault(a, []).append(r)
        doc["roles"] = list(dist.roles)
        doc["principals"] = list(dist.principals)
        doc["assignments"] = {"principals": principal_map, "actions": action_map}
    return doc


def validate_document(value: DcrGraph | DistributedDcrGraph) -> ValidationReport:
    """Full report: graph-level findings plus the distributed layer's."""
    if isinstance(value, DistributedDcrGraph):
        return validate_graph(value.graph).merged(validate_distributed(value))
    return validate_graph(value)


def loads_graph(text: str, *, check: bool = True) -> DcrGraph | DistributedDcrGraph:
    """Parse a JSON document; with ``check`` the validation gate applies."""
    value = graph_from_dict(json.loads(text))
    if check:
        report = validate_document(value)
        if not report.ok:
            raise GraphValidationError(report)
    return value


def load_graph(path: str | Path, *, check: bool = True) -> DcrGraph | DistributedDcrGraph:
    return loads_graph(Path(path).read_text(encoding="utf-8"), check=check)


def pes_from_dict(data: Any) -> PrimeEventStructure:
    data = _require_mapping(data, "event structure document")
    _check_keys(data, _PES_KEYS, "event structure document")
    if "events" not in data:
        raise DocumentError("event structure document lacks the 'events' list")
    return PrimeEventStructure.make(
        _string_list(data["events"], "events"),
        causality=_pair_list(data.get("causality", []), "causality"),
        conflict=_pair_list(data.get("conflict", []), "conflict"),
        labels=_string_map(data.get("labels", {}), "labels"),
    )


def pes_to_dict(pes: PrimeEventStructure) -> dict:
    return {
        "events": list(pes.events),
        "labels": {e: pes.labeling[e] for e in pes.events},
        "causality": [list(p) for p in sorted(pes.causality)],
        "conflict": [list(p) for p in sorted(pes.conflict)],
    }


def cres_from_dict(data: Any) -> Cres:
    data = _require_mapping(data, "condition response structure document")
    _check_keys(data, _CRES_KEYS, "condition response structure document")
    if "events" not in data:
        raise DocumentError("condition response structure document lacks the 'events' list")
    return Cres.make(
        _string_list(data["events"], "events"),
        initial_responses=_string_list(data.get("initialResponses", []), "initialResponses"),
        conditions=_pair_list(data.get("causality", []), "causality"),
        responses=_pair_list(data.get("responses", []), "responses"),
        conflict=_pair_list(data.get("conflict", []), "conflict"),
        labels=_string_map(data.get("labels", {}), "labels"),
    )


def cres_to_dict(cres: Cres) -> dict:
    return {
        "events": list(cres.events),
        "labels": {e: cres.labeling[e] for e in cres.events},
        "causality": [list(p) for p in sorted(cres.conditions)],
        "responses": [list(p) for p in sorted(cres.responses)],
        "conflict": [list(p) for p in sorted(cres.conflict)],
        "initialResponses": sorted(cres.initial_responses),
    }


def load_pes(path: str | Path, *, check: bool = True) -> PrimeEventStructure:
    pes = pes_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
    if check:
        report = validate_pes(pes)
        if not report.ok:
            raise GraphValidationError(report)
    return pes


def load_cres(path: str | Path, *, check: bool = True) -> Cres:
    cres = cres_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
    if check:
        report = validate_cres(cres)
        if not report.ok:
            raise GraphValidationError(report)
    return cres
