"""Command line surface of the engine.

Exit codes: 0 on success, 1 on a domain failure (validation errors,
rejected or non-replayable runs, unknown principals), 2 on I/O or parse
failures.  All output is deterministic for identical inputs: identifier
lists print sorted and traversals run in declaration order.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .buchi import TAU, build_buchi
from .dot import buchi_dot, lts_dot
from .errors import DcrError, DocumentError, GraphValidationError
from .io import graph_from_dict, load_graph, validate_document
from .model import DcrGraph, DistributedDcrGraph
from .semantics import (
    LassoRun,
    blocking_conditions,
    enabled_events,
    enabled_for,
    execute,
    execute_as,
    explore_lts,
    is_accepting_marking,
    lasso_run_accepting,
)

OK = 0
DOMAIN_FAILURE = 1
IO_FAILURE = 2


def _format_marking(marking) -> str:
    def fmt(ids):
        return "{" + ",".join(sorted(ids)) + "}"

    return (
        f"executed={fmt(marking.executed)} "
        f"pending={fmt(marking.pending)} "
        f"included={fmt(marking.included)}"
    )


def _load(path: str, *, check: bool = True):
    return load_graph(path, check=check)


def _plain(value) -> DcrGraph:
    return value.graph if isinstance(value, DistributedDcrGraph) else value


def _as_distributed(value) -> DistributedDcrGraph:
    if isinstance(value, DistributedDcrGraph):
        return value
    return DistributedDcrGraph.solo(value)


def _parse_steps(tokens):
    """Each token is an event id, or principal:event for role-gated steps."""
    steps = []
    for token in tokens:
        if ":" in token:
            principal, _, event = token.partition(":")
            steps.append((principal, event))
        else:
            steps.append((None, token))
    return steps


def cmd_validate(args) -> int:
    try:
        value = graph_from_dict(json.loads(Path(args.file).read_text(encoding="utf-8")))
    except json.JSONDecodeError as err:
        print(f"parse error at line {err.lineno}, column {err.colno}: {err.msg}", file=sys.stderr)
        return IO_FAILURE
    except DocumentError as err:
        print(f"document error: {err}", file=sys.stderr)
        return IO_FAILURE
    report = validate_document(value)
    for finding in report.findings:
        location = f" [{finding.element}]" if finding.element else ""
        print(f"{finding.severity} {finding.code}: {finding.message}{location}")
    if report.ok:
        print(f"ok: {len(report.warnings)} warning(s)")
        return OK
    return DOMAIN_FAILURE


def cmd_enabled(args) -> int:
    value = _load(args.file)
    graph = _plain(value)
    marking = graph.initial_marking
    if args.principal is not None:
        if not isinstance(value, DistributedDcrGraph):
            print("graph declares no principals", file=sys.stderr)
            return DOMAIN_FAILURE
        triples = enabled_for(value, marking, args.principal)
        by_event = {}
        for event, action, role in sorted(triples):
            by_event.setdefault(event, (action, role))
        for event in graph.events:
            if event in by_event:
                action, role = by_event[event]
                print(f"{event}\t{action}\t{role}")
    else:
        enabled = enabled_events(graph, marking)
        for event in graph.events:
            if event in enabled:
                print(f"{event}\t{graph.labeling[event]}")
    if args.verbose:
        enabled = enabled_events(graph, marking)
        for event in graph.events:
            if event in enabled:
                continue
            if event not in marking.included:
                print(f"{event}\t{graph.labeling[event]}\texcluded")
            else:
                blocking = ",".join(sorted(blocking_conditions(graph, marking, event)))
                print(f"{event}\t{graph.labeling[event]}\tblocked by {{{blocking}}}")
    return OK


def _run_steps(value, steps) -> tuple[int, object]:
    """Execute parsed steps, printing every marking; returns (code, final)."""
    graph = _plain(value)
    marking = graph.initial_marking
    print(f"0\t{_format_marking(marking)}")
    for i, (principal, event) in enumerate(steps):
        try:
            if principal is None:
                marking = execute(graph, marking, event)
            else:
                dist = _as_distributed(value)
                marking, _ = execute_as(dist, marking, principal, event)
        except DcrError as err:
            print(f"error at step {i}: {err}", file=sys.stderr)
            return DOMAIN_FAILURE, None
        print(f"{i + 1}\t{_format_marking(marking)}")
    return OK, marking


def cmd_exec(args) -> int:
    value = _load(args.file)
    code, marking = _run_steps(value, _parse_steps(args.events))
    if code != OK:
        return code
    accepting = is_accepting_marking(marking)
    print("ACCEPTING" if accepting else "NOT-ACCEPTING")
    return OK if accepting else DOMAIN_FAILURE


def cmd_check_run(args) -> int:
    value = _load(args.file)
    run_steps = _parse_steps(args.run.split(",")) if args.run else []
    if args.loop is None:
        code, marking = _run_steps(value, run_steps)
        if code != OK:
            return code
        accepting = is_accepting_marking(marking)
    else:
        loop_steps = _parse_steps(args.loop.split(","))
        code, _ = _run_steps(value, run_steps)
        if code != OK:
            return code
        graph = _plain(value)
        lasso = LassoRun(
            tuple(e for _, e in run_steps), tuple(e for _, e in loop_steps)
        )
        try:
            accepting = lasso_run_accepting(graph, lasso)
        except DcrError as err:
            print(f"error: {err}", file=sys.stderr)
            return DOMAIN_FAILURE
    print("ACCEPTING" if accepting else "NOT-ACCEPTING")
    return OK if accepting else DOMAIN_FAILURE


def cmd_explore(args) -> int:
    value = _load(args.file)
    lts = explore_lts(_plain(value), max_states=args.max_states)
    print(f"states: {len(lts.states)}")
    print(f"transitions: {len(lts.transitions)}")
    print(f"accepting: {len(lts.accepting)}")
    print(f"truncated: {'yes' if lts.truncated else 'no'}")
    if args.dot:
        Path(args.dot).write_text(lts_dot(lts), encoding="utf-8")
    if lts.truncated and args.strict:
        return DOMAIN_FAILURE
    return OK


def cmd_buchi(args) -> int:
    value = _load(args.file)
    dist = _as_distributed(value)
    order = args.rank.split(",") if args.rank else None
    automaton = build_buchi(dist, order, max_states=args.max_states)
    silent = sum(1 for t in automaton.transitions if t.letter == TAU)
    print(f"states: {len(automaton.states)}")
    print(f"transitions: {len(automaton.transitions)}")
    print(f"silent: {silent}")
    print(f"accepting: {len(automaton.accepting)}")
    if args.dot:
        Path(args.dot).write_text(
            buchi_dot(automaton, stratified=args.stratified), encoding="utf-8"
        )
    return OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(persist_dir=args.persist_dir, session_ttl=args.session_ttl)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dcr",
        description="Execute, explore and verify dynamic condition response graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a graph document and report findings")
    p.add_argument("file")
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("enabled", help="list the currently executable events")
    p.add_argument("file")
    p.add_argument("--principal", help="restrict to events this principal may execute")
    p.add_argument("--verbose", action="store_true", help="also list blocked events")
    p.set_defaults(handler=cmd_enabled)

    p = sub.add_parser("exec", help="execute events and print every marking")
    p.add_argument("file")
    p.add_argument("events", nargs="+", metavar="event",
                   help="event id, or principal:event for role-gated steps")
    p.set_defaults(handler=cmd_exec)

    p = sub.add_parser("check-run", help="decide acceptance of a finite or lasso run")
    p.add_argument("file")
    p.add_argument("--run", default="", help="comma-separated event ids")
    p.add_argument("--loop", help="comma-separated loop repeated forever")
    p.set_defaults(handler=cmd_check_run)

    p = sub.add_parser("explore", help="breadth-first exploration of the state space")
    p.add_argument("file")
    p.add_argument("--max-states", type=int, default=100_000)
    p.add_argument("--dot", help="write the transition system as a dot file")
    p.add_argument("--strict", action="store_true",
                   help="fail when the exploration was truncated")
    p.set_defaults(handler=cmd_explore)

    p = sub.add_parser("buchi", help="build the acceptance automaton")
    p.add_argument("file")
    p.add_argument("--rank", help="comma-separated rank order of all events")
    p.add_argument("--dot", help="write the automaton as a dot file")
    p.add_argument("--stratified", action="store_true",
                   help="group dot output by rank index")
    p.add_argument("--max-states", type=int, default=1_000_000)
    p.set_defaults(handler=cmd_buchi)

    p = sub.add_parser("serve", help="run the interactive simulation service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--persist-dir", help="directory for append-only session logs")
    p.add_argument("--session-ttl", type=float, default=86_400.0,
                   help="idle session eviction time in seconds")
    p.set_defaults(handler=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except json.JSONDecodeError as err:
        print(f"parse error at line {err.lineno}, column {err.colno}: {err.msg}", file=sys.stderr)
        return IO_FAILURE
    except (DocumentError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return IO_FAILURE
    except GraphValidationError as err:
        print(f"error: {err}", file=sys.stderr)
        return DOMAIN_FAILURE
    except DcrError as err:
        print(f"error: {err}", file=sys.stderr)
        return DOMAIN_FAILURE


if __name__ == "__main__":
    sys.exit(main())
