"""HTTP facade for interactive role-based simulation sessions.

A session wraps one distributed graph and the append-only history of
executed steps; the current marking is always the replay of that history,
which is also how undo works (execution discards information, so replay
is the only sound inverse).  Sessions are kept in memory, optionally
mirrored to per-session JSONL logs that are replayed on restart, and
evicted after a configurable idle time.

Requests touching the same session are serialized through a per-session
lock; distinct sessions proceed concurrently since the engine itself is
pure.
"""

from __future__ import annotations

import json
import threading
import time
import uuid
from dataclasses import dataclass, field, replace
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request
from fastapi.middleware.cors import CORSMiddleware

from .errors import (
    ConditionsUnmet,
    DocumentError,
    NotIncluded,
    Unauthorized,
    UnknownEvent,
    UnknownPrincipal,
)
from .io import graph_from_dict, validate_document
from .model import DcrGraph, DistributedDcrGraph, Marking
from .semantics import (
    TransitionLabel,
    blocking_conditions,
    enabled_events,
    execute_as,
    explore_lts,
    is_accepting_marking,
)


@dataclass
class Session:
    session_id: str
    dist: DistributedDcrGraph
    document: dict
    history: list[TransitionLabel] = field(default_factory=list)
    marking: Marking = None  # type: ignore[assignment]
    last_access: float = 0.0
    lock: threading.Lock = field(default_factory=threading.Lock)

    def __post_init__(self) -> None:
        if self.marking is None:
            self.marking = self.dist.graph.initial_marking


class SessionStore:
    def __init__(
        self,
        persist_dir: str | Path | None = None,
        session_ttl: float = 86_400.0,
        clock=time.monotonic,
    ):
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()
        self._ttl = session_ttl
        self._clock = clock
        self._persist_dir = Path(persist_dir) if persist_dir else None
        if self._persist_dir:
            self._persist_dir.mkdir(parents=True, exist_ok=True)
            self._restore()

    def create(self, document: dict) -> Session:
        dist = _as_distributed(graph_from_dict(document))
        session = Session(uuid.uuid4().hex, dist, document)
        session.last_access = self._clock()
        with self._lock:
            self._sweep()
            self._sessions[session.session_id] = session
        self._append(session, {"type": "graph", "document": document})
        return session

    def get(self, session_id: str) -> Session:
        with self._lock:
            session = self._sessions.get(session_id)
            if session is None:
                raise KeyError(session_id)
            if self._clock() - session.last_access > self._ttl:
                del self._sessions[session_id]
                raise KeyError(session_id)
            session.last_access = self._clock()
            return session

    def execute(self, session: Session, principal: str, event: str) -> None:
        with session.lock:
            marking, label = execute_as(session.dist, session.marking, principal, event)
            session.history.append(label)
            session.marking = marking
        self._append(session, {"type": "exec", "principal": principal, "event": event})

    def undo(self, session: Session) -> bool:
        """Drop the last step; the marking is rebuilt by replaying the rest."""
        with session.lock:
            if not session.history:
                return False
            session.history.pop()
            marking = session.dist.graph.initial_marking
            for label in session.history:
                marking, _ = execute_as(session.dist, marking, label.principal, label.event)
            session.marking = marking
        self._append(session, {"type": "undo"})
        return True

    def _sweep(self) -> None:
        now = self._clock()
        stale = [
            sid
            for sid, session in self._sessions.items()
            if now - session.last_access > self._ttl
        ]
        for sid in stale:
            del self._sessions[sid]

    def _append(self, session: Session, entry: dict) -> None:
        if not self._persist_dir:
            return
        path = self._persist_dir / f"{session.session_id}.jsonl"
        with path.open("a", encoding="utf-8") as handle:
            handle.write(json.dumps(entry) + "\n")

    def _restore(self) -> None:
        for path in sorted(self._persist_dir.glob("*.jsonl")):
            session = self._restore_one(path)
            if session is not None:
                self._sessions[session.session_id] = session

    def _restore_one(self, path: Path) -> Session | None:
        lines = [json.loads(line) for line in path.read_text(encoding="utf-8").splitlines() if line]
        if not lines or lines[0].get("type") != "graph":
            return None
        document = lines[0]["document"]
        dist = _as_distributed(graph_from_dict(document))
        steps: list[tuple[str, str]] = []
        for entry in lines[1:]:
            if entry["type"] == "exec":
                steps.append((entry["principal"], entry["event"]))
            elif entry["type"] == "undo" and steps:
                steps.pop()
        session = Session(path.stem, dist, document)
        for principal, event in steps:
            marking, label = execute_as(dist, session.marking, principal, event)
            session.history.append(label)
            session.marking = marking
        session.last_access = self._clock()
        return session


def _as_distributed(value: DcrGraph | DistributedDcrGraph) -> DistributedDcrGraph:
    if isinstance(value, DistributedDcrGraph):
        return value
    return DistributedDcrGraph(graph=value)


def state_view(session: Session) -> dict:
    """Everything the client needs: per-event flags, history and topology.

    The client derives all icons from this view; it never evaluates
    relations itself.
    """
    dist = session.dist
    graph = dist.graph
    marking = session.marking
    enabled = enabled_events(graph, marking)
    events = []
    for event in graph.events:
        action = graph.labeling[event]
        events.append(
            {
                "id": event,
                "action": action,
                "roles": sorted(dist.roles_of_action.get(action, frozenset())),
                "executed": event in marking.executed,
                "pending": event in marking.pending,
                "included": event in marking.included,
                "enabled": event in enabled,
                "blockingConditions": sorted(blocking_conditions(graph, marking, event)),
            }
        )
    return {
        "sessionId": session.session_id,
        "accepting": is_accepting_marking(marking),
        "marking": {
            "executed": sorted(marking.executed),
            "pending": sorted(marking.pending),
            "included": sorted(marking.included),
        },
        "events": events,
        "history": [
            {
                "event": label.event,
                "action": label.action,
                "principal": label.principal,
                "role": label.role,
            }
            for label in session.history
        ],
        "principals": {
            p: sorted(dist.roles_of_principal.get(p, frozenset()))
            for p in dist.principals
        },
        "graph": {
            "events": list(graph.events),
            "labels": {e: graph.labeling[e] for e in graph.events},
            "conditions": [list(p) for p in sorted(graph.conditions)],
            "responses": [list(p) for p in sorted(graph.responses)],
            "includes": [list(p) for p in sorted(graph.includes)],
            "excludes": [list(p) for p in sorted(graph.excludes)],
        },
    }


def create_app(
    persist_dir: str | Path | None = None,
    session_ttl: float = 86_400.0,
    clock=time.monotonic,
) -> FastAPI:
    app = FastAPI(title="dcr simulation service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store = SessionStore(persist_dir=persist_dir, session_ttl=session_ttl, clock=clock)
    app.state.store = store

    def _session(session_id: str) -> Session:
        try:
            return store.get(session_id)
        except KeyError:
            raise HTTPException(status_code=404, detail={"error": "unknown-session"})

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.post("/sessions", status_code=201)
    async def create_session(request: Request):
        try:
            document = await request.json()
        except json.JSONDecodeError:
            raise HTTPException(status_code=400, detail={"error": "malformed-json"})
        try:
            value = graph_from_dict(document)
        except DocumentError as err:
            raise HTTPException(
                status_code=400, detail={"error": "malformed-document", "message": str(err)}
            )
        report = validate_document(value)
        if not report.ok:
            raise HTTPException(
                status_code=400,
                detail={
                    "error": "invalid-graph",
                    "findings": [
                        {
                            "severity": f.severity,
                            "code": f.code,
                            "message": f.message,
                            "element": f.element,
                        }
                        for f in report.findings
                    ],
                },
            )
        session = store.create(document)
        return state_view(session)

    @app.get("/sessions/{session_id}")
    def get_state(session_id: str):
        return state_view(_session(session_id))

    @app.post("/sessions/{session_id}/events")
    async def execute_event(session_id: str, request: Request):
        session = _session(session_id)
        body = await request.json()
        principal = body.get("principal")
        event = body.get("event")
        if not isinstance(principal, str) or not isinstance(event, str):
            raise HTTPException(
                status_code=400, detail={"error": "malformed-request"}
            )
        try:
            store.execute(session, principal, event)
        except UnknownEvent:
            raise HTTPException(status_code=404, detail={"error": "unknown-event", "event": event})
        except UnknownPrincipal:
            raise HTTPException(
                status_code=404, detail={"error": "unknown-principal", "principal": principal}
            )
        except (NotIncluded, ConditionsUnmet) as err:
            blocking = sorted(getattr(err, "blocking", ()))
            raise HTTPException(
                status_code=409,
                detail={"error": "not-enabled", "event": event, "blocking": blocking},
            )
        except Unauthorized:
            raise HTTPException(
                status_code=403,
                detail={"error": "unauthorized", "principal": principal, "event": event},
            )
        return state_view(session)

    @app.post("/sessions/{session_id}/undo")
    def undo(session_id: str):
        session = _session(session_id)
        if not store.undo(session):
            raise HTTPException(status_code=409, detail={"error": "empty-history"})
        return state_view(session)

    @app.get("/sessions/{session_id}/lts")
    def session_lts(session_id: str, maxStates: int = 200):
        """What-if view: exploration of the continuations from the current marking."""
        session = _session(session_id)
        with session.lock:
            graph = replace(session.dist.graph, initial_marking=session.marking)
            lts = explore_lts(graph, max_states=max(1, maxStates))
        index = {state: i for i, state in enumerate(lts.states)}
        return {
            "states": [
                {
                    "executed": sorted(state.executed),
                    "pending": sorted(state.pending),
                    "included": sorted(state.included),
                    "accepting": state in lts.accepting,
                }
                for state in lts.states
            ],
            "transitions": [
                {
                    "from": index[source],
                    "to": index[target],
                    "event": label.event,
                    "action": label.action,
                }
                for source, label, target in lts.transitions
            ],
            "truncated": lts.truncated,
        }

    return app
