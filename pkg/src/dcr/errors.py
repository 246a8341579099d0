"""Exception types raised by the engine."""

from __future__ import annotations


class DcrError(Exception):
    """Base class for all engine errors."""


class ExecutionError(DcrError):
    """An event could not be executed.

    ``step`` is filled in when the failure happens inside a replay, so
    callers learn which position of the run went wrong.
    """

    def __init__(self, message: str, event: str):
        super().__init__(message)
        self.event = event
        self.step: int | None = None


class UnknownEvent(ExecutionError):
    def __init__(self, event: str):
        super().__init__(f"unknown event '{event}'", event)


class NotIncluded(ExecutionError):
    def __init__(self, event: str):
        super().__init__(f"event '{event}' is not included", event)


class ConditionsUnmet(ExecutionError):
    """All unmet included condition sources are reported in ``blocking``."""

    def __init__(self, event: str, blocking):
        self.blocking = frozenset(blocking)
        names = ",".join(sorted(self.blocking))
        super().__init__(f"event '{event}' is blocked by {{{names}}}", event)


class UnknownPrincipal(DcrError):
    def __init__(self, principal: str):
        super().__init__(f"unknown principal '{principal}'")
        self.principal = principal


class Unauthorized(DcrError):
    """No role authorizes the principal to execute the event's action."""

    def __init__(self, principal: str, event: str):
        super().__init__(f"'{principal}' holds no role that may execute '{event}'")
        self.principal = principal
        self.event = event


class RepeatedEvent(DcrError):
    def __init__(self, event: str):
        super().__init__(f"event '{event}' occurs more than once in the run")
        self.event = event


class InvalidRun(DcrError):
    """The sequence is not a run of the structure it was checked against."""


class LassoNotReplayable(DcrError):
    """Unrolling the lasso failed.

    ``iteration`` is 0 when the prefix failed, otherwise the 1-based loop
    pass; ``step`` is the offset inside that segment.
    """

    def __init__(self, iteration: int, step: int, cause: Exception | None = None):
        where = "prefix" if iteration == 0 else f"loop pass {iteration}"
        detail = f": {cause}" if cause is not None else ""
        super().__init__(f"lasso not replayable at {where}, step {step}{detail}")
        self.iteration = iteration
        self.step = step
        self.cause = cause


class OrderNotPermutation(DcrError):
    def __init__(self, order):
        super().__init__(f"rank order {list(order)} is not a permutation of the event set")
        self.order = tuple(order)


class StateBoundExceeded(DcrError):
    def __init__(self, bound: int):
        super().__init__(f"state bound of {bound} exceeded")
        self.bound = bound


class DocumentError(DcrError):
    """A document does not match the expected JSON shape."""


class GraphValidationError(DcrError):
    """A loaded document failed semantic validation; carries the report."""

    def __init__(self, report):
        lines = "; ".join(f"{f.code}: {f.message}" for f in report.errors)
        super().__init__(f"invalid graph: {lines}")
        self.report = report
