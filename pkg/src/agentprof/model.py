"""Event vocabulary and session metadata for agent-platform capture sessions.

All timestamps are integer milliseconds relative to the session start, so
aggregate identities (activity sums, percentages) can be checked with exact
integer arithmetic. Event values are immutable and carry no identity of their
own; the recording sink assigns sequence numbers when it flushes.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Union

from .errors import (
    LifecycleOrderViolation,
    NegativeDuration,
    TimestampOutOfRange,
    UnknownAgent,
    ValidationError,
)

FORMAT_VERSION = 1

LIFECYCLE_KINDS = ("created", "started", "stopped", "suspended", "resumed", "destroyed")
RATIONALITIES = ("reactive", "deliberative")

SCOPE_INTRA = "intra_platform"
SCOPE_INTER = "inter_platform"


@dataclass(frozen=True, slots=True)
class SessionInfo:
    """Manifest of one uninterrupted capture session."""

    session_id: str
    platform_name: str
    started_at_epoch_ms: int  # UTC wall clock, ms precision
    duration_ms: int
    slice_ms: int  # scheduler time-slice allocation
    clock_resolution_ms: int = 1
    format_version: int = FORMAT_VERSION

    def check(self) -> None:
        if not self.session_id:
            raise ValidationError("session_id must be non-empty")
        if self.duration_ms < 0:
            raise ValidationError("duration_ms must be >= 0")
        if self.slice_ms < 1:
            raise ValidationError("slice_ms must be >= 1")
        if self.clock_resolution_ms < 1:
            raise ValidationError("clock_resolution_ms must be >= 1")


@dataclass(frozen=True, slots=True)
class AgentDescriptor:
    agent_id: str
    name: str
    role: str = ""
    rationality: str = "reactive"

    def check(self) -> None:
        if not self.agent_id:
            raise ValidationError("agent_id must be non-empty")
        if self.rationality not in RATIONALITIES:
            raise ValidationError(f"unknown rationality {self.rationality!r}")


@dataclass(frozen=True, slots=True)
class LifecycleEvent:
    agent_id: str
    kind: str  # one of LIFECYCLE_KINDS
    at: int

    @property
    def timestamp(self) -> int:
        return self.at


@dataclass(frozen=True, slots=True)
class IterationBreakdown:
    perception_ms: int
    reasoning_ms: int
    action_ms: int


@dataclass(frozen=True, slots=True)
class IterationEvent:
    """One scheduler grant to an agent; zero duration means the agent idled."""

    agent_id: str
    start: int
    duration_ms: int
    breakdown: IterationBreakdown | None = None

    @property
    def timestamp(self) -> int:
        return self.start

    @property
    def end(self) -> int:
        return self.start + self.duration_ms


@dataclass(frozen=True, slots=True)
class SimpleEvent:
    """Timestamp-only event, rendered as a glyph on the agent's time line."""

    agent_id: str
    at: int
    kind: str
    payload: str | None = None

    @property
    def timestamp(self) -> int:
        return self.at


@dataclass(frozen=True, slots=True)
class Endpoint:
    platform_id: str
    agent_id: str
    is_external: bool = False


@dataclass(frozen=True, slots=True)
class FipaHeaders:
    performative: str
    content: str = ""
    conversation_id: str | None = None
    other: tuple[tuple[str, str], ...] = ()


@dataclass(frozen=True, slots=True)
class MessageEvent:
    message_id: str
    sender: Endpoint
    receiver: Endpoint
    sent_at: int
    received_at: int | None
    headers: FipaHeaders
    scope: str  # SCOPE_INTRA or SCOPE_INTER

    @property
    def timestamp(self) -> int:
        return self.sent_at


def _quantize_pct(pct: float) -> float:
    # load is kept at centi-percent resolution so the snapshot file can store
    # it as an exact integer
    return round(pct * 100) / 100


@dataclass(frozen=True, slots=True)
class CpuSample:
    """Host/simulator CPU load at `at`, quantized to 0.01% steps."""

    at: int
    load_pct: float

    def __post_init__(self):
        object.__setattr__(self, "load_pct", _quantize_pct(self.load_pct))

    @property
    def timestamp(self) -> int:
        return self.at


TraceEvent = Union[LifecycleEvent, IterationEvent, SimpleEvent, MessageEvent, CpuSample]

# record-type tags, also used as the `kind` filter vocabulary in range queries
EVENT_TAGS = {
    LifecycleEvent: "lifecycle",
    IterationEvent: "iteration",
    SimpleEvent: "simple",
    MessageEvent: "message",
    CpuSample: "cpu",
}


def event_tag(event: TraceEvent) -> str:
    return EVENT_TAGS[type(event)]


def event_span(event: TraceEvent) -> tuple[int, int]:
    """Closed-open [start, end) interval covered by an event.

    Point events (and zero-duration iterations) report start == end.
    Messages span from send to receipt; unreceived messages are points.
    """
    if isinstance(event, IterationEvent):
        return event.start, event.start + event.duration_ms
    if isinstance(event, MessageEvent):
        end = event.received_at if event.received_at is not None else event.sent_at
        return event.sent_at, end
    at = event.at
    return at, at


def classify_duration(
    duration_ms: int,
    slice_ms: int,
    green_upto: float = 0.75,
    orange_upto: float = 1.0,
) -> str:
    """Color class of an iteration against its time-slice allocation.

    green up to 75% of the slice inclusive, orange up to 100% inclusive, red
    strictly above. The thresholds are slice fractions and may be tuned.
    """
    if slice_ms < 1:
        raise ValidationError("slice_ms must be >= 1")
    if duration_ms <= green_upto * slice_ms:
        return "green"
    if duration_ms <= orange_upto * slice_ms:
        return "orange"
    return "red"


# lifecycle word automaton: created (started|stopped|suspended|resumed)* destroyed?
_ALIVE_KINDS = frozenset(("started", "stopped", "suspended", "resumed"))


def advance_lifecycle(state: str, kind: str) -> str:
    """Advance the per-agent lifecycle word state; raise on illegal moves.

    States: "" (nothing yet), "alive" (created seen), "destroyed".
    """
    if kind not in LIFECYCLE_KINDS:
        raise ValidationError(f"unknown lifecycle kind {kind!r}")
    if state == "destroyed":
        raise LifecycleOrderViolation(f"{kind!r} after destroyed")
    if state == "":
        if kind != "created":
            raise LifecycleOrderViolation(f"{kind!r} before created")
        return "alive"
    # state == "alive"
    if kind == "created":
        raise LifecycleOrderViolation("duplicate created")
    if kind == "destroyed":
        return "destroyed"
    assert kind in _ALIVE_KINDS
    return "alive"


def validate_event(
    event: TraceEvent,
    session: SessionInfo,
    known_agents: Iterable[str],
    lifecycle_state: Mapping[str, str] | None = None,
    *,
    open_ended: bool = False,
) -> None:
    """Check one event against the session contract; raise ValidationError.

    `known_agents` holds the registered platform-side agent ids. The upper
    timestamp bound is skipped when `open_ended` is set (session still being
    captured, final duration unknown). `lifecycle_state` supplies the per-agent
    word state used to enforce created-first / nothing-after-destroyed; when
    omitted, ordering is not checked.
    """
    duration = None if open_ended else session.duration_ms

    def check_at(at: int, label: str) -> None:
        if at < 0:
            raise TimestampOutOfRange(f"{label} {at} < 0")
        if duration is not None and at > duration:
            raise TimestampOutOfRange(f"{label} {at} > session duration {duration}")

    if isinstance(event, LifecycleEvent):
        if event.agent_id not in known_agents:
            raise UnknownAgent(event.agent_id)
        check_at(event.at, "at")
        if lifecycle_state is not None:
            advance_lifecycle(lifecycle_state.get(event.agent_id, ""), event.kind)
        elif event.kind not in LIFECYCLE_KINDS:
            raise ValidationError(f"unknown lifecycle kind {event.kind!r}")
    elif isinstance(event, IterationEvent):
        if event.agent_id not in known_agents:
            raise UnknownAgent(event.agent_id)
        if event.duration_ms < 0:
            raise NegativeDuration(f"duration_ms {event.duration_ms}")
        check_at(event.start, "start")
        if duration is not None and event.start + event.duration_ms > duration:
            raise TimestampOutOfRange(
                f"iteration ends at {event.start + event.duration_ms}, "
                f"session duration {duration}"
            )
        b = event.breakdown
        if b is not None:
            if min(b.perception_ms, b.reasoning_ms, b.action_ms) < 0:
                raise NegativeDuration("breakdown component < 0")
            if b.perception_ms + b.reasoning_ms + b.action_ms != event.duration_ms:
                raise ValidationError("breakdown does not sum to duration_ms")
    elif isinstance(event, SimpleEvent):
        if event.agent_id not in known_agents:
            raise UnknownAgent(event.agent_id)
        check_at(event.at, "at")
    elif isinstance(event, MessageEvent):
        for ep in (event.sender, event.receiver):
            if not ep.platform_id or not ep.agent_id:
                raise ValidationError("endpoint fields must be non-empty")
            if ep.is_external != (ep.platform_id != session.platform_name):
                raise ValidationError(
                    f"endpoint {ep.agent_id!r}: is_external inconsistent with platform_id"
                )
            if not ep.is_external and ep.agent_id not in known_agents:
                raise UnknownAgent(ep.agent_id)
        check_at(event.sent_at, "sent_at")
        if event.received_at is not None:
            if event.received_at < event.sent_at:
                raise ValidationError("received_at precedes sent_at")
            check_at(event.received_at, "received_at")
        externals = event.sender.is_external + event.receiver.is_external
        if externals == 2:
            raise ValidationError("message with two external endpoints")
        expected_scope = SCOPE_INTER if externals == 1 else SCOPE_INTRA
        if event.scope != expected_scope:
            raise ValidationError(f"scope {event.scope!r}, expected {expected_scope!r}")
        if not event.headers.performative:
            raise ValidationError("performative must be non-empty")
    elif isinstance(event, CpuSample):
        check_at(event.at, "at")
        if not 0.0 <= event.load_pct <= 100.0:
            raise ValidationError(f"load_pct {event.load_pct} outside [0, 100]")
    else:
        raise ValidationError(f"unknown event type {type(event).__name__}")
