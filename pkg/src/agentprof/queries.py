"""Post-processing queries over a sealed snapshot.

Aggregates are written as a single pass over the event stream, so they run
unchanged against a fully loaded `Snapshot` or against a streaming
`SnapshotReader` scan of a large file.

Exact-arithmetic rules for the flat profile, chosen so per-row numbers always
reconcile with the session header:

* percentage of session activity rounds half-up to 2 decimals;
* average iteration time truncates to whole milliseconds.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import EmptySnapshot, InvalidBucket, InvalidRange, UnknownMessage
from .model import (
    AgentDescriptor,
    CpuSample,
    IterationEvent,
    LifecycleEvent,
    MessageEvent,
    SessionInfo,
    SimpleEvent,
    TraceEvent,
    event_span,
    event_tag,
)
from .store import Snapshot, SnapshotReader


def _source_parts(source) -> tuple[SessionInfo, Sequence[AgentDescriptor], Iterable[TraceEvent]]:
    """Accept a Snapshot or a SnapshotReader; both expose the same triple."""
    if isinstance(source, SnapshotReader):
        return source.manifest, source.agents, source.iter_events()
    manifest = source.manifest
    if manifest is None:
        raise EmptySnapshot("snapshot has no session manifest")
    return manifest, source.agents, source.events


def round_half_up_centi(numerator: int, denominator: int) -> int:
    """Percentage numerator/denominator in hundredths of a percent, rounded
    half-up, using integer arithmetic only."""
    if denominator == 0:
        return 0
    return (2 * numerator * 10000 + denominator) // (2 * denominator)


@dataclass(frozen=True)
class FlatProfileRow:
    agent_id: str
    name: str
    iterations_nonzero: int
    overload_count: int
    activity_ms: int
    pct_session: float  # percentage, 2-decimal resolution
    max_ms: int
    avg_ms: int  # truncated to whole ms
    msgs_sent: int
    msgs_received: int
    breakdown_ms: tuple[int, int, int] | None = None


@dataclass(frozen=True)
class ProfileHeader:
    duration_ms: int
    total_activity_ms: int
    messages_sent: int
    messages_received: int
    slice_ms: int


@dataclass(frozen=True)
class FlatProfile:
    header: ProfileHeader
    rows: tuple[FlatProfileRow, ...]


@dataclass(frozen=True)
class GlobalStats:
    total_duration_ms: int
    total_activity_ms: int
    total_messages: int  # sent by platform agents
    avg_active_agents_per_sec: float


class _AgentAccumulator:
    __slots__ = ("iters", "overloads", "activity", "max_ms", "sent", "received",
                 "breakdown", "seen")

    def __init__(self):
        self.iters = 0
        self.overloads = 0
        self.activity = 0
        self.max_ms = 0
        self.sent = 0
        self.received = 0
        self.breakdown = None
        self.seen = False


def flat_profile(source) -> FlatProfile:
    """Per-agent aggregate rows plus the session header, busiest agent first."""
    manifest, agents, events = _source_parts(source)
    names = {a.agent_id: a.name for a in agents}
    acc: dict[str, _AgentAccumulator] = {}

    def slot(agent_id: str) -> _AgentAccumulator:
        entry = acc.get(agent_id)
        if entry is None:
            entry = acc[agent_id] = _AgentAccumulator()
        entry.seen = True
        return entry

    slice_ms = manifest.slice_ms
    total_activity = 0
    total_sent = 0
    total_received = 0
    for event in events:
        if isinstance(event, IterationEvent):
            entry = slot(event.agent_id)
            d = event.duration_ms
            total_activity += d
            entry.activity += d
            if d > 0:
                entry.iters += 1
                if d > entry.max_ms:
                    entry.max_ms = d
                if d > slice_ms:
                    entry.overloads += 1
            b = event.breakdown
            if b is not None:
                prev = entry.breakdown or (0, 0, 0)
                entry.breakdown = (prev[0] + b.perception_ms,
                                   prev[1] + b.reasoning_ms,
                                   prev[2] + b.action_ms)
        elif isinstance(event, MessageEvent):
            if not event.sender.is_external:
                slot(event.sender.agent_id).sent += 1
                total_sent += 1
            if not event.receiver.is_external and event.received_at is not None:
                slot(event.receiver.agent_id).received += 1
                total_received += 1
        elif isinstance(event, (LifecycleEvent, SimpleEvent)):
            slot(event.agent_id)
        # CPU samples belong to the platform, not to any agent

    rows = []
    for agent_id, entry in acc.items():
        pct_centi = round_half_up_centi(entry.activity, total_activity)
        rows.append(FlatProfileRow(
            agent_id=agent_id,
            name=names.get(agent_id, agent_id),
            iterations_nonzero=entry.iters,
            overload_count=entry.overloads,
            activity_ms=entry.activity,
            pct_session=pct_centi / 100,
            max_ms=entry.max_ms,
            avg_ms=entry.activity // entry.iters if entry.iters else 0,
            msgs_sent=entry.sent,
            msgs_received=entry.received,
            breakdown_ms=entry.breakdown,
        ))
    rows.sort(key=lambda r: (-r.activity_ms, r.name))
    header = ProfileHeader(
        duration_ms=manifest.duration_ms,
        total_activity_ms=total_activity,
        messages_sent=total_sent,
        messages_received=total_received,
        slice_ms=slice_ms,
    )
    return FlatProfile(header=header, rows=tuple(rows))


def global_stats(source) -> GlobalStats:
    manifest, _, events = _source_parts(source)
    duration = manifest.duration_ms
    n_buckets = -(-duration // 1000) if duration > 0 else 0
    active: list[set[str]] = [set() for _ in range(n_buckets)]
    total_activity = 0
    total_messages = 0
    for event in events:
        if isinstance(event, IterationEvent):
            d = event.duration_ms
            total_activity += d
            if d > 0 and n_buckets:
                first = min(event.start // 1000, n_buckets - 1)
                last = min((event.start + d - 1) // 1000, n_buckets - 1)
                for k in range(first, last + 1):
                    active[k].add(event.agent_id)
        elif isinstance(event, MessageEvent):
            if not event.sender.is_external:
                total_messages += 1
    avg_active = sum(len(s) for s in active) / n_buckets if n_buckets else 0.0
    return GlobalStats(
        total_duration_ms=duration,
        total_activity_ms=total_activity,
        total_messages=total_messages,
        avg_active_agents_per_sec=avg_active,
    )


@dataclass(frozen=True)
class RangeHit:
    """One event intersecting a queried window; `index` is its snapshot seq."""

    index: int
    event: TraceEvent
    clipped: bool


def events_in_range(
    source,
    t0: int,
    t1: int,
    agent_filter: Iterable[str] | None = None,
    kind_filter: Iterable[str] | None = None,
) -> list[RangeHit]:
    """Events whose [start, end) span intersects [t0, t1), in stream order.

    Point events count as inside when t0 <= at < t1. `clipped` marks interval
    events extending beyond the window on either side.
    """
    manifest, _, events = _source_parts(source)
    if not (0 <= t0 <= t1 <= manifest.duration_ms):
        raise InvalidRange(f"[{t0}, {t1}) outside [0, {manifest.duration_ms}]")
    agents = frozenset(agent_filter) if agent_filter is not None else None
    kinds = frozenset(kind_filter) if kind_filter is not None else None

    hits = []
    for index, event in enumerate(events):
        if kinds is not None and event_tag(event) not in kinds:
            continue
        if agents is not None:
            if isinstance(event, MessageEvent):
                if (event.sender.agent_id not in agents
                        and event.receiver.agent_id not in agents):
                    continue
            elif isinstance(event, CpuSample):
                continue
            elif event.agent_id not in agents:
                continue
        start, end = event_span(event)
        if end > start:
            if start >= t1 or end <= t0:
                continue
            clipped = start < t0 or end > t1
        else:
            if not (t0 <= start < t1):
                continue
            clipped = False
        hits.append(RangeHit(index=index, event=event, clipped=clipped))
    return hits


@dataclass(frozen=True)
class CpuBucket:
    bucket_start: int
    mean_load_pct: float
    max_load_pct: float
    empty: bool


def cpu_series(source, bucket_ms: int) -> list[CpuBucket]:
    """CPU samples grouped into fixed buckets; empty buckets report mean 0."""
    manifest, _, events = _source_parts(source)
    if bucket_ms < manifest.clock_resolution_ms:
        raise InvalidBucket(
            f"bucket_ms {bucket_ms} below clock resolution {manifest.clock_resolution_ms}"
        )
    duration = manifest.duration_ms
    n_buckets = -(-duration // bucket_ms) if duration > 0 else 0
    sums = [0.0] * n_buckets
    maxima = [0.0] * n_buckets
    counts = [0] * n_buckets
    for event in events:
        if isinstance(event, CpuSample) and n_buckets:
            k = min(event.at // bucket_ms, n_buckets - 1)
            sums[k] += event.load_pct
            counts[k] += 1
            if event.load_pct > maxima[k]:
                maxima[k] = event.load_pct
    return [
        CpuBucket(
            bucket_start=k * bucket_ms,
            mean_load_pct=sums[k] / counts[k] if counts[k] else 0.0,
            max_load_pct=maxima[k],
            empty=counts[k] == 0,
        )
        for k in range(n_buckets)
    ]


def message_detail(source, message_id: str) -> MessageEvent:
    """Full message record, including FIPA headers and both endpoints."""
    if isinstance(source, Snapshot):
        found = source.message_by_id(message_id)
    else:
        _, _, events = _source_parts(source)
        found = None
        for event in events:
            if isinstance(event, MessageEvent) and event.message_id == message_id:
                found = event
                break
    if found is None:
        raise UnknownMessage(message_id)
    return found
