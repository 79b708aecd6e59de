"""Space-time diagram compiler.

Turns a snapshot plus a viewport into resolution-independent geometry: agent
lanes shaded by their share of total computation, duration-proportional
colored rectangles, glyphs for timestamp-only events, message arcs (routed to
external platform life lines when an endpoint lives elsewhere), a CPU strip
and a whole-session bird's-eye overview.

The scene is pure data; rasterization belongs to whatever consumes it.
Documented z-order for renderers: lanes < rects < glyphs < arcs.
"""
from __future__ import annotations

import colorsys
from bisect import bisect_right
from dataclasses import dataclass

from .errors import InvalidViewport
from .model import (
    CpuSample,
    IterationEvent,
    LifecycleEvent,
    MessageEvent,
    SimpleEvent,
    classify_duration,
)
from .queries import flat_profile
from .store import Snapshot
from .textfmt import fmt_clock

MIN_RECT_PX = 1.0
DEFAULT_BIRDS_EYE_BUCKETS = 200

# icon vocabulary for timestamp-only events; unlisted kinds fall back to
# "generic" and lifecycle kinds render under their own name
SIMPLE_EVENT_ICONS = {
    "message_received": "envelope",
    "task_refused": "refusal",
}

_CLASS_RANK = {"empty": 0, "green": 1, "orange": 2, "red": 3}


@dataclass(frozen=True)
class Viewport:
    t0: int
    t1: int
    px_per_ms: float
    lane_order: tuple[str, ...] | None = None  # None means automatic ordering
    hidden: frozenset[str] = frozenset()


@dataclass(frozen=True)
class TimeTick:
    t: int
    x: float
    label: str


@dataclass(frozen=True)
class CpuSegment:
    x0: float
    x1: float
    color: str
    load_pct: float


@dataclass(frozen=True)
class Lane:
    agent_id: str
    caption: str
    darkness: float  # share of the busiest agent's activity, in [0, 1]
    y_index: int
    x0: float  # lane line begins at agent creation (clipped to the viewport)
    x1: float


@dataclass(frozen=True)
class SceneRect:
    lane: str
    x0: float
    x1: float
    color: str
    event_ref: int


@dataclass(frozen=True)
class Glyph:
    lane: str
    x: float
    icon_kind: str
    event_ref: int


@dataclass(frozen=True)
class Arc:
    from_kind: str  # "lane" | "external"
    from_ref: str
    to_kind: str
    to_ref: str
    x_send: float
    x_receive: float | None
    message_id: str
    direction: str  # "intra" | "outbound" | "inbound"
    pending: bool


@dataclass(frozen=True)
class ExternalLine:
    platform_id: str
    y_index: int


@dataclass(frozen=True)
class BirdsEyeLane:
    agent_id: str
    classes: tuple[str, ...]


@dataclass(frozen=True)
class BirdsEye:
    duration_ms: int
    width_buckets: int
    lanes: tuple[BirdsEyeLane, ...]


@dataclass(frozen=True)
class SceneDescription:
    t0: int
    t1: int
    px_per_ms: float
    duration_ms: int
    slice_ms: int
    time_axis: tuple[TimeTick, ...]
    cpu_strip: tuple[CpuSegment, ...]
    lanes: tuple[Lane, ...]
    rects: tuple[SceneRect, ...]
    glyphs: tuple[Glyph, ...]
    arcs: tuple[Arc, ...]
    external_lines: tuple[ExternalLine, ...]
    birds_eye: BirdsEye


def classify_rect(duration_ms: int, slice_ms: int) -> str:
    """Rectangle color for a timed event; shared slice-overshoot definition."""
    return classify_duration(duration_ms, slice_ms)


def cpu_color(load_pct: float) -> str:
    """Hex color on a green-to-red hue gradient; monotone in the load."""
    if not 0.0 <= load_pct <= 100.0:
        raise ValueError(f"load_pct {load_pct} outside [0, 100]")
    hue = (120.0 * (1.0 - load_pct / 100.0)) / 360.0
    r, g, b = colorsys.hsv_to_rgb(hue, 1.0, 0.85)
    return f"#{round(r * 255):02x}{round(g * 255):02x}{round(b * 255):02x}"


def _nice_ticks(t0: int, t1: int) -> list[int]:
    """Tick positions at a 1/2/5-decade step giving at most ~8 labels."""
    span = max(1, t1 - t0)
    step = 1
    while True:
        for mult in (1, 2, 5):
            if span // (step * mult) <= 8:
                step = step * mult
                break
        else:
            step *= 10
            continue
        break
    first = -(-t0 // step) * step
    return list(range(first, t1 + 1, step))


def _lifetimes(snapshot: Snapshot) -> dict[str, tuple[int, int]]:
    """[creation, destruction-or-session-end] per agent."""
    duration = snapshot.manifest.duration_ms
    spans: dict[str, tuple[int, int]] = {}
    for event in snapshot.events:
        if isinstance(event, LifecycleEvent):
            begin, end = spans.get(event.agent_id, (None, duration))
            if event.kind == "created":
                spans[event.agent_id] = (event.at, end)
            elif event.kind == "destroyed":
                spans[event.agent_id] = (begin if begin is not None else 0, event.at)
    return {
        agent_id: (begin if begin is not None else 0, end)
        for agent_id, (begin, end) in spans.items()
    }


def birds_eye(snapshot: Snapshot, width_buckets: int) -> BirdsEye:
    """Per-lane worst-color strip over the whole session.

    Bucket k spans [k*D//W, (k+1)*D//W), so the buckets tile the session
    duration exactly even when it does not divide evenly.
    """
    if width_buckets < 1:
        raise InvalidViewport("width_buckets must be >= 1")
    duration = snapshot.manifest.duration_ms
    slice_ms = snapshot.manifest.slice_ms
    boundaries = [k * duration // width_buckets for k in range(width_buckets + 1)]
    order = [row.agent_id for row in flat_profile(snapshot).rows]
    ranks: dict[str, list[int]] = {a: [0] * width_buckets for a in order}
    for event in snapshot.events:
        if not isinstance(event, IterationEvent) or event.duration_ms <= 0:
            continue
        lane = ranks.get(event.agent_id)
        if lane is None:
            continue
        rank = _CLASS_RANK[classify_duration(event.duration_ms, slice_ms)]
        first = bisect_right(boundaries, event.start) - 1
        last = bisect_right(boundaries, event.end - 1) - 1
        for k in range(max(first, 0), min(last, width_buckets - 1) + 1):
            if rank > lane[k]:
                lane[k] = rank
    rank_names = {v: k for k, v in _CLASS_RANK.items()}
    return BirdsEye(
        duration_ms=duration,
        width_buckets=width_buckets,
        lanes=tuple(
            BirdsEyeLane(agent_id=a, classes=tuple(rank_names[r] for r in ranks[a]))
            for a in order
        ),
    )


def compile_scene(snapshot: Snapshot, viewport: Viewport) -> SceneDescription:
    """Project every event intersecting the viewport into scene geometry."""
    duration = snapshot.manifest.duration_ms
    t0, t1, ppm = viewport.t0, viewport.t1, viewport.px_per_ms
    if not (0 <= t0 < t1 <= duration):
        raise InvalidViewport(f"[{t0}, {t1}) outside [0, {duration}] or empty")
    if not ppm > 0:
        raise InvalidViewport("px_per_ms must be positive")
    hidden = viewport.hidden
    slice_ms = snapshot.manifest.slice_ms
    profile = flat_profile(snapshot)
    activity = {row.agent_id: row.activity_ms for row in profile.rows}
    max_activity = max(activity.values(), default=0)
    captions = {a.agent_id: a.name for a in snapshot.agents}
    lifetimes = _lifetimes(snapshot)

    def x(t: int) -> float:
        return (t - t0) * ppm

    # one pass over the events collects all visible primitives; lanes are
    # whatever agents remain referenced plus those whose life spans the view
    rects: list[SceneRect] = []
    glyphs: list[Glyph] = []
    raw_arcs: list[tuple[MessageEvent, int]] = []
    cpu_samples: list[CpuSample] = []
    referenced: set[str] = set()

    for ref, event in enumerate(snapshot.events):
        if isinstance(event, IterationEvent):
            if event.agent_id in hidden or event.duration_ms <= 0:
                continue
            if event.start >= t1 or event.end <= t0:
                continue
            rects.append(SceneRect(
                lane=event.agent_id,
                x0=x(event.start),
                x1=x(event.start) + max(event.duration_ms * ppm, MIN_RECT_PX),
                color=classify_duration(event.duration_ms, slice_ms),
                event_ref=ref,
            ))
            referenced.add(event.agent_id)
        elif isinstance(event, (LifecycleEvent, SimpleEvent)):
            if event.agent_id in hidden or not t0 <= event.at < t1:
                continue
            if isinstance(event, LifecycleEvent):
                icon = event.kind
            else:
                icon = SIMPLE_EVENT_ICONS.get(event.kind, "generic")
            glyphs.append(Glyph(
                lane=event.agent_id, x=x(event.at), icon_kind=icon, event_ref=ref,
            ))
            referenced.add(event.agent_id)
        elif isinstance(event, MessageEvent):
            end = event.received_at if event.received_at is not None else event.sent_at
            if end > event.sent_at:
                if event.sent_at >= t1 or end <= t0:
                    continue
            elif not t0 <= event.sent_at < t1:
                continue
            sender_hidden = not event.sender.is_external and event.sender.agent_id in hidden
            receiver_hidden = (
                not event.receiver.is_external and event.receiver.agent_id in hidden
            )
            if sender_hidden or receiver_hidden:
                continue  # hidden is not external: the arc simply disappears
            for ep in (event.sender, event.receiver):
                if not ep.is_external:
                    referenced.add(ep.agent_id)  # arcs always land on a lane
            raw_arcs.append((event, ref))
        elif isinstance(event, CpuSample):
            cpu_samples.append(event)

    # lane membership and ordering
    auto_order = [row.agent_id for row in profile.rows]
    in_view = set(referenced)
    for agent_id in captions:
        begin, end = lifetimes.get(agent_id, (0, duration))
        if agent_id not in hidden and begin < t1 and end >= t0:
            in_view.add(agent_id)
    in_view -= hidden
    ordered: list[str] = []
    if viewport.lane_order is not None:
        for agent_id in viewport.lane_order:
            if agent_id in in_view and agent_id not in ordered:
                ordered.append(agent_id)
    for agent_id in auto_order:
        if agent_id in in_view and agent_id not in ordered:
            ordered.append(agent_id)
    for agent_id in sorted(in_view):  # agents with no profile row at the bottom
        if agent_id not in ordered:
            ordered.append(agent_id)

    lanes = []
    for y_index, agent_id in enumerate(ordered):
        begin, end = lifetimes.get(agent_id, (0, duration))
        lanes.append(Lane(
            agent_id=agent_id,
            caption=captions.get(agent_id, agent_id),
            darkness=(activity.get(agent_id, 0) / max_activity) if max_activity else 0.0,
            y_index=y_index,
            x0=x(max(begin, t0)),
            x1=x(min(end, t1)),
        ))

    # arcs: external endpoints route to platform life lines; internal
    # endpoints that lost their lane to culling still carry their agent id
    external_ids = sorted({
        ep.platform_id
        for event, _ in raw_arcs
        for ep in (event.sender, event.receiver)
        if ep.is_external
    })
    external_lines = tuple(
        ExternalLine(platform_id=pid, y_index=i) for i, pid in enumerate(external_ids)
    )
    arcs = []
    for event, ref in raw_arcs:
        if event.sender.is_external:
            direction = "inbound"
        elif event.receiver.is_external:
            direction = "outbound"
        else:
            direction = "intra"
        arcs.append(Arc(
            from_kind="external" if event.sender.is_external else "lane",
            from_ref=event.sender.platform_id if event.sender.is_external
            else event.sender.agent_id,
            to_kind="external" if event.receiver.is_external else "lane",
            to_ref=event.receiver.platform_id if event.receiver.is_external
            else event.receiver.agent_id,
            x_send=x(event.sent_at),
            x_receive=x(event.received_at) if event.received_at is not None else None,
            message_id=event.message_id,
            direction=direction,
            pending=event.received_at is None,
        ))

    # CPU strip: each sample colors the gap up to the next sample
    cpu_samples.sort(key=lambda s: s.at)
    segments = []
    for i, sample in enumerate(cpu_samples):
        seg_start = sample.at
        seg_end = cpu_samples[i + 1].at if i + 1 < len(cpu_samples) else duration
        if seg_start >= t1 or seg_end <= t0 or seg_end <= seg_start:
            continue
        segments.append(CpuSegment(
            x0=x(max(seg_start, t0)),
            x1=x(min(seg_end, t1)),
            color=cpu_color(sample.load_pct),
            load_pct=sample.load_pct,
        ))

    ticks = tuple(
        TimeTick(t=t, x=x(t), label=fmt_clock(t)) for t in _nice_ticks(t0, t1)
    )

    return SceneDescription(
        t0=t0,
        t1=t1,
        px_per_ms=ppm,
        duration_ms=duration,
        slice_ms=slice_ms,
        time_axis=ticks,
        cpu_strip=tuple(segments),
        lanes=tuple(lanes),
        rects=tuple(rects),
        glyphs=tuple(glyphs),
        arcs=tuple(arcs),
        external_lines=external_lines,
        birds_eye=birds_eye(snapshot, DEFAULT_BIRDS_EYE_BUCKETS),
    )
