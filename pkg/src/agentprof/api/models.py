"""Pydantic views of the core dataclasses.

These models define the wire format: `model_dump_json()` is the canonical
serialized form, so the CLI exporters and the HTTP endpoints emit identical
bytes for identical parameters.
"""
from __future__ import annotations

from pydantic import BaseModel

from ..model import MessageEvent, SessionInfo
from ..queries import CpuBucket, FlatProfile, GlobalStats
from ..scene import BirdsEye, SceneDescription


class SessionInfoModel(BaseModel):
    session_id: str
    platform_name: str
    started_at_epoch_ms: int
    duration_ms: int
    slice_ms: int
    clock_resolution_ms: int
    format_version: int

    @classmethod
    def from_core(cls, info: SessionInfo) -> "SessionInfoModel":
        return cls(
            session_id=info.session_id,
            platform_name=info.platform_name,
            started_at_epoch_ms=info.started_at_epoch_ms,
            duration_ms=info.duration_ms,
            slice_ms=info.slice_ms,
            clock_resolution_ms=info.clock_resolution_ms,
            format_version=info.format_version,
        )


class FlatProfileRowModel(BaseModel):
    agent_id: str
    name: str
    iterations_nonzero: int
    overload_count: int
    activity_ms: int
    pct_session: float
    max_ms: int
    avg_ms: int
    msgs_sent: int
    msgs_received: int
    breakdown_ms: tuple[int, int, int] | None = None


class ProfileHeaderModel(BaseModel):
    duration_ms: int
    total_activity_ms: int
    messages_sent: int
    messages_received: int
    slice_ms: int


class FlatProfileModel(BaseModel):
    header: ProfileHeaderModel
    rows: list[FlatProfileRowModel]

    @classmethod
    def from_core(cls, profile: FlatProfile) -> "FlatProfileModel":
        return cls(
            header=ProfileHeaderModel(**vars(profile.header)),
            rows=[FlatProfileRowModel(**vars(row)) for row in profile.rows],
        )


class GlobalStatsModel(BaseModel):
    total_duration_ms: int
    total_activity_ms: int
    total_messages: int
    avg_active_agents_per_sec: float

    @classmethod
    def from_core(cls, stats: GlobalStats) -> "GlobalStatsModel":
        return cls(**vars(stats))


class CpuBucketModel(BaseModel):
    bucket_start: int
    mean_load_pct: float
    max_load_pct: float
    empty: bool


class CpuSeriesModel(BaseModel):
    bucket_ms: int
    buckets: list[CpuBucketModel]

    @classmethod
    def from_core(cls, bucket_ms: int, buckets: list[CpuBucket]) -> "CpuSeriesModel":
        return cls(
            bucket_ms=bucket_ms,
            buckets=[CpuBucketModel(**vars(b)) for b in buckets],
        )


class EndpointModel(BaseModel):
    platform_id: str
    agent_id: str
    is_external: bool


class MessageModel(BaseModel):
    message_id: str
    sender: EndpointModel
    receiver: EndpointModel
    sent_at: int
    received_at: int | None
    scope: str
    performative: str
    conversation_id: str | None
    content: str
    other: list[tuple[str, str]]

    @classmethod
    def from_core(cls, event: MessageEvent) -> "MessageModel":
        def endpoint(ep) -> EndpointModel:
            return EndpointModel(
                platform_id=ep.platform_id,
                agent_id=ep.agent_id,
                is_external=ep.is_external,
            )

        return cls(
            message_id=event.message_id,
            sender=endpoint(event.sender),
            receiver=endpoint(event.receiver),
            sent_at=event.sent_at,
            received_at=event.received_at,
            scope=event.scope,
            performative=event.headers.performative,
            conversation_id=event.headers.conversation_id,
            content=event.headers.content,
            other=list(event.headers.other),
        )


class TimeTickModel(BaseModel):
    t: int
    x: float
    label: str


class CpuSegmentModel(BaseModel):
    x0: float
    x1: float
    color: str
    load_pct: float


class LaneModel(BaseModel):
    agent_id: str
    caption: str
    darkness: float
    y_index: int
    x0: float
    x1: float


class RectModel(BaseModel):
    lane: str
    x0: float
    x1: float
    color: str
    event_ref: int


class GlyphModel(BaseModel):
    lane: str
    x: float
    icon_kind: str
    event_ref: int


class ArcModel(BaseModel):
    from_kind: str
    from_ref: str
    to_kind: str
    to_ref: str
    x_send: float
    x_receive: float | None
    message_id: str
    direction: str
    pending: bool


class ExternalLineModel(BaseModel):
    platform_id: str
    y_index: int


class BirdsEyeLaneModel(BaseModel):
    agent_id: str
    classes: list[str]


class BirdsEyeModel(BaseModel):
    duration_ms: int
    width_buckets: int
    lanes: list[BirdsEyeLaneModel]

    @classmethod
    def from_core(cls, strip: BirdsEye) -> "BirdsEyeModel":
        return cls(
            duration_ms=strip.duration_ms,
            width_buckets=strip.width_buckets,
            lanes=[
                BirdsEyeLaneModel(agent_id=lane.agent_id, classes=list(lane.classes))
                for lane in strip.lanes
            ],
        )


class SceneModel(BaseModel):
    t0: int
    t1: int
    px_per_ms: float
    duration_ms: int
    slice_ms: int
    time_axis: list[TimeTickModel]
    cpu_strip: list[CpuSegmentModel]
    lanes: list[LaneModel]
    rects: list[RectModel]
    glyphs: list[GlyphModel]
    arcs: list[ArcModel]
    external_lines: list[ExternalLineModel]
    birds_eye: BirdsEyeModel

    @classmethod
    def from_core(cls, scene: SceneDescription) -> "SceneModel":
        return cls(
            t0=scene.t0,
            t1=scene.t1,
            px_per_ms=scene.px_per_ms,
            duration_ms=scene.duration_ms,
            slice_ms=scene.slice_ms,
            time_axis=[TimeTickModel(**vars(t)) for t in scene.time_axis],
            cpu_strip=[CpuSegmentModel(**vars(s)) for s in scene.cpu_strip],
            lanes=[LaneModel(**vars(l)) for l in scene.lanes],
            rects=[RectModel(**vars(r)) for r in scene.rects],
            glyphs=[GlyphModel(**vars(g)) for g in scene.glyphs],
            arcs=[ArcModel(**vars(a)) for a in scene.arcs],
            external_lines=[ExternalLineModel(**vars(e)) for e in scene.external_lines],
            birds_eye=BirdsEyeModel.from_core(scene.birds_eye),
        )


def canonical_json(model: BaseModel) -> bytes:
    """The canonical wire bytes shared by the CLI exporters and the HTTP API."""
    return model.model_dump_json().encode("utf-8")
