"""Portable single-file snapshot storage (`.aspot`).

A snapshot is UTF-8 text, one JSON record per line, in a fixed order:
manifest, agent descriptors, events sorted by (timestamp, seq), and a final
integrity record carrying the record count and a SHA-256 over every preceding
byte. Field order inside each record is fixed and all numbers are decimal
integers, so identical inputs always produce identical bytes. The full layout
is documented field-by-field in docs/snapshot-format.md.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .errors import CorruptSnapshot, MalformedRecord, UnorderedEvents, UnsupportedVersion
from .model import (
    AgentDescriptor,
    CpuSample,
    Endpoint,
    FipaHeaders,
    IterationBreakdown,
    IterationEvent,
    LifecycleEvent,
    MessageEvent,
    SessionInfo,
    SimpleEvent,
    TraceEvent,
)

SNAPSHOT_SUFFIX = ".aspot"
SUPPORTED_VERSIONS = frozenset({1})


def _dumps(record: dict) -> str:
    return json.dumps(record, separators=(",", ":"), ensure_ascii=False)


def _manifest_record(session: SessionInfo) -> dict:
    return {
        "t": "manifest",
        "format_version": session.format_version,
        "session_id": session.session_id,
        "platform": session.platform_name,
        "started_at_epoch_ms": session.started_at_epoch_ms,
        "duration_ms": session.duration_ms,
        "slice_ms": session.slice_ms,
        "clock_resolution_ms": session.clock_resolution_ms,
    }


def _agent_record(agent: AgentDescriptor) -> dict:
    return {
        "t": "agent",
        "agent_id": agent.agent_id,
        "name": agent.name,
        "role": agent.role,
        "rationality": agent.rationality,
    }


def _event_record(event: TraceEvent, seq: int) -> dict:
    if isinstance(event, LifecycleEvent):
        return {"t": "lifecycle", "seq": seq, "agent_id": event.agent_id,
                "kind": event.kind, "at": event.at}
    if isinstance(event, IterationEvent):
        rec = {"t": "iteration", "seq": seq, "agent_id": event.agent_id,
               "start": event.start, "duration_ms": event.duration_ms}
        if event.breakdown is not None:
            rec["perception_ms"] = event.breakdown.perception_ms
            rec["reasoning_ms"] = event.breakdown.reasoning_ms
            rec["action_ms"] = event.breakdown.action_ms
        return rec
    if isinstance(event, SimpleEvent):
        rec = {"t": "simple", "seq": seq, "agent_id": event.agent_id,
               "at": event.at, "kind": event.kind}
        if event.payload is not None:
            rec["payload"] = event.payload
        return rec
    if isinstance(event, MessageEvent):
        rec = {
            "t": "message", "seq": seq, "message_id": event.message_id,
            "from_platform": event.sender.platform_id,
            "from_agent": event.sender.agent_id,
            "from_external": event.sender.is_external,
            "to_platform": event.receiver.platform_id,
            "to_agent": event.receiver.agent_id,
            "to_external": event.receiver.is_external,
            "sent_at": event.sent_at,
        }
        if event.received_at is not None:
            rec["received_at"] = event.received_at
        rec["scope"] = event.scope
        rec["performative"] = event.headers.performative
        if event.headers.conversation_id is not None:
            rec["conversation_id"] = event.headers.conversation_id
        rec["content"] = event.headers.content
        if event.headers.other:
            rec["other"] = [[k, v] for k, v in event.headers.other]
        return rec
    if isinstance(event, CpuSample):
        return {"t": "cpu", "seq": seq, "at": event.at,
                "load_cpct": round(event.load_pct * 100)}
    raise TypeError(f"unknown event type {type(event).__name__}")


def _require(record: dict, key: str, line_no: int):
    try:
        return record[key]
    except KeyError:
        raise MalformedRecord(f"missing field {key!r}", line_no) from None


def _decode_event(record: dict, line_no: int) -> TraceEvent:
    tag = record["t"]
    if tag == "lifecycle":
        return LifecycleEvent(
            agent_id=_require(record, "agent_id", line_no),
            kind=_require(record, "kind", line_no),
            at=_require(record, "at", line_no),
        )
    if tag == "iteration":
        breakdown = None
        if "perception_ms" in record:
            breakdown = IterationBreakdown(
                perception_ms=record["perception_ms"],
                reasoning_ms=_require(record, "reasoning_ms", line_no),
                action_ms=_require(record, "action_ms", line_no),
            )
        return IterationEvent(
            agent_id=_require(record, "agent_id", line_no),
            start=_require(record, "start", line_no),
            duration_ms=_require(record, "duration_ms", line_no),
            breakdown=breakdown,
        )
    if tag == "simple":
        return SimpleEvent(
            agent_id=_require(record, "agent_id", line_no),
            at=_require(record, "at", line_no),
            kind=_require(record, "kind", line_no),
            payload=record.get("payload"),
        )
    if tag == "message":
        headers = FipaHeaders(
            performative=_require(record, "performative", line_no),
            content=record.get("content", ""),
            conversation_id=record.get("conversation_id"),
            other=tuple((k, v) for k, v in record.get("other", [])),
        )
        return MessageEvent(
            message_id=_require(record, "message_id", line_no),
            sender=Endpoint(
                platform_id=_require(record, "from_platform", line_no),
                agent_id=_require(record, "from_agent", line_no),
                is_external=record.get("from_external", False),
            ),
            receiver=Endpoint(
                platform_id=_require(record, "to_platform", line_no),
                agent_id=_require(record, "to_agent", line_no),
                is_external=record.get("to_external", False),
            ),
            sent_at=_require(record, "sent_at", line_no),
            received_at=record.get("received_at"),
            headers=headers,
            scope=_require(record, "scope", line_no),
        )
    if tag == "cpu":
        return CpuSample(
            at=_require(record, "at", line_no),
            load_pct=_require(record, "load_cpct", line_no) / 100,
        )
    raise MalformedRecord(f"unknown record tag {tag!r}", line_no)


@dataclass(eq=True)
class Snapshot:
    """Fully loaded, integrity-checked capture session."""

    manifest: SessionInfo
    agents: tuple[AgentDescriptor, ...]
    events: tuple[TraceEvent, ...]
    _message_index: dict | None = field(default=None, compare=False, repr=False)

    def message_by_id(self, message_id: str) -> MessageEvent | None:
        if self._message_index is None:
            self._message_index = {
                ev.message_id: ev for ev in self.events if isinstance(ev, MessageEvent)
            }
        return self._message_index.get(message_id)


def write_snapshot(
    path: str | Path,
    session: SessionInfo,
    agents: Iterable[AgentDescriptor],
    events: Iterable[TraceEvent],
) -> Path:
    """Stream a validated, ordered event sequence into a sealed snapshot file.

    Events must arrive sorted by timestamp (ties already resolved by the
    caller's recording order); raises UnorderedEvents otherwise. I/O errors
    surface as OSError.
    """
    path = Path(path)
    digest = hashlib.sha256()
    records = 0

    def emit(out, record: dict) -> None:
        nonlocal records
        line = (_dumps(record) + "\n").encode("utf-8")
        digest.update(line)
        out.write(line)
        records += 1

    try:
        with open(path, "wb") as out:
            emit(out, _manifest_record(session))
            for agent in agents:
                emit(out, _agent_record(agent))
            last_ts = None
            for seq, event in enumerate(events):
                ts = event.timestamp
                if last_ts is not None and ts < last_ts:
                    raise UnorderedEvents(f"event seq {seq} at {ts} after {last_ts}")
                last_ts = ts
                emit(out, _event_record(event, seq))
            seal = {"t": "seal", "records": records, "sha256": digest.hexdigest()}
            out.write((_dumps(seal) + "\n").encode("utf-8"))
    except UnorderedEvents:
        path.unlink(missing_ok=True)  # do not leave a half-written file behind
        raise
    return path


class SnapshotReader:
    """Streaming access to a snapshot file: O(1) memory over the event count.

    The manifest and agent list are parsed eagerly; `iter_events()` walks the
    event records one line at a time, verifying the integrity seal when the
    stream is fully consumed.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._fh = open(self.path, "rb")
        try:
            self._init_header()
        except Exception:
            self._fh.close()
            raise

    def _init_header(self) -> None:
        self._digest = hashlib.sha256()
        self._line_no = 0
        self._records = 0
        manifest_rec = self._next_record()
        if manifest_rec is None or manifest_rec.get("t") != "manifest":
            raise CorruptSnapshot("first record is not a manifest")
        version = manifest_rec.get("format_version")
        if version not in SUPPORTED_VERSIONS:
            raise UnsupportedVersion(f"format_version {version}")
        self.manifest = SessionInfo(
            session_id=manifest_rec.get("session_id", ""),
            platform_name=manifest_rec.get("platform", ""),
            started_at_epoch_ms=manifest_rec.get("started_at_epoch_ms", 0),
            duration_ms=manifest_rec.get("duration_ms", 0),
            slice_ms=manifest_rec.get("slice_ms", 1),
            clock_resolution_ms=manifest_rec.get("clock_resolution_ms", 1),
            format_version=version,
        )
        agents = []
        self._pending: dict | None = None
        while True:
            rec = self._next_record()
            if rec is None:  # seal reached: snapshot holds no events
                break
            if rec.get("t") == "agent":
                agents.append(AgentDescriptor(
                    agent_id=rec.get("agent_id", ""),
                    name=rec.get("name", ""),
                    role=rec.get("role", ""),
                    rationality=rec.get("rationality", "reactive"),
                ))
            else:
                self._pending = rec
                break
        self.agents = tuple(agents)

    def _next_record(self) -> dict | None:
        """Read one line; hash all records, return None once the seal is hit."""
        raw = self._fh.readline()
        if not raw:
            raise CorruptSnapshot("unexpected end of file (missing seal)")
        if not raw.endswith(b"\n"):
            raise CorruptSnapshot("file truncated mid-record")
        self._line_no += 1
        try:
            rec = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise MalformedRecord(str(exc), self._line_no) from None
        if not isinstance(rec, dict) or "t" not in rec:
            raise MalformedRecord("record is not a tagged object", self._line_no)
        if rec["t"] == "seal":
            expected = self._digest.hexdigest()
            if rec.get("sha256") != expected or rec.get("records") != self._records:
                raise CorruptSnapshot("integrity record does not match content")
            trailing = self._fh.read(1)
            if trailing:
                raise CorruptSnapshot("data after integrity record")
            return None
        self._digest.update(raw)
        self._records += 1
        return rec

    def iter_events(self) -> Iterator[TraceEvent]:
        rec = self._pending
        self._pending = None
        last_key = None
        seq = 0
        while rec is not None:
            tag = rec.get("t")
            if tag in ("manifest", "agent"):
                raise MalformedRecord(f"{tag} record after events began", self._line_no)
            if rec.get("seq") != seq:
                raise MalformedRecord(f"expected seq {seq}", self._line_no)
            event = _decode_event(rec, self._line_no)
            if last_key is not None and event.timestamp < last_key:
                raise MalformedRecord("events not sorted by timestamp", self._line_no)
            last_key = event.timestamp
            seq += 1
            yield event
            rec = self._next_record()
        self.close()

    def close(self) -> None:
        if not self._fh.closed:
            self._fh.close()

    def __enter__(self) -> "SnapshotReader":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def read_snapshot(path: str | Path) -> Snapshot:
    """Load a full snapshot into memory; checksum and version are verified."""
    reader = SnapshotReader(path)
    events = tuple(reader.iter_events())
    return Snapshot(manifest=reader.manifest, agents=reader.agents, events=events)
