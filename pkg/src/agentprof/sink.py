"""Event sink recording a capture session into a snapshot file.

The sink buffers events in memory and seals the snapshot on `end_session`.
`record()` may be called from several producer threads; the flush happens on
whichever thread ends the session. Ordering ties at equal timestamps are
broken by the arrival sequence number, so the flushed stream is a stable sort
of the interleaving the producers actually generated.

A disabled sink accepts every call and discards it at constant cost, so
instrumented platforms pay nothing when profiling is off.
"""
from __future__ import annotations

import itertools
import logging
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from .clock import VirtualClock, WallClock
from .errors import SessionAlreadyOpen, SessionClosed
from .model import (
    AgentDescriptor,
    CpuSample,
    LifecycleEvent,
    SessionInfo,
    TraceEvent,
    advance_lifecycle,
    validate_event,
)
from .store import write_snapshot

log = logging.getLogger(__name__)

DEFAULT_SAMPLER_INTERVAL_MS = 1000

# load source: clock "now" in session-relative ms -> load percentage
LoadSource = Callable[[int], float]


@dataclass(frozen=True)
class SnapshotHandle:
    """Summary of a sealed capture, returned by `end_session`."""

    path: Path | None
    session: SessionInfo
    agent_count: int
    event_count: int
    warnings: tuple[str, ...] = ()


class ProfilerSink:
    """Recording endpoint the instrumented platform calls into.

    One sink records at most one session at a time; `begin_session` /
    `end_session` must be externally serialized while `record` may be called
    concurrently in between.
    """

    def __init__(
        self,
        out_path: str | Path | None = None,
        clock: VirtualClock | WallClock | None = None,
        sampler_interval_ms: int = DEFAULT_SAMPLER_INTERVAL_MS,
        load_source: LoadSource | None = None,
        enabled: bool = True,
    ):
        if sampler_interval_ms < 1:
            raise ValueError("sampler_interval_ms must be >= 1")
        self.out_path = Path(out_path) if out_path is not None else None
        self.clock = clock if clock is not None else WallClock()
        self.sampler_interval_ms = sampler_interval_ms
        self.load_source = load_source
        self.enabled = enabled
        self._open = False
        self._lock = threading.Lock()
        self._reset()

    def _reset(self) -> None:
        self._buffer: list[tuple[int, int, TraceEvent]] = []
        self._seq = itertools.count()
        self._agents: dict[str, AgentDescriptor] = {}
        self._lifecycle: dict[str, str] = {}
        self._warnings: list[str] = []
        self._session_id: str | None = None
        self._platform_name = ""
        self._slice_ms = 0
        self._began_epoch_ms = 0
        self._open_session: SessionInfo | None = None

    # -- session boundary ----------------------------------------------------

    def begin_session(
        self,
        platform_name: str,
        slice_ms: int,
        session_id: str | None = None,
    ) -> "ProfilerSink":
        if self._open:
            raise SessionAlreadyOpen("a capture session is already open on this sink")
        if slice_ms < 1:
            raise ValueError("slice_ms must be >= 1")
        if not platform_name:
            raise ValueError("platform_name must be non-empty")
        self._reset()
        self._platform_name = platform_name
        self._slice_ms = slice_ms
        self._began_epoch_ms = self.clock.now_epoch_ms()
        self._session_id = session_id or f"{platform_name}-{self._began_epoch_ms}"
        # duration is a placeholder while the session is open; record()
        # validates with open_ended=True so the bound is never consulted
        self._open_session = SessionInfo(
            session_id=self._session_id,
            platform_name=platform_name,
            started_at_epoch_ms=self._began_epoch_ms,
            duration_ms=0,
            slice_ms=slice_ms,
        )
        self._open = True
        return self

    def end_session(self) -> SnapshotHandle:
        if not self._open:
            raise SessionClosed("no open capture session")
        self._open = False
        duration = max(0, self.clock.now_epoch_ms() - self._began_epoch_ms)
        session = SessionInfo(
            session_id=self._session_id,
            platform_name=self._platform_name,
            started_at_epoch_ms=self._began_epoch_ms,
            duration_ms=duration,
            slice_ms=self._slice_ms,
        )
        self._buffer.sort(key=lambda entry: (entry[0], entry[1]))
        events = [entry[2] for entry in self._buffer]
        agents = list(self._agents.values())
        path = self.out_path
        if path is not None:
            write_snapshot(path, session, agents, events)
        handle = SnapshotHandle(
            path=path,
            session=session,
            agent_count=len(agents),
            event_count=len(events),
            warnings=tuple(self._warnings),
        )
        self._reset()
        return handle

    # -- recording -----------------------------------------------------------

    def register_agent(self, agent: AgentDescriptor) -> None:
        if not self._open:
            raise SessionClosed("no open capture session")
        if not self.enabled:
            return
        agent.check()
        with self._lock:
            self._agents[agent.agent_id] = agent

    def record(self, event: TraceEvent) -> None:
        """Validate and buffer one event; raises ValidationError on bad input."""
        if not self._open:
            raise SessionClosed("no open capture session")
        if not self.enabled:
            return
        validate_event(
            event, self._open_session, self._agents, self._lifecycle, open_ended=True
        )
        if isinstance(event, LifecycleEvent):
            with self._lock:
                self._lifecycle[event.agent_id] = advance_lifecycle(
                    self._lifecycle.get(event.agent_id, ""), event.kind
                )
        self._buffer.append((event.timestamp, next(self._seq), event))

    def sample_cpu(self) -> CpuSample:
        """Sample the configured load source over the trailing window.

        The sample is stamped at the window start. A failing source records
        0% and leaves a warning in the session log rather than aborting the
        capture.
        """
        if not self._open:
            raise SessionClosed("no open capture session")
        now = self.clock.now_epoch_ms() - self._began_epoch_ms
        window_start = max(0, now - self.sampler_interval_ms)
        load = 0.0
        if self.load_source is not None:
            try:
                load = float(self.load_source(now))
            except Exception as exc:  # failed host read: degrade, never abort
                self._warnings.append(f"cpu sample at {window_start}: {exc}")
                log.warning("cpu load source failed at t=%d: %s", window_start, exc)
                load = 0.0
        load = min(100.0, max(0.0, load))
        sample = CpuSample(at=window_start, load_pct=load)
        if self.enabled:
            self._buffer.append((sample.timestamp, next(self._seq), sample))
        return sample


def busy_fraction(intervals: list[tuple[int, int]], w0: int, w1: int) -> float:
    """Percentage of [w0, w1) covered by the given sorted, disjoint intervals.

    This is the simulator-side CPU load oracle: the platform's own ledger of
    busy time divided by the window width.
    """
    if w1 <= w0:
        return 0.0
    covered = 0
    for start, end in intervals:
        if end <= w0:
            continue
        if start >= w1:
            break
        covered += min(end, w1) - max(start, w0)
    return 100.0 * covered / (w1 - w0)
