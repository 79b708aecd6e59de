"""Deterministic simulated agent platform driving the recording sink.

Overseer agents order small/medium/large tasks to worker agents over FIPA
request messages. Workers execute tasks as timed iterations with normally
distributed durations, refuse orders for a few iterations after overshooting
their time slice, and occasionally act as overseers for one iteration when an
order asks them to delegate.

Scheduling is sequential: one round per simulated second grants every live
agent a single iteration, back to back, and a round that overshoots a second
simply delays the next one (no preemption). Population changes, a platform
pause, and the session stop arrive as scripted phases. Everything is driven
by one seeded RNG on a virtual clock, so a given scenario always produces a
byte-identical snapshot.
"""
from __future__ import annotations

import hashlib
import json
import random
import time
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import yaml

from .clock import VirtualClock
from .errors import InvalidSpec
from .model import (
    AgentDescriptor,
    CpuSample,
    Endpoint,
    FipaHeaders,
    IterationBreakdown,
    IterationEvent,
    LifecycleEvent,
    MessageEvent,
    SCOPE_INTER,
    SCOPE_INTRA,
    SimpleEvent,
    classify_duration as classify_task_duration,  # shared slice-overshoot rule
)
from .sink import ProfilerSink, SnapshotHandle

ROUND_MS = 1000  # scheduler round cadence: one round per simulated second

SET_WORKERS = "set_workers"
PAUSE = "pause"
STOP = "stop"

EXTERNAL_PLATFORM = "remote-platform"


@dataclass(frozen=True)
class TaskClass:
    mean_ms: float
    stddev_ms: float
    weight: float


@dataclass(frozen=True)
class Phase:
    at_ms: int
    action: str
    workers: int | None = None      # for set_workers
    duration_ms: int | None = None  # for pause


def _default_task_mix() -> dict[str, TaskClass]:
    return {
        "small": TaskClass(mean_ms=100.0, stddev_ms=30.0, weight=0.6),
        "medium": TaskClass(mean_ms=550.0, stddev_ms=10.0, weight=0.25),
        "large": TaskClass(mean_ms=3300.0, stddev_ms=200.0, weight=0.15),
    }


@dataclass(frozen=True)
class ScenarioSpec:
    seed: int = 20260811
    phases: tuple[Phase, ...] = ()
    initial_workers: int = 12
    overseers: int = 2
    task_mix: Mapping[str, TaskClass] = field(default_factory=_default_task_mix)
    delegation_prob: float = 0.05
    refusal_cooldown_iterations: int = 5
    inter_platform_fraction: float = 0.0
    platform_name: str = "sim-platform"
    slice_ms: int = 1000
    overseer_cost_mean_ms: float = 7.0
    overseer_cost_stddev_ms: float = 3.0


def default_scenario(seed: int = 20260811) -> ScenarioSpec:
    """Reference run: 12+2 agents, +15 workers at 10 min, a 20 s pause at
    14 min, back down to 12 workers, stop after 5 more minutes."""
    return ScenarioSpec(
        seed=seed,
        phases=(
            Phase(at_ms=600_000, action=SET_WORKERS, workers=27),
            Phase(at_ms=840_000, action=PAUSE, duration_ms=20_000),
            Phase(at_ms=860_000, action=SET_WORKERS, workers=12),
            Phase(at_ms=1_160_000, action=STOP),
        ),
    )


def validate_spec(spec: ScenarioSpec) -> None:
    if spec.overseers < 1:
        raise InvalidSpec("overseers must be >= 1")
    if spec.initial_workers < 0:
        raise InvalidSpec("initial_workers must be >= 0")
    if spec.slice_ms < 1:
        raise InvalidSpec("slice_ms must be >= 1")
    if not 0.0 <= spec.delegation_prob <= 1.0:
        raise InvalidSpec("delegation_prob outside [0, 1]")
    if not 0.0 <= spec.inter_platform_fraction <= 1.0:
        raise InvalidSpec("inter_platform_fraction outside [0, 1]")
    if spec.refusal_cooldown_iterations < 0:
        raise InvalidSpec("refusal_cooldown_iterations must be >= 0")
    if not spec.task_mix:
        raise InvalidSpec("task_mix must not be empty")
    for name, cls in spec.task_mix.items():
        if cls.mean_ms <= 0:
            raise InvalidSpec(f"task class {name!r}: mean_ms must be positive")
        if cls.stddev_ms < 0:
            raise InvalidSpec(f"task class {name!r}: stddev_ms must be >= 0")
        if cls.weight <= 0:
            raise InvalidSpec(f"task class {name!r}: weight must be positive")
    last_at = -1
    for i, phase in enumerate(spec.phases):
        if phase.at_ms <= last_at:
            raise InvalidSpec("phase times must be strictly increasing")
        last_at = phase.at_ms
        if phase.action == SET_WORKERS:
            if phase.workers is None or phase.workers < 0:
                raise InvalidSpec("set_workers needs workers >= 0")
        elif phase.action == PAUSE:
            if phase.duration_ms is None or phase.duration_ms < 1:
                raise InvalidSpec("pause needs duration_ms >= 1")
        elif phase.action == STOP:
            if i != len(spec.phases) - 1:
                raise InvalidSpec("stop must be the final phase")
        else:
            raise InvalidSpec(f"unknown phase action {phase.action!r}")


def _spec_canonical(spec: ScenarioSpec) -> str:
    payload = {
        "seed": spec.seed,
        "phases": [
            [p.at_ms, p.action, p.workers, p.duration_ms] for p in spec.phases
        ],
        "initial_workers": spec.initial_workers,
        "overseers": spec.overseers,
        "task_mix": {
            name: [cls.mean_ms, cls.stddev_ms, cls.weight]
            for name, cls in sorted(spec.task_mix.items())
        },
        "delegation_prob": spec.delegation_prob,
        "refusal_cooldown_iterations": spec.refusal_cooldown_iterations,
        "inter_platform_fraction": spec.inter_platform_fraction,
        "platform_name": spec.platform_name,
        "slice_ms": spec.slice_ms,
        "overseer_cost": [spec.overseer_cost_mean_ms, spec.overseer_cost_stddev_ms],
    }
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def scenario_session_id(spec: ScenarioSpec) -> str:
    digest = hashlib.sha256(_spec_canonical(spec).encode("utf-8")).hexdigest()
    return f"sim-{digest[:12]}"


def load_scenario(path: str | Path) -> ScenarioSpec:
    """Parse the human-editable YAML scenario file (see scenarios/default.yaml)."""
    try:
        raw = yaml.safe_load(Path(path).read_text(encoding="utf-8"))
    except yaml.YAMLError as exc:
        raise InvalidSpec(f"{path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise InvalidSpec(f"{path}: top level must be a mapping")
    try:
        spec = scenario_from_dict(raw)
    except (TypeError, ValueError, KeyError, InvalidSpec) as exc:
        raise InvalidSpec(f"{path}: {exc}") from exc
    return spec


def scenario_from_dict(raw: dict) -> ScenarioSpec:
    known = {
        "seed", "phases", "initial_workers", "overseers", "task_mix",
        "delegation_prob", "refusal_cooldown_iterations",
        "inter_platform_fraction", "platform_name", "slice_ms",
        "overseer_cost_mean_ms", "overseer_cost_stddev_ms",
    }
    unknown = set(raw) - known
    if unknown:
        raise InvalidSpec(f"unknown scenario keys: {sorted(unknown)}")
    kwargs = dict(raw)
    if "task_mix" in kwargs:
        mix = {}
        for name, entry in kwargs["task_mix"].items():
            mix[name] = TaskClass(
                mean_ms=float(entry["mean_ms"]),
                stddev_ms=float(entry.get("stddev_ms", 0.0)),
                weight=float(entry.get("weight", 1.0)),
            )
        kwargs["task_mix"] = mix
    if "phases" in kwargs:
        phases = []
        for entry in kwargs["phases"]:
            phases.append(Phase(
                at_ms=int(entry["at_ms"]),
                action=str(entry["action"]),
                workers=int(entry["workers"]) if "workers" in entry else None,
                duration_ms=int(entry["duration_ms"]) if "duration_ms" in entry else None,
            ))
        kwargs["phases"] = tuple(phases)
    spec = ScenarioSpec(**kwargs)
    validate_spec(spec)
    return spec


@dataclass
class _PendingOrder:
    message_id: str
    sender_id: str
    sent_at: int
    size: str
    delegate: bool


class _WorkerState:
    __slots__ = ("agent_id", "inbox", "iteration_count", "recently_overloaded_until",
                 "acting_as_overseer", "last_event_end")

    def __init__(self, agent_id: str):
        self.agent_id = agent_id
        self.inbox: deque[_PendingOrder] = deque()
        self.iteration_count = 0
        self.recently_overloaded_until = 0
        self.acting_as_overseer = False
        self.last_event_end = 0


class _Simulation:
    def __init__(self, spec: ScenarioSpec, sink: ProfilerSink):
        self.spec = spec
        self.sink = sink
        self.rng = random.Random(spec.seed)
        self.size_names = sorted(spec.task_mix)
        weights = [spec.task_mix[n].weight for n in self.size_names]
        total = sum(weights)
        acc = 0.0
        self.size_cum = []
        for w in weights:
            acc += w / total
            self.size_cum.append(acc)
        self.masters: list[str] = []
        self.workers: list[_WorkerState] = []
        self.worker_seq = 0
        self.message_seq = 0
        self.busy: list[tuple[int, int]] = []
        self.last_lifecycle: dict[str, int] = {}
        self.last_event_at = 0

    # -- event emission helpers ----------------------------------------------

    def _emit_lifecycle(self, agent_id: str, kind: str, at: int) -> None:
        self.sink.record(LifecycleEvent(agent_id=agent_id, kind=kind, at=at))
        self.last_lifecycle[agent_id] = at
        self.last_event_at = max(self.last_event_at, at)

    def _emit_iteration(self, agent_id: str, start: int, duration: int,
                        breakdown: IterationBreakdown | None = None) -> int:
        self.sink.record(IterationEvent(
            agent_id=agent_id, start=start, duration_ms=duration, breakdown=breakdown,
        ))
        if duration > 0:
            self.busy.append((start, start + duration))
        self.last_event_at = max(self.last_event_at, start + duration)
        return start + duration

    def _next_message_id(self) -> str:
        self.message_seq += 1
        return f"m{self.message_seq:06d}"

    def _sample_size(self) -> str:
        u = self.rng.random()
        for name, bound in zip(self.size_names, self.size_cum):
            if u <= bound:
                return name
        return self.size_names[-1]

    def _sample_task_ms(self, size: str) -> int:
        cls = self.spec.task_mix[size]
        return max(1, round(self.rng.gauss(cls.mean_ms, cls.stddev_ms)))

    def _sample_overseer_ms(self) -> int:
        return max(1, round(self.rng.gauss(
            self.spec.overseer_cost_mean_ms, self.spec.overseer_cost_stddev_ms)))

    def _endpoint(self, agent_id: str) -> Endpoint:
        return Endpoint(platform_id=self.spec.platform_name, agent_id=agent_id)

    def _record_message(self, order: _PendingOrder, receiver_id: str,
                        received_at: int | None) -> None:
        content = ("delegate" if order.delegate else "execute") + f" {order.size} task"
        self.sink.record(MessageEvent(
            message_id=order.message_id,
            sender=self._endpoint(order.sender_id),
            receiver=self._endpoint(receiver_id),
            sent_at=order.sent_at,
            received_at=received_at,
            headers=FipaHeaders(
                performative="request",
                content=content,
                conversation_id=f"conv-{order.message_id}",
            ),
            scope=SCOPE_INTRA,
        ))
        if received_at is not None:
            self.last_event_at = max(self.last_event_at, received_at)

    def _record_external_message(self, sender_id: str, sent_at: int, size: str) -> None:
        message_id = self._next_message_id()
        remote = f"remote{1 + self.rng.randrange(3)}"
        self.sink.record(MessageEvent(
            message_id=message_id,
            sender=self._endpoint(sender_id),
            receiver=Endpoint(platform_id=EXTERNAL_PLATFORM, agent_id=remote,
                              is_external=True),
            sent_at=sent_at,
            received_at=None,
            headers=FipaHeaders(
                performative="request",
                content=f"execute {size} task",
                conversation_id=f"conv-{message_id}",
            ),
            scope=SCOPE_INTER,
        ))

    # -- population management -----------------------------------------------

    def _create_master(self, index: int, at: int) -> None:
        agent_id = f"master{index}"
        self.sink.register_agent(AgentDescriptor(
            agent_id=agent_id, name=agent_id, role="overseer",
            rationality="deliberative",
        ))
        self._emit_lifecycle(agent_id, "created", at)
        self._emit_lifecycle(agent_id, "started", at)
        self.masters.append(agent_id)

    def _create_worker(self, at: int) -> None:
        self.worker_seq += 1
        agent_id = f"agent{self.worker_seq:03d}"
        self.sink.register_agent(AgentDescriptor(
            agent_id=agent_id, name=agent_id, role="worker", rationality="reactive",
        ))
        self._emit_lifecycle(agent_id, "created", at)
        self._emit_lifecycle(agent_id, "started", at)
        self.workers.append(_WorkerState(agent_id))

    def _set_workers(self, target: int, at: int) -> None:
        while len(self.workers) < target:
            self._create_worker(at)
        while len(self.workers) > target:
            worker = self.workers.pop()  # newest first, keeping the original crew
            stamp = max(at, self.last_lifecycle.get(worker.agent_id, 0),
                        worker.last_event_end)
            self._emit_lifecycle(worker.agent_id, "stopped", stamp)
            self._emit_lifecycle(worker.agent_id, "destroyed", stamp)
            for order in worker.inbox:  # orders it never got to process
                self._record_message(order, worker.agent_id, received_at=None)
            worker.inbox.clear()

    def _live_agent_ids(self) -> list[str]:
        return self.masters + [w.agent_id for w in self.workers]

    # -- iterations ------------------------------------------------------------

    def _dispatch_order(self, sender_id: str, sent_at: int) -> None:
        """One task order from an overseer (or delegating worker)."""
        if self.rng.random() < self.spec.inter_platform_fraction:
            self._record_external_message(sender_id, sent_at, self._sample_size())
            return
        candidates = [w for w in self.workers if w.agent_id != sender_id]
        if not candidates:
            return
        target = candidates[self.rng.randrange(len(candidates))]
        order = _PendingOrder(
            message_id=self._next_message_id(),
            sender_id=sender_id,
            sent_at=sent_at,
            size=self._sample_size(),
            delegate=self.rng.random() < self.spec.delegation_prob,
        )
        target.inbox.append(order)

    def _master_iteration(self, agent_id: str, start: int) -> int:
        duration = self._sample_overseer_ms()
        third = duration // 3
        breakdown = IterationBreakdown(
            perception_ms=third, reasoning_ms=third, action_ms=duration - 2 * third,
        )
        if self.workers:
            self._dispatch_order(agent_id, start)
        else:
            duration = 0
            breakdown = None
        return self._emit_iteration(agent_id, start, duration, breakdown)

    def _worker_iteration(self, worker: _WorkerState, start: int) -> int:
        worker.iteration_count += 1
        if not worker.inbox:
            end = self._emit_iteration(worker.agent_id, start, 0)
            worker.last_event_end = max(worker.last_event_end, end)
            return end
        order = worker.inbox.popleft()
        self._record_message(order, worker.agent_id, received_at=start)
        self.sink.record(SimpleEvent(
            agent_id=worker.agent_id, at=start, kind="message_received",
            payload=order.message_id,
        ))
        if worker.iteration_count <= worker.recently_overloaded_until:
            # recently overloaded: refuse, but no refusal reply is sent
            self.sink.record(SimpleEvent(
                agent_id=worker.agent_id, at=start, kind="task_refused",
                payload=order.size,
            ))
            end = self._emit_iteration(worker.agent_id, start, 0)
        elif order.delegate:
            worker.acting_as_overseer = True
            duration = self._sample_overseer_ms()
            self._dispatch_order(worker.agent_id, start)
            end = self._emit_iteration(worker.agent_id, start, duration)
            worker.acting_as_overseer = False
        else:
            duration = self._sample_task_ms(order.size)
            end = self._emit_iteration(worker.agent_id, start, duration)
            if duration > self.spec.slice_ms:
                worker.recently_overloaded_until = (
                    worker.iteration_count + self.spec.refusal_cooldown_iterations
                )
        worker.last_event_end = max(worker.last_event_end, end)
        return end

    def _run_round(self, start: int) -> int:
        cursor = start
        for agent_id in list(self.masters):
            cursor = self._master_iteration(agent_id, cursor)
        for worker in list(self.workers):
            cursor = self._worker_iteration(worker, cursor)
        return cursor

    # -- cpu samples -----------------------------------------------------------

    def _record_cpu_samples(self, total_ms: int) -> None:
        if total_ms <= 0:
            return
        interval = self.sink.sampler_interval_ms
        intervals = self.busy
        n = len(intervals)
        i = 0
        for w0 in range(0, total_ms, interval):
            w1 = min(w0 + interval, total_ms)
            while i < n and intervals[i][1] <= w0:
                i += 1
            covered = 0
            j = i
            while j < n and intervals[j][0] < w1:
                covered += min(intervals[j][1], w1) - max(intervals[j][0], w0)
                j += 1
            load = 100.0 * covered / (w1 - w0)
            self.sink.record(CpuSample(at=w0, load_pct=load))

    # -- main loop ---------------------------------------------------------------

    def run(self) -> SnapshotHandle:
        spec = self.spec
        phases = spec.phases
        # run until the stop phase; without one, the last phase time (or t=0)
        # bounds the session
        stop_at = phases[-1].at_ms if phases else 0

        for index in range(1, spec.overseers + 1):
            self._create_master(index, 0)
        self._set_workers(spec.initial_workers, 0)

        virtual = isinstance(self.sink.clock, VirtualClock)
        wall_t0 = None if virtual else time.monotonic()

        round_start = 0
        pi = 0
        while True:
            while pi < len(phases) and phases[pi].at_ms <= round_start:
                phase = phases[pi]
                pi += 1
                if phase.action == SET_WORKERS:
                    self._set_workers(phase.workers, phase.at_ms)
                elif phase.action == PAUSE:
                    stamp = round_start
                    for agent_id in self._live_agent_ids():
                        self._emit_lifecycle(agent_id, "suspended", stamp)
                    resume_at = stamp + phase.duration_ms
                    for agent_id in self._live_agent_ids():
                        self._emit_lifecycle(agent_id, "resumed", resume_at)
                    round_start = resume_at
                # STOP is only a marker; the loop below honors stop_at
            if round_start >= stop_at:
                break
            if not virtual:
                lag = round_start / 1000 - (time.monotonic() - wall_t0)
                if lag > 0:
                    time.sleep(lag)
            cursor_end = self._run_round(round_start)
            round_start = max(round_start + ROUND_MS, cursor_end)

        end_ms = max(stop_at, self.last_event_at)
        for agent_id in self._live_agent_ids():
            self._emit_lifecycle(agent_id, "stopped", end_ms)
        # orders still in flight at session end were never received
        for worker in self.workers:
            for order in worker.inbox:
                self._record_message(order, worker.agent_id, received_at=None)
        self._record_cpu_samples(end_ms)

        if virtual:
            self.sink.clock.advance_to(end_ms)
        else:
            lag = end_ms / 1000 - (time.monotonic() - wall_t0)
            if lag > 0:
                time.sleep(lag)
        return self.sink.end_session()


def run_scenario(spec: ScenarioSpec, sink: ProfilerSink) -> SnapshotHandle:
    """Play a scenario into an open sink and seal the snapshot.

    Identical specs (seed included) produce byte-identical snapshot files when
    run on a virtual clock.
    """
    validate_spec(spec)
    return _Simulation(spec, sink).run()
