"""Profiling toolkit for message-passing multi-agent systems.

Capture scheduler, lifecycle, message and CPU events from an instrumented
platform into a portable single-file snapshot, then compute flat profiles,
global statistics and interactive space-time diagram scenes from it.
"""

from .clock import VirtualClock, WallClock
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
    classify_duration,
    validate_event,
)
from .queries import (
    FlatProfile,
    FlatProfileRow,
    GlobalStats,
    cpu_series,
    events_in_range,
    flat_profile,
    global_stats,
    message_detail,
)
from .scene import SceneDescription, Viewport, birds_eye, compile_scene, cpu_color
from .simulator import Phase, ScenarioSpec, TaskClass, default_scenario, run_scenario
from .sink import ProfilerSink, SnapshotHandle
from .store import Snapshot, SnapshotReader, read_snapshot, write_snapshot

__version__ = "0.1.0"

__all__ = [
    "AgentDescriptor",
    "CpuSample",
    "Endpoint",
    "FipaHeaders",
    "FlatProfile",
    "FlatProfileRow",
    "GlobalStats",
    "IterationBreakdown",
    "IterationEvent",
    "LifecycleEvent",
    "MessageEvent",
    "Phase",
    "ProfilerSink",
    "ScenarioSpec",
    "SceneDescription",
    "SessionInfo",
    "SimpleEvent",
    "Snapshot",
    "SnapshotHandle",
    "SnapshotReader",
    "TaskClass",
    "Viewport",
    "VirtualClock",
    "WallClock",
    "birds_eye",
    "classify_duration",
    "compile_scene",
    "cpu_color",
    "cpu_series",
    "default_scenario",
    "events_in_range",
    "flat_profile",
    "global_stats",
    "message_detail",
    "read_snapshot",
    "run_scenario",
    "validate_event",
    "write_snapshot",
]
