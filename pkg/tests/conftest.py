from pathlib import Path

import pytest

from agentprof.clock import VirtualClock
from agentprof.simulator import default_scenario, run_scenario, scenario_session_id
from agentprof.sink import ProfilerSink
from agentprof.store import Snapshot, read_snapshot

from golden_profile import build_golden_snapshot


def record_benchmark(path: Path, spec=None) -> Path:
    spec = spec or default_scenario()
    sink = ProfilerSink(out_path=path, clock=VirtualClock())
    sink.begin_session(
        platform_name=spec.platform_name,
        slice_ms=spec.slice_ms,
        session_id=scenario_session_id(spec),
    )
    run_scenario(spec, sink)
    return path


@pytest.fixture(scope="session")
def bench_snapshot_path(tmp_path_factory) -> Path:
    return record_benchmark(tmp_path_factory.mktemp("bench") / "bench.aspot")


@pytest.fixture(scope="session")
def bench_snapshot(bench_snapshot_path) -> Snapshot:
    return read_snapshot(bench_snapshot_path)


@pytest.fixture(scope="session")
def golden_snapshot_path(tmp_path_factory) -> Path:
    return build_golden_snapshot(tmp_path_factory.mktemp("golden") / "golden.aspot")


@pytest.fixture(scope="session")
def golden_snapshot(golden_snapshot_path) -> Snapshot:
    return read_snapshot(golden_snapshot_path)
