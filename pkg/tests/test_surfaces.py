"""Cross-surface guarantees: CLI exports and HTTP bodies are byte-identical,
queries run single-pass over streaming readers, and range queries line up
with the recorded pause window."""
import json

import pytest
from fastapi.testclient import TestClient

from agentprof.api.server import create_app
from agentprof.cli import main
from agentprof.model import LifecycleEvent
from agentprof.queries import events_in_range, flat_profile, global_stats
from agentprof.store import SnapshotReader


@pytest.fixture()
def golden_client(golden_snapshot_path):
    with TestClient(create_app(golden_snapshot_path)) as client:
        yield client


def test_profile_json_bytes_match_http(golden_snapshot_path, golden_client, capsysbinary):
    assert main(["profile", str(golden_snapshot_path), "--format", "json"]) == 0
    cli_bytes = capsysbinary.readouterr().out.rstrip(b"\n")
    http_bytes = golden_client.get("/api/flat-profile").content
    assert cli_bytes == http_bytes


def test_scene_bytes_match_http(tmp_path, golden_snapshot_path, golden_client):
    out = tmp_path / "scene.json"
    assert main([
        "export-scene", str(golden_snapshot_path),
        "--t0", "1000", "--t1", "900000", "--px-per-ms", "0.125",
        "--out", str(out),
    ]) == 0
    response = golden_client.get(
        "/api/scene", params={"t0": 1000, "t1": 900000, "px_per_ms": 0.125})
    assert out.read_bytes() == response.content


def test_http_pct_closure_within_rounding_slack(golden_client):
    rows = golden_client.get("/api/flat-profile").json()["rows"]
    assert len(rows) == 35
    assert abs(sum(r["pct_session"] for r in rows) - 100.0) <= 0.005 * len(rows)


def test_queries_run_single_pass_over_stream(bench_snapshot_path, bench_snapshot):
    # a streaming reader is consumable once, so these would come back empty
    # (or blow up) if the aggregates took a second pass
    with SnapshotReader(bench_snapshot_path) as reader:
        streamed = flat_profile(reader)
    assert streamed == flat_profile(bench_snapshot)

    with SnapshotReader(bench_snapshot_path) as reader:
        stats = global_stats(reader)
    assert stats == global_stats(bench_snapshot)


def test_pause_window_range_query(bench_snapshot):
    suspends = [ev.at for ev in bench_snapshot.events
                if isinstance(ev, LifecycleEvent) and ev.kind == "suspended"]
    resumes = [ev.at for ev in bench_snapshot.events
               if isinstance(ev, LifecycleEvent) and ev.kind == "resumed"]
    window = (max(suspends) + 1, min(resumes))
    iterations = events_in_range(bench_snapshot, *window, kind_filter={"iteration"})
    assert iterations == []
    lifecycle = events_in_range(
        bench_snapshot, max(suspends), min(resumes) + 1, kind_filter={"lifecycle"})
    kinds = {hit.event.kind for hit in lifecycle}
    assert {"suspended", "resumed"} <= kinds


def test_avg_floor_identity(bench_snapshot):
    for row in flat_profile(bench_snapshot).rows:
        if row.iterations_nonzero:
            assert row.avg_ms * row.iterations_nonzero <= row.activity_ms
            assert row.activity_ms < (row.avg_ms + 1) * row.iterations_nonzero
            assert row.overload_count <= row.iterations_nonzero
            assert row.max_ms <= row.activity_ms


def test_realtime_recording(tmp_path):
    scenario = tmp_path / "rt.yaml"
    scenario.write_text(json.dumps({
        "seed": 3,
        "initial_workers": 2,
        "overseers": 1,
        "phases": [{"at_ms": 1500, "action": "stop"}],
    }))
    out = tmp_path / "rt.aspot"
    assert main(["record", "--scenario", str(scenario), "--out", str(out),
                 "--realtime"]) == 0
    from agentprof.store import read_snapshot

    snap = read_snapshot(out)
    assert snap.manifest.duration_ms >= 1500
    assert any(isinstance(ev, LifecycleEvent) for ev in snap.events)
