"""Acceptance suite: one test per release criterion, at its stated tolerance.

Each test prints a single PASS line on success (visible with `pytest -s` or
in the failure report otherwise); the assertions carry the tolerances.
"""
import random
import time

from agentprof.cli import main
from agentprof.clock import VirtualClock
from agentprof.model import (
    AgentDescriptor,
    Endpoint,
    FipaHeaders,
    IterationEvent,
    LifecycleEvent,
    MessageEvent,
    SCOPE_INTRA,
    SessionInfo,
    SimpleEvent,
    classify_duration,
)
from agentprof.queries import flat_profile, global_stats
from agentprof.scene import Viewport, birds_eye, compile_scene
from agentprof.simulator import default_scenario, run_scenario, scenario_session_id
from agentprof.sink import ProfilerSink
from agentprof.store import Snapshot, read_snapshot, write_snapshot

from golden_profile import (
    GOLDEN_ACTIVITY_MS,
    GOLDEN_HEADER_CELLS,
    GOLDEN_MESSAGES,
    GOLDEN_ROWS,
    build_golden_snapshot,
)


def _passed(name: str) -> None:
    print(f"ACCEPTANCE PASS: {name}")


# --------------------------------------------------------------------------
# Criterion 1: golden fixture oracle reproduces the reference table exactly
# --------------------------------------------------------------------------

def test_golden_profile_cell_for_cell(tmp_path, capsys):
    started = time.perf_counter()
    path = build_golden_snapshot(tmp_path / "golden.aspot")

    snapshot = read_snapshot(path)
    profile = flat_profile(snapshot)
    # baked-in identities
    assert profile.header.total_activity_ms == GOLDEN_ACTIVITY_MS
    assert sum(r.activity_ms for r in profile.rows) == GOLDEN_ACTIVITY_MS
    assert profile.header.messages_sent == GOLDEN_MESSAGES
    assert profile.header.messages_received == GOLDEN_MESSAGES
    agent001 = next(r for r in profile.rows if r.name == "agent001")
    assert f"{round(agent001.pct_session * 100) / 100:.2f}" == "10.90"
    assert agent001.avg_ms == 202

    assert main(["profile", str(path)]) == 0
    out = capsys.readouterr().out
    lines = out.splitlines()
    for label, value in GOLDEN_HEADER_CELLS.items():
        match = [ln for ln in lines if ln.startswith(label)]
        assert match and match[0].split("  ")[-1].strip() == value, (label, value)

    table_rows = [ln.split() for ln in lines if ln and ln.split()[0] in
                  {row[0] for row in GOLDEN_ROWS}]
    assert len(table_rows) == len(GOLDEN_ROWS)
    for got, expected in zip(table_rows, GOLDEN_ROWS):
        name, iters, overload, activity, pct, max_s, avg_s, sent, rec = expected
        assert got == [name, str(iters), str(overload), activity, pct,
                       max_s, avg_s, str(sent), str(rec)], name

    elapsed = time.perf_counter() - started
    assert elapsed < 5.0, f"fixture pipeline took {elapsed:.2f}s"
    _passed(f"golden profile reproduced cell-for-cell in {elapsed:.2f}s")


# --------------------------------------------------------------------------
# Criterion 2: conservation and closure over 100 random snapshots
# --------------------------------------------------------------------------

def _random_snapshot(rng: random.Random) -> Snapshot:
    platform = "p"
    duration = rng.randrange(10_000, 200_000)
    n_agents = rng.randrange(1, 9)
    agents = [f"agent{i:02d}" for i in range(n_agents)]
    events = []
    for agent in agents:
        events.append(LifecycleEvent(agent_id=agent, kind="created", at=0))
    # at least one positive duration so the percentage denominator is nonzero
    events.append(IterationEvent(
        agent_id=rng.choice(agents), start=0, duration_ms=rng.randrange(1, 2000),
    ))
    for _ in range(rng.randrange(20, 200)):
        agent = rng.choice(agents)
        at = rng.randrange(duration - 5000)
        roll = rng.random()
        if roll < 0.55:
            events.append(IterationEvent(
                agent_id=agent, start=at,
                duration_ms=0 if rng.random() < 0.2 else rng.randrange(1, 4000),
            ))
        elif roll < 0.9:
            external = rng.random() < 0.15
            receiver = (
                Endpoint(platform_id="other", agent_id="remote", is_external=True)
                if external
                else Endpoint(platform_id=platform, agent_id=rng.choice(agents))
            )
            events.append(MessageEvent(
                message_id=f"m{len(events)}",
                sender=Endpoint(platform_id=platform, agent_id=agent),
                receiver=receiver,
                sent_at=at,
                received_at=None if external or rng.random() < 0.3
                else at + rng.randrange(1000),
                headers=FipaHeaders(performative="request"),
                scope="inter_platform" if external else "intra_platform",
            ))
        else:
            events.append(SimpleEvent(agent_id=agent, at=at, kind="ping"))
    events.sort(key=lambda ev: ev.timestamp)
    return Snapshot(
        manifest=SessionInfo(
            session_id="r", platform_name=platform, started_at_epoch_ms=0,
            duration_ms=duration, slice_ms=1000,
        ),
        agents=tuple(AgentDescriptor(agent_id=a, name=a) for a in agents),
        events=tuple(events),
    )


def test_conservation_and_closure_properties():
    started = time.perf_counter()
    for case in range(100):
        rng = random.Random(1000 + case)
        snapshot = _random_snapshot(rng)
        profile = flat_profile(snapshot)
        rows = profile.rows

        assert sum(r.activity_ms for r in rows) == profile.header.total_activity_ms

        sent = sum(1 for ev in snapshot.events
                   if isinstance(ev, MessageEvent) and not ev.sender.is_external)
        received = sum(
            1 for ev in snapshot.events
            if isinstance(ev, MessageEvent) and not ev.receiver.is_external
            and ev.received_at is not None
        )
        assert sum(r.msgs_sent for r in rows) == profile.header.messages_sent == sent
        assert (sum(r.msgs_received for r in rows)
                == profile.header.messages_received == received)

        closure = abs(sum(r.pct_session for r in rows) - 100.0)
        assert closure <= 0.005 * len(rows) + 1e-9, f"case {case}: {closure}"

        keys = [(-r.activity_ms, r.name) for r in rows]
        assert keys == sorted(keys)

    elapsed = time.perf_counter() - started
    assert elapsed < 30.0
    _passed(f"conservation/closure held on 100 random snapshots in {elapsed:.2f}s")


# --------------------------------------------------------------------------
# Criterion 3: snapshot roundtrip and byte canonicality
# --------------------------------------------------------------------------

def test_snapshot_roundtrip_and_canonical_bytes(tmp_path):
    started = time.perf_counter()
    session = SessionInfo(
        session_id="rt", platform_name="p", started_at_epoch_ms=7,
        duration_ms=2_000_000, slice_ms=1000,
    )
    agents = tuple(AgentDescriptor(agent_id=f"a{i}", name=f"a{i}") for i in range(10))

    large = tuple(
        IterationEvent(agent_id=f"a{i % 10}", start=i * 17, duration_ms=(i * 13) % 2500)
        for i in range(100_000)
    )
    cases = {
        "empty": (),
        "single": (SimpleEvent(agent_id="a0", at=5, kind="x", payload="p"),),
        "large-100k": large,
    }
    for name, events in cases.items():
        first = tmp_path / f"{name}-1.aspot"
        write_snapshot(first, session, agents, events)
        loaded = read_snapshot(first)
        assert loaded.manifest == session, name
        assert loaded.agents == agents, name
        assert loaded.events == events, name
        second = tmp_path / f"{name}-2.aspot"
        write_snapshot(second, loaded.manifest, loaded.agents, loaded.events)
        assert first.read_bytes() == second.read_bytes(), name

    elapsed = time.perf_counter() - started
    assert elapsed < 30.0
    _passed(f"roundtrip identity and canonical bytes (incl. 100k events) in {elapsed:.2f}s")


# --------------------------------------------------------------------------
# Criterion 4: benchmark scenario end-to-end properties
# --------------------------------------------------------------------------

def test_benchmark_scenario_properties(tmp_path):
    started = time.perf_counter()
    spec = default_scenario()
    sink = ProfilerSink(out_path=tmp_path / "bench.aspot", clock=VirtualClock())
    sink.begin_session(platform_name=spec.platform_name, slice_ms=spec.slice_ms,
                       session_id=scenario_session_id(spec))
    handle = run_scenario(spec, sink)
    snapshot = read_snapshot(handle.path)
    profile = flat_profile(snapshot)
    rows = profile.rows
    masters = [r for r in rows if r.name.startswith("master")]
    workers = [r for r in rows if not r.name.startswith("master")]
    assert len(masters) == 2

    # (a) the overseers have the two highest iteration counts and >= 80% of sends
    by_iters = sorted(rows, key=lambda r: -r.iterations_nonzero)
    assert {by_iters[0].name, by_iters[1].name} == {"master1", "master2"}
    master_sent = sum(r.msgs_sent for r in masters)
    assert master_sent >= 0.8 * profile.header.messages_sent

    # (b) top-3 workers hold between 15% and 50% of total activity
    top3 = sorted(workers, key=lambda r: -r.activity_ms)[:3]
    share = sum(r.activity_ms for r in top3) / profile.header.total_activity_ms
    assert 0.15 <= share <= 0.50, share

    # (c) overseer session share below 3% each
    for master in masters:
        assert master.pct_session < 3.0, master

    # (d) worker population 12 -> 27 -> 12 at the configured phase times
    created_by_time: dict[int, int] = {}
    destroyed_by_time: dict[int, int] = {}
    def population(t: int) -> int:
        alive = 0
        for at, n in created_by_time.items():
            if at <= t:
                alive += n
        for at, n in destroyed_by_time.items():
            if at <= t:
                alive -= n
        return alive
    for ev in snapshot.events:
        if isinstance(ev, LifecycleEvent) and ev.agent_id.startswith("agent"):
            if ev.kind == "created":
                created_by_time[ev.at] = created_by_time.get(ev.at, 0) + 1
            elif ev.kind == "destroyed":
                destroyed_by_time[ev.at] = destroyed_by_time.get(ev.at, 0) + 1
    assert created_by_time.get(0) == 12
    assert created_by_time.get(600_000) == 15            # exactly at phase 2 time
    assert population(300_000) == 12
    assert population(700_000) == 27
    assert sum(destroyed_by_time.values()) == 15
    destroy_stamp = min(destroyed_by_time)
    assert 860_000 <= destroy_stamp <= 880_000           # deferred past the pause
    assert population(snapshot.manifest.duration_ms) == 12
    # 27 worker descriptors + 2 overseers over the whole session
    assert len(snapshot.agents) == 29

    # (e) no iterations inside the pause window
    suspends = [ev.at for ev in snapshot.events
                if isinstance(ev, LifecycleEvent) and ev.kind == "suspended"]
    resumes = [ev.at for ev in snapshot.events
               if isinstance(ev, LifecycleEvent) and ev.kind == "resumed"]
    assert suspends and resumes
    pause_start, pause_end = max(suspends), min(resumes)
    assert pause_end - pause_start == 20_000
    for ev in snapshot.events:
        if isinstance(ev, IterationEvent):
            if ev.duration_ms > 0:
                assert not (ev.start < pause_end and ev.end > pause_start), (
                    f"iteration {ev} inside pause window"
                )
            else:
                assert not pause_start <= ev.start < pause_end, ev

    elapsed = time.perf_counter() - started
    assert elapsed < 10.0
    _passed(f"benchmark scenario properties (a)-(e) in {elapsed:.2f}s")


# --------------------------------------------------------------------------
# Criterion 5: classification boundaries
# --------------------------------------------------------------------------

def test_classification_boundaries():
    assert classify_duration(750, 1000) == "green"
    assert classify_duration(1000, 1000) == "orange"
    assert classify_duration(1001, 1000) == "red"
    for slice_ms in (1, 2, 999, 1000, 4096):
        last_rank = 0
        ranks = {"green": 0, "orange": 1, "red": 2}
        for duration in range(0, 2 * slice_ms + 2):
            color = classify_duration(duration, slice_ms)
            rank = ranks[color]
            assert rank >= last_rank, "classes must be monotone in duration"
            last_rank = rank
            expected = ("green" if 4 * duration <= 3 * slice_ms
                        else "orange" if duration <= slice_ms else "red")
            assert color == expected
    _passed("classification boundaries at 0.75*slice and slice")


# --------------------------------------------------------------------------
# Criterion 6: scene geometry on the benchmark snapshot
# --------------------------------------------------------------------------

def test_scene_geometry(bench_snapshot):
    duration = bench_snapshot.manifest.duration_ms

    # rects never overlap in time across lanes
    spans = sorted(
        (ev.start, ev.end) for ev in bench_snapshot.events
        if isinstance(ev, IterationEvent) and ev.duration_ms > 0
    )
    for (s0, e0), (s1, e1) in zip(spans, spans[1:]):
        assert e0 <= s1

    # widths scale exactly with px_per_ms (powers of two keep products exact)
    low = compile_scene(bench_snapshot, Viewport(t0=0, t1=duration, px_per_ms=0.125))
    high = compile_scene(bench_snapshot, Viewport(t0=0, t1=duration, px_per_ms=0.25))
    low_rects = {r.event_ref: r for r in low.rects}
    checked = 0
    for rect in high.rects:
        partner = low_rects[rect.event_ref]
        w_low, w_high = partner.x1 - partner.x0, rect.x1 - rect.x0
        if w_low > 1.0:
            assert w_high == 2 * w_low
            checked += 1
    assert checked > 0

    # auto lane order equals the flat profile order
    rows = flat_profile(bench_snapshot).rows
    expected_order = [r.agent_id for r in rows]
    assert [lane.agent_id for lane in high.lanes] == expected_order

    # a partition of the session reproduces the full-rect multiset
    cuts = [0, duration // 4, duration // 2, 3 * duration // 4, duration]
    full_refs = sorted(r.event_ref for r in high.rects)
    collected = []
    for lo, hi in zip(cuts, cuts[1:]):
        window = compile_scene(
            bench_snapshot, Viewport(t0=lo, t1=hi, px_per_ms=0.25))
        for rect in window.rects:
            start = bench_snapshot.events[rect.event_ref].start
            if lo <= start < hi:  # clipped rects count once, at their start window
                collected.append(rect.event_ref)
    assert sorted(collected) == full_refs

    # bird's-eye buckets tile the session exactly
    for width in (1, 13, 200):
        strip = birds_eye(bench_snapshot, width)
        boundaries = [k * duration // width for k in range(width + 1)]
        assert sum(b1 - b0 for b0, b1 in zip(boundaries, boundaries[1:])) == duration
        assert all(len(lane.classes) == width for lane in strip.lanes)

    _passed("scene geometry: non-overlap, exact zoom, order, partition, tiling")


# --------------------------------------------------------------------------
# Criterion 7: throughput
# --------------------------------------------------------------------------

def test_throughput():
    sink = ProfilerSink(out_path=None, clock=VirtualClock())
    sink.begin_session(platform_name="p", slice_ms=1000, session_id="t")
    sink.register_agent(AgentDescriptor(agent_id="a", name="a"))
    events = [SimpleEvent(agent_id="a", at=i, kind="k") for i in range(100_000)]
    started = time.perf_counter()
    for event in events:
        sink.record(event)
    record_rate = len(events) / (time.perf_counter() - started)
    assert record_rate >= 100_000, f"{record_rate:,.0f} events/s"

    iterations = tuple(
        IterationEvent(agent_id=f"a{i % 25}", start=i * 11, duration_ms=(i * 7) % 1800)
        for i in range(100_000)
    )
    snapshot = Snapshot(
        manifest=SessionInfo(
            session_id="s", platform_name="p", started_at_epoch_ms=0,
            duration_ms=100_000 * 11 + 2000, slice_ms=1000,
        ),
        agents=tuple(AgentDescriptor(agent_id=f"a{i}", name=f"a{i}")
                     for i in range(25)),
        events=iterations,
    )
    started = time.perf_counter()
    profile = flat_profile(snapshot)
    elapsed = time.perf_counter() - started
    assert elapsed < 1.0, f"flat_profile took {elapsed:.3f}s"
    assert len(profile.rows) == 25
    # and the stats pass stays single-scan fast as well
    global_stats(snapshot)
    _passed(f"throughput: record {record_rate:,.0f}/s, flat profile of 100k in {elapsed:.3f}s")
