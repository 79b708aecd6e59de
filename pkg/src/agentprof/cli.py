"""Command-line front end: record a benchmark capture, print its flat
profile, export diagram scenes, or serve the HTTP API plus browser UI.

Exit codes are stable: 0 success, 2 invalid scenario, 3 I/O failure,
4 corrupt or unreadable snapshot, 5 invalid viewport.
"""
from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from .api.models import FlatProfileModel, SceneModel, canonical_json
from .clock import VirtualClock, WallClock
from .errors import InvalidSpec, InvalidViewport, SnapshotError
from .queries import flat_profile
from .scene import Viewport, compile_scene
from .simulator import load_scenario, run_scenario, scenario_session_id
from .sink import ProfilerSink
from .store import read_snapshot
from .textfmt import fmt_clock, render_flat_profile

EXIT_OK = 0
EXIT_BAD_SCENARIO = 2
EXIT_IO = 3
EXIT_BAD_SNAPSHOT = 4
EXIT_BAD_VIEWPORT = 5


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="agentprof",
        description="Profiler for message-passing multi-agent platforms",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_record = sub.add_parser("record", help="run a benchmark scenario into a snapshot")
    p_record.add_argument("--scenario", required=True, help="scenario YAML file")
    p_record.add_argument("--out", required=True, help="snapshot output path (.aspot)")
    p_record.add_argument("--seed", type=int, default=None,
                          help="override the scenario seed")
    p_record.add_argument("--realtime", action="store_true",
                          help="pace the scenario against the wall clock")

    p_profile = sub.add_parser("profile", help="print the flat profile of a snapshot")
    p_profile.add_argument("snapshot", help="snapshot file")
    p_profile.add_argument("--format", choices=("text", "json"), default="text",
                           help="text table or canonical JSON")

    p_scene = sub.add_parser("export-scene",
                             help="compile a space-time scene to canonical JSON")
    p_scene.add_argument("snapshot", help="snapshot file")
    p_scene.add_argument("--t0", type=int, required=True)
    p_scene.add_argument("--t1", type=int, required=True)
    p_scene.add_argument("--px-per-ms", type=float, required=True)
    p_scene.add_argument("--hidden", default="", help="comma-separated agent ids")
    p_scene.add_argument("--order", default="", help="explicit lane order, comma-separated")
    p_scene.add_argument("--out", default="-", help="output path, '-' for stdout")

    p_serve = sub.add_parser("serve", help="serve the HTTP API and browser UI")
    p_serve.add_argument("snapshot", help="snapshot file")
    p_serve.add_argument("--port", type=int, default=8787)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--ui-dir", default=None,
                         help="static UI bundle (default: ./frontend/dist if present)")
    return parser


def cmd_record(args) -> int:
    scenario_path = Path(args.scenario)
    if not scenario_path.is_file():
        print(f"error: scenario file not found: {scenario_path}", file=sys.stderr)
        return EXIT_BAD_SCENARIO
    try:
        spec = load_scenario(scenario_path)
        if args.seed is not None:
            spec = dataclasses.replace(spec, seed=args.seed)
        clock = WallClock() if args.realtime else VirtualClock()
        sink = ProfilerSink(out_path=args.out, clock=clock)
        sink.begin_session(
            platform_name=spec.platform_name,
            slice_ms=spec.slice_ms,
            session_id=scenario_session_id(spec),
        )
        handle = run_scenario(spec, sink)
    except InvalidSpec as exc:
        print(f"error: invalid scenario: {exc}", file=sys.stderr)
        return EXIT_BAD_SCENARIO
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"session {handle.session.session_id}")
    print(f"  duration  {fmt_clock(handle.session.duration_ms)}")
    print(f"  agents    {handle.agent_count}")
    print(f"  events    {handle.event_count}")
    print(f"  snapshot  {handle.path}")
    for warning in handle.warnings:
        print(f"  warning   {warning}")
    return EXIT_OK


def _load_snapshot(path: str):
    try:
        return read_snapshot(path)
    except SnapshotError as exc:
        print(f"error: unreadable snapshot: {exc}", file=sys.stderr)
        return None
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return None


def cmd_profile(args) -> int:
    snapshot = _load_snapshot(args.snapshot)
    if snapshot is None:
        return EXIT_BAD_SNAPSHOT
    profile = flat_profile(snapshot)
    if args.format == "json":
        sys.stdout.buffer.write(canonical_json(FlatProfileModel.from_core(profile)))
        sys.stdout.buffer.write(b"\n")
    else:
        sys.stdout.write(render_flat_profile(profile))
    return EXIT_OK


def cmd_export_scene(args) -> int:
    snapshot = _load_snapshot(args.snapshot)
    if snapshot is None:
        return EXIT_BAD_SNAPSHOT
    viewport = Viewport(
        t0=args.t0,
        t1=args.t1,
        px_per_ms=args.px_per_ms,
        lane_order=tuple(x for x in args.order.split(",") if x) or None,
        hidden=frozenset(x for x in args.hidden.split(",") if x),
    )
    try:
        scene = compile_scene(snapshot, viewport)
    except InvalidViewport as exc:
        print(f"error: invalid viewport: {exc}", file=sys.stderr)
        return EXIT_BAD_VIEWPORT
    payload = canonical_json(SceneModel.from_core(scene))
    try:
        if args.out == "-":
            sys.stdout.buffer.write(payload)
            sys.stdout.buffer.write(b"\n")
        else:
            Path(args.out).write_bytes(payload)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .api.server import create_app

    ui_dir = args.ui_dir
    if ui_dir is None:
        default_ui = Path("frontend") / "dist"
        ui_dir = default_ui if default_ui.is_dir() else None
    try:
        app = create_app(args.snapshot, ui_dir=ui_dir)
    except SnapshotError as exc:
        print(f"error: unreadable snapshot: {exc}", file=sys.stderr)
        return EXIT_BAD_SNAPSHOT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    handler = {
        "record": cmd_record,
        "profile": cmd_profile,
        "export-scene": cmd_export_scene,
        "serve": cmd_serve,
    }[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
