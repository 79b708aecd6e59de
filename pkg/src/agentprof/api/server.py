"""Read-only HTTP service over one loaded snapshot.

Every response body comes from the canonical serializers in
`agentprof.api.models`, so a byte-for-byte match with the CLI exporters is
guaranteed. The service never mutates the snapshot; if the file on disk is
replaced or removed after loading, requests answer 410 until a restart.
"""
from __future__ import annotations

import os
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query, Response
from fastapi.responses import HTMLResponse
from fastapi.staticfiles import StaticFiles

from ..errors import InvalidBucket, InvalidRange, InvalidViewport, UnknownMessage
from ..queries import cpu_series, flat_profile, global_stats, message_detail
from ..scene import Viewport, birds_eye, compile_scene
from ..store import Snapshot, read_snapshot
from .models import (
    BirdsEyeModel,
    CpuSeriesModel,
    FlatProfileModel,
    GlobalStatsModel,
    MessageModel,
    SceneModel,
    SessionInfoModel,
    canonical_json,
)

_PLACEHOLDER = """<!doctype html>
<html><head><title>agentprof</title></head>
<body><h1>agentprof service</h1>
<p>No UI bundle is installed. The API lives under <code>/api/</code>:
session, flat-profile, global-stats, scene, cpu, message/{id}, birds-eye.</p>
</body></html>"""


def _file_signature(path: Path) -> tuple[int, int] | None:
    try:
        st = os.stat(path)
    except OSError:
        return None
    return st.st_size, st.st_mtime_ns


def create_app(snapshot_path: str | Path, ui_dir: str | Path | None = None) -> FastAPI:
    snapshot_path = Path(snapshot_path)
    snapshot: Snapshot = read_snapshot(snapshot_path)
    signature = _file_signature(snapshot_path)

    app = FastAPI(title="agentprof", version="0.1.0")

    def current() -> Snapshot:
        if _file_signature(snapshot_path) != signature:
            raise HTTPException(
                status_code=410, detail="snapshot file replaced; restart the service"
            )
        return snapshot

    def respond(model) -> Response:
        return Response(content=canonical_json(model), media_type="application/json")

    @app.get("/api/session")
    def api_session() -> Response:
        return respond(SessionInfoModel.from_core(current().manifest))

    @app.get("/api/flat-profile")
    def api_flat_profile() -> Response:
        return respond(FlatProfileModel.from_core(flat_profile(current())))

    @app.get("/api/global-stats")
    def api_global_stats() -> Response:
        return respond(GlobalStatsModel.from_core(global_stats(current())))

    @app.get("/api/scene")
    def api_scene(
        t0: int,
        t1: int,
        px_per_ms: float,
        hidden: str = "",
        order: str = "",
    ) -> Response:
        snap = current()
        lane_order = tuple(x for x in order.split(",") if x) or None
        hidden_set = frozenset(x for x in hidden.split(",") if x)
        try:
            scene = compile_scene(snap, Viewport(
                t0=t0, t1=t1, px_per_ms=px_per_ms,
                lane_order=lane_order, hidden=hidden_set,
            ))
        except InvalidViewport as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return respond(SceneModel.from_core(scene))

    @app.get("/api/cpu")
    def api_cpu(bucket_ms: int = Query(...)) -> Response:
        snap = current()
        try:
            buckets = cpu_series(snap, bucket_ms)
        except (InvalidBucket, InvalidRange) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return respond(CpuSeriesModel.from_core(bucket_ms, buckets))

    @app.get("/api/message/{message_id}")
    def api_message(message_id: str) -> Response:
        snap = current()
        try:
            event = message_detail(snap, message_id)
        except UnknownMessage as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        return respond(MessageModel.from_core(event))

    @app.get("/api/birds-eye")
    def api_birds_eye(buckets: int = Query(...)) -> Response:
        snap = current()
        try:
            strip = birds_eye(snap, buckets)
        except InvalidViewport as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return respond(BirdsEyeModel.from_core(strip))

    ui_path = Path(ui_dir) if ui_dir is not None else None
    if ui_path is not None and ui_path.is_dir():
        app.mount("/", StaticFiles(directory=ui_path, html=True), name="ui")
    else:
        @app.get("/", response_class=HTMLResponse)
        def index() -> str:
            return _PLACEHOLDER

    return app
