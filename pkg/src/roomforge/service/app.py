"""HTTP surface over a scene project: state, ops, re-texturing, renders.

One writer lock serializes mutations; every committed mutation is persisted
to disk before the response returns. Reads snapshot the immutable scene
object, so renders and long jobs never observe a half-applied edit.
"""

from __future__ import annotations

import threading
from dataclasses import replace
from pathlib import Path

from fastapi import Body, FastAPI, Response
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from ..errors import (
    ConfigError,
    DegenerateCamera,
    InvalidOp,
    InvalidRange,
    RoomforgeError,
    UnknownObject,
)
from ..geometry import TextureAtlas
from ..imgio import rgba_png_bytes
from ..layout import ManipulationOp, apply_op, validate_scene
from ..pipeline import ViewConfig, parse_camera_spec, render_scene
from ..project import SceneProject, load_project, save_project
from ..texturing import cascade_stylize
from .jobs import RETEXTURE, JobRegistry


class SceneState:
    """The single mutable cell: current scene, its version, and the lock."""

    def __init__(self, directory: Path):
        self.directory = Path(directory)
        self.scene: SceneProject = load_project(self.directory)
        self.version = 0
        self.write_lock = threading.Lock()

    def commit(self, scene: SceneProject) -> int:
        """Persist then publish; caller must hold write_lock."""
        save_project(scene, self.directory)
        self.scene = scene
        self.version += 1
        return self.version


class _CountingBackend:
    """Wraps a synthesizer so each completed view bumps job progress."""

    def __init__(self, inner, job):
        self.inner = inner
        self.job = job
        self.backend_id = inner.backend_id

    def run(self, request):
        out = self.inner.run(request)
        self.job.tick()
        return out


def _error_response(exc: Exception, status: int):
    return JSONResponse({"error": type(exc).__name__, "detail": str(exc)}, status_code=status)


def create_app(
    project_dir: str | Path,
    backend=None,
    views: ViewConfig | None = None,
    ui_dir: str | Path | None = None,
) -> FastAPI:
    state = SceneState(Path(project_dir))
    jobs = JobRegistry()
    views = views or ViewConfig()
    app = FastAPI(title="roomforge scene service")
    app.state.scene_state = state  # reachable from tests

    @app.get("/healthz")
    def healthz():
        return {"ok": True}

    @app.get("/scene")
    def get_scene():
        snapshot, version = state.scene, state.version
        return Response(
            content=snapshot.scene_json(),
            media_type="application/json",
            headers={"X-Scene-Version": str(version)},
        )

    @app.post("/scene/ops")
    def post_op(payload: dict = Body(...)):
        try:
            op = ManipulationOp.from_doc(payload)
        except InvalidOp as exc:
            return _error_response(exc, 400)
        with state.write_lock:
            try:
                new_scene = apply_op(state.scene, op)
            except UnknownObject as exc:
                return _error_response(exc, 404)
            except (InvalidOp, RoomforgeError) as exc:
                return _error_response(exc, 400)
            before = {str(v) for v in validate_scene(state.scene)}
            introduced = [
                str(v) for v in validate_scene(new_scene) if str(v) not in before
            ]
            if introduced:
                return JSONResponse(
                    {"error": "LayoutViolation", "detail": introduced}, status_code=409
                )
            version = state.commit(new_scene)
        return {"ok": True, "scene_version": version}

    @app.post("/scene/retexture")
    def post_retexture(payload: dict = Body(default={})):
        if backend is None:
            return _error_response(ConfigError("service started without a backend"), 400)
        with state.write_lock:
            snapshot = state.scene
        object_ids = payload.get("objects") or [o.object_id for o in snapshot.objects]
        unknown = [i for i in object_ids if snapshot.get(i) is None]
        if unknown:
            return _error_response(UnknownObject(f"no objects {unknown}"), 404)
        prompt = payload.get("prompt", snapshot.style_prompt)
        seed = int(payload.get("seed", snapshot.seed))
        total = len(object_ids) * views.views_per_object + 1  # +1 reference frame

        def work(job):
            # reset the chosen atlases, then re-run the cascade over them
            base = snapshot.with_objects(
                [
                    o.with_atlas(
                        TextureAtlas.untouched(o.atlas.width, o.atlas.height, o.object_id)
                    )
                    if o.object_id in object_ids
                    else o
                    for o in snapshot.objects
                ]
            )
            base = replace(base, style_prompt=prompt, seed=seed)
            result = cascade_stylize(
                base,
                _CountingBackend(backend, job),
                n_azimuth=views.n_azimuth,
                elevations=views.elevations,
                distance_factor=views.distance_factor,
                resolution=views.resolution,
                object_ids=object_ids,
            )
            with state.write_lock:
                # merge onto the live scene: an op may have landed mid-job,
                # and atlases stay valid across placement changes
                current = state.scene
                merged = [
                    o.with_atlas(result.get(o.object_id).atlas)
                    if o.object_id in object_ids and result.get(o.object_id) is not None
                    else o
                    for o in current.objects
                ]
                state.commit(
                    replace(
                        current,
                        objects=tuple(merged),
                        style_prompt=prompt,
                        seed=seed,
                        reference_image=result.reference_image,
                        provenance=result.provenance,
                    )
                )

        job = jobs.submit(RETEXTURE, work, total_views=total)
        return {"job_id": job.job_id}

    @app.get("/jobs/{job_id}")
    def get_job(job_id: str):
        job = jobs.get(job_id)
        if job is None:
            return _error_response(KeyError(job_id), 404)
        return job.to_doc()

    @app.get("/render")
    def get_render(cam: str, w: int = 512, h: int = 512):
        snapshot, version = state.scene, state.version
        try:
            camera = parse_camera_spec(cam, width=w, height=h)
            image = render_scene(snapshot, camera)
        except (ConfigError, DegenerateCamera, InvalidRange) as exc:
            return _error_response(exc, 400)
        return Response(
            content=rgba_png_bytes(image),
            media_type="image/png",
            headers={"X-Scene-Version": str(version)},
        )

    @app.get("/objects/{object_id}/atlas")
    def get_atlas(object_id: str):
        rec = state.scene.get(object_id)
        if rec is None:
            return _error_response(UnknownObject(object_id), 404)
        return Response(content=rgba_png_bytes(rec.atlas.pixels), media_type="image/png")

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


def serve(project_dir, port: int = 8000, backend=None, host: str = "127.0.0.1",
          views: ViewConfig | None = None, ui_dir=None):
    import uvicorn

    app = create_app(project_dir, backend=backend, views=views, ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=port, log_level="info")
