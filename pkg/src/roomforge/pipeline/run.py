"""End-to-end orchestration: meshes in, rendered stylized scene out."""

from __future__ import annotations

import json
import logging
from pathlib import Path

import numpy as np

from ..backends import LayoutRequest
from ..errors import ConfigError, RoomforgeError, StageError
from ..geometry import Camera, OrientedBox, TextureAtlas, load_mesh
from ..imgio import rgba_png_bytes
from ..layout import Layout, fit_object, load_exemplars, request_layout
from ..project import ObjectRecord, SceneProject, load_project, save_project
from ..raster import merge_framebuffers, rasterize
from ..texturing import cascade_stylize
from .config import PipelineConfig, make_backend, make_llm_client

log = logging.getLogger(__name__)

STAGES = ("load_meshes", "layout", "place", "cascade_stylize", "save", "render")


def _stage(name: str):
    """Re-raise anything from the block as a StageError naming the stage."""
    class _Ctx:
        def __enter__(self):
            return self

        def __exit__(self, exc_type, exc, tb):
            if exc is not None and isinstance(exc, RoomforgeError):
                raise StageError(name, exc) from exc
            return False

    return _Ctx()


def load_layout_file(path: Path, room) -> Layout:
    try:
        doc = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read layout {path}: {exc}") from exc
    boxes_doc = doc["boxes"] if isinstance(doc, dict) else doc
    boxes = [
        OrientedBox(
            tuple(b["center"]), tuple(b["half_extents"]),
            float(b.get("yaw", 0.0)), b["category"],
        )
        for b in boxes_doc
    ]
    return Layout(room, tuple(boxes))


def _obtain_layout(config: PipelineConfig, llm_client) -> Layout:
    if config.layout_source == "file":
        return load_layout_file(config.layout_path, config.room)
    counts: dict[str, int] = {}
    for spec in config.objects:
        counts[spec.category] = counts.get(spec.category, 0) + 1
    exemplars = load_exemplars(config.room_type)
    if not exemplars:
        raise ConfigError(f"no exemplar layouts for room type {config.room_type!r}")
    request = LayoutRequest(
        room_type=config.room_type,
        room=config.room,
        categories=counts,
        exemplars=exemplars,
    )
    client = llm_client if llm_client is not None else make_llm_client(config.llm_endpoint)
    return request_layout(client, request)


def place_objects(config: PipelineConfig, layout: Layout, meshes: dict) -> SceneProject:
    """Pair layout boxes with object specs by category, fit, and record."""
    unused = list(range(len(config.objects)))
    records = []
    serial: dict[str, int] = {}
    for box in layout.boxes:
        pick = next(
            (i for i in unused if config.objects[i].category == box.category), None
        )
        if pick is None:
            log.warning("layout box %r has no object spec; dropped", box.category)
            continue
        unused.remove(pick)
        spec = config.objects[pick]
        serial[box.category] = serial.get(box.category, 0) + 1
        object_id = f"{box.category.replace(' ', '-')}-{serial[box.category]}"
        placed_box = OrientedBox(
            box.center, box.half_extents, box.yaw, box.category, box_id=object_id
        )
        records.append(
            ObjectRecord(
                object_id=object_id,
                mesh=meshes[spec.mesh_path],
                mesh_name=f"meshes/{object_id}.obj",
                atlas=TextureAtlas.untouched(
                    config.atlas_size, config.atlas_size, object_id=object_id
                ),
                atlas_name=f"atlases/{object_id}.png",
                box=placed_box,
                transform=fit_object(meshes[spec.mesh_path], placed_box, spec.canonical_yaw_offset),
                canonical_yaw_offset=spec.canonical_yaw_offset,
            )
        )
    if unused:
        missing = [config.objects[i].category for i in unused]
        raise ConfigError(f"layout provided no box for: {missing}")
    return SceneProject(
        room=config.room,
        objects=tuple(records),
        style_prompt=config.style_prompt,
        seed=config.seed,
    )


def run_pipeline(config: PipelineConfig, backend=None, llm_client=None) -> SceneProject:
    """The full loop; every failure is tagged with the stage it came from.

    The project directory is written as soon as objects are placed, and
    after every stylized object, so failures leave resumable state.
    """
    with _stage("load_meshes"):
        meshes = {spec.mesh_path: load_mesh(spec.mesh_path) for spec in config.objects}

    with _stage("layout"):
        layout = _obtain_layout(config, llm_client)

    with _stage("place"):
        scene = place_objects(config, layout, meshes)
        save_project(scene, config.out_dir)

    with _stage("cascade_stylize"):
        if backend is None:
            backend = make_backend(config.backend, config.synth_endpoint)
        scene = cascade_stylize(
            scene,
            backend,
            n_azimuth=config.views.n_azimuth,
            elevations=config.views.elevations,
            distance_factor=config.views.distance_factor,
            resolution=config.views.resolution,
            use_references=config.use_references,
            persist=lambda s: save_project(s, config.out_dir),
            debug_dir=config.out_dir / "debug" if config.debug_dumps else None,
        )

    with _stage("save"):
        save_project(scene, config.out_dir)

    with _stage("render"):
        render_dir = config.out_dir / "renders"
        render_dir.mkdir(parents=True, exist_ok=True)
        for i, camera in enumerate(config.cameras):
            image = render_scene(scene, camera)
            (render_dir / f"render-{i:02d}.png").write_bytes(rgba_png_bytes(image))

    return scene


def render_scene(scene: SceneProject, camera: Camera) -> np.ndarray:
    """Z-buffered composite of every object under its own atlas."""
    camera.validate()
    buffers = [
        rasterize(o.mesh, o.transform, camera, atlas=o.atlas) for o in scene.objects
    ]
    return merge_framebuffers(buffers, *camera.resolution).color


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

HIST_BINS = 8  # per channel


def atlas_histogram(atlas: TextureAtlas) -> np.ndarray:
    """Normalized color histogram over painted texels, 8x8x8 RGB bins."""
    painted = atlas.painted
    hist = np.zeros(HIST_BINS ** 3, dtype=np.float64)
    if painted.any():
        rgb = atlas.pixels[painted][:, :3] // (256 // HIST_BINS)
        idx = (rgb[:, 0] * HIST_BINS + rgb[:, 1]) * HIST_BINS + rgb[:, 2]
        hist = np.bincount(idx, minlength=HIST_BINS ** 3).astype(np.float64)
        hist /= hist.sum()
    return hist


def chi_square(h1: np.ndarray, h2: np.ndarray) -> float:
    denom = h1 + h2
    mask = denom > 0
    return float(0.5 * np.sum((h1[mask] - h2[mask]) ** 2 / denom[mask]))


def style_consistency_proxy(scene: SceneProject) -> float:
    """Mean pairwise histogram distance between object atlases.

    Lower means the objects look more like one coherent style. This is an
    internal stand-in metric, not a perceptual score.
    """
    hists = [atlas_histogram(o.atlas) for o in scene.objects]
    if len(hists) < 2:
        return 0.0
    dists = [
        chi_square(hists[i], hists[j])
        for i in range(len(hists))
        for j in range(i + 1, len(hists))
    ]
    return float(np.mean(dists))


def eval_renders(scene: SceneProject, cameras, scorer_endpoint: str | None = None) -> dict:
    """Always reports the internal consistency proxy; external scores when
    a scorer endpoint answers."""
    report = {
        "style_consistency_proxy": style_consistency_proxy(scene),
        "objects": len(scene.objects),
        "scores": None,
    }
    if scorer_endpoint is None:
        return report
    import requests as _requests

    from ..imgio import b64encode_png

    clip_scores, aesthetics = [], []
    try:
        for camera in cameras:
            image = render_scene(scene, camera)
            resp = _requests.post(
                f"{scorer_endpoint.rstrip('/')}/score",
                json={
                    "image_png_b64": b64encode_png(rgba_png_bytes(image)),
                    "prompt": scene.style_prompt,
                },
                timeout=60,
            )
            if resp.status_code != 200:
                raise OSError(f"scorer HTTP {resp.status_code}")
            body = resp.json()
            clip_scores.append(float(body["clip_score"]))
            aesthetics.append(float(body["aesthetic"]))
        report["scores"] = {
            "clip_score": float(np.mean(clip_scores)),
            "aesthetic": float(np.mean(aesthetics)),
            "renders": len(clip_scores),
        }
    except Exception as exc:  # scores are best-effort, the proxy is not
        log.warning("scorer unavailable: %s", exc)
        report["scores"] = None
        report["scores_error"] = str(exc)
    return report


def eval_project_dir(directory: str | Path, cameras=(), scorer_endpoint=None) -> dict:
    return eval_renders(load_project(directory), cameras, scorer_endpoint)
