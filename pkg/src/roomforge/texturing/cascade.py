"""Whole-scene stylization: global reference first, then objects in cascade."""

from __future__ import annotations

import logging
from pathlib import Path

import numpy as np

from ..backends import SynthesisRequest, TextureSynthesizer, synthesize
from ..errors import InvalidRange
from ..geometry import Aabb, Camera
from ..project import SceneProject
from ..raster import render_depth
from .paint import StyleContext, stylize_object
from .trimap import COS_UPDATE_MARGIN
from .views import (
    DEFAULT_AZIMUTHS,
    DEFAULT_DISTANCE_FACTOR,
    DEFAULT_ELEVATIONS,
    schedule_views,
)

log = logging.getLogger(__name__)

MAX_OBJECT_REFS = 4


def overview_camera(room: Aabb, resolution=(512, 512)) -> Camera:
    """A deterministic vantage above the room's far corner, facing center."""
    ext = room.extents
    diag = float(np.linalg.norm(ext))
    return Camera(
        position=room.max + 0.25 * ext,
        look_at=room.center,
        resolution=resolution,
        near=max(1e-2, 0.1 * diag),
        far=1.5 * diag,
    )


def generate_scene_reference(
    scene: SceneProject,
    camera: Camera,
    prompt: str,
    backend: TextureSynthesizer,
    seed: int,
) -> np.ndarray:
    """Full-frame synthesis over the scene's depth; the style anchor every
    object is conditioned on."""
    if not scene.objects:
        raise InvalidRange("cannot build a reference image for an empty scene")
    depth = render_depth([(o.mesh, o.transform) for o in scene.objects], camera)
    w, h = camera.resolution
    request = SynthesisRequest(
        prompt=prompt,
        width=w,
        height=h,
        depth=depth,
        partial_image=np.zeros((h, w, 4), dtype=np.uint8),
        mask=np.ones((h, w), dtype=np.uint8),
        seed=seed,
    )
    return synthesize(backend, request).image


def _object_seed(seed: int, position: int) -> int:
    ss = np.random.SeedSequence([seed & 0xFFFFFFFFFFFFFFFF, position])
    return int(ss.generate_state(1, np.uint64)[0] & 0x7FFFFFFFFFFFFFFF)


def cascade_stylize(
    scene: SceneProject,
    backend: TextureSynthesizer,
    prompt: str | None = None,
    seed: int | None = None,
    n_azimuth: int = DEFAULT_AZIMUTHS,
    elevations=DEFAULT_ELEVATIONS,
    distance_factor: float = DEFAULT_DISTANCE_FACTOR,
    resolution=(512, 512),
    cos_update_margin: float = COS_UPDATE_MARGIN,
    max_object_refs: int = MAX_OBJECT_REFS,
    use_references: bool = True,
    object_ids=None,
    persist=None,
    debug_dir: Path | None = None,
) -> SceneProject:
    """Stylize every object, largest bounding box first.

    Each object after the first is additionally conditioned on the front
    view of previously finished objects, most recent first, capped at
    max_object_refs. use_references=False strips all image conditioning
    (the text-only ablation arm). object_ids restricts the pass to a subset
    (re-texture jobs); the reference still renders the whole scene. persist,
    when given, is called with the scene after the reference and after each
    finished object.
    """
    if prompt is None:
        prompt = scene.style_prompt
    if seed is None:
        seed = scene.seed
    if not scene.objects:
        raise InvalidRange("nothing to stylize")

    order = sorted(scene.objects, key=lambda o: (-o.box.volume, o.object_id))
    if object_ids is not None:
        wanted = set(object_ids)
        order = [o for o in order if o.object_id in wanted]
        if not order:
            raise InvalidRange(f"none of {sorted(wanted)} are in the scene")
    if use_references:
        reference = generate_scene_reference(
            scene, overview_camera(scene.room, resolution), prompt, backend, seed
        )
        scene = scene.with_reference(reference)
    scene = scene.with_provenance(
        {
            **(scene.provenance or {}),
            "cascade_order": [o.object_id for o in order],
            "stylize_backend": backend.backend_id,
            "stylize_seed": seed,
            # remote services are exempt from the determinism contract
            "deterministic": not backend.backend_id.startswith("remote:"),
        }
    )
    if persist is not None:
        persist(scene)

    front_views = []
    for position, placed in enumerate(order):
        obj = scene.get(placed.object_id)
        context = StyleContext(
            prompt=prompt,
            global_reference=scene.reference_image if use_references else None,
            object_references=tuple(front_views[:max_object_refs]) if use_references else (),
            seed=_object_seed(seed, position),
        )
        views = schedule_views(
            obj.mesh,
            obj.transform,
            n_azimuth=n_azimuth,
            elevations=elevations,
            distance_factor=distance_factor,
            resolution=resolution,
        )
        atlas, images = stylize_object(
            obj.mesh, obj.transform, obj.atlas, views, context, backend,
            cos_update_margin=cos_update_margin, debug_dir=debug_dir,
        )
        scene = scene.with_objects(
            [o.with_atlas(atlas) if o.object_id == obj.object_id else o for o in scene.objects]
        )
        front_views.insert(0, images[views.front_index])
        log.info("stylized %s (%d of %d)", obj.object_id, position + 1, len(order))
        if persist is not None:
            persist(scene)
    return scene
