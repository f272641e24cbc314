"""Scene projects: the persisted directory format tying everything together.

A project directory holds scene.json plus meshes/*.obj, atlases/*.png and an
optional reference.png. scene.json is serialized canonically (sorted keys,
fixed 6-decimal floats) so that equal projects produce byte-equal files and
save -> load -> save round-trips bit-exactly.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
from PIL import Image

from .errors import IoError, SchemaVersionMismatch
from .geometry import (
    Aabb,
    OrientedBox,
    TextureAtlas,
    Transform,
    TriangleMesh,
    load_atlas,
    load_mesh,
    save_atlas,
    save_mesh,
)

SCHEMA_VERSION = "1"


# ---------------------------------------------------------------------------
# canonical JSON
# ---------------------------------------------------------------------------

def _format_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite float {x}")
    if x == 0.0:
        x = 0.0  # normalize -0.0
    return f"{x:.6f}"


def canonical_json(value) -> str:
    """Deterministic JSON: sorted keys, fixed 6-decimal floats, no whitespace."""
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return _format_float(float(value))
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=True)
    if isinstance(value, (list, tuple)):
        return "[" + ",".join(canonical_json(v) for v in value) + "]"
    if isinstance(value, dict):
        items = []
        for k in sorted(value.keys()):
            if not isinstance(k, str):
                raise TypeError(f"non-string key {k!r}")
            items.append(json.dumps(k, ensure_ascii=True) + ":" + canonical_json(value[k]))
        return "{" + ",".join(items) + "}"
    raise TypeError(f"cannot canonicalize {type(value)!r}")


# ---------------------------------------------------------------------------
# records
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ObjectRecord:
    """One placed object: geometry, texture, placement box and fitted transform."""

    object_id: str
    mesh: TriangleMesh
    mesh_name: str          # path relative to the project dir, e.g. "meshes/bed-1.obj"
    atlas: TextureAtlas
    atlas_name: str
    box: OrientedBox
    transform: Transform
    canonical_yaw_offset: float = 0.0

    def with_atlas(self, atlas: TextureAtlas) -> "ObjectRecord":
        return replace(self, atlas=atlas)

    def with_placement(self, box: OrientedBox, transform: Transform) -> "ObjectRecord":
        return replace(self, box=box, transform=transform)

    def to_doc(self) -> dict:
        return {
            "id": self.object_id,
            "mesh": self.mesh_name,
            "atlas": self.atlas_name,
            "box": {
                "center": list(self.box.center),
                "half_extents": list(self.box.half_extents),
                "yaw": self.box.yaw,
                "category": self.box.category,
            },
            "transform": {
                "t": list(self.transform.translation),
                "ypr": list(self.transform.yaw_pitch_roll),
                "s": self.transform.uniform_scale,
            },
            "canonical_yaw_offset": self.canonical_yaw_offset,
        }


@dataclass(frozen=True)
class SceneProject:
    """Everything needed to re-render and re-stylize a scene."""

    room: Aabb
    objects: tuple[ObjectRecord, ...] = ()
    style_prompt: str = ""
    seed: int = 0
    reference_image: np.ndarray | None = None  # (H, W, 4) uint8
    version: str = SCHEMA_VERSION
    provenance: dict | None = None

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(self.objects))
        ids = [o.object_id for o in self.objects]
        if len(set(ids)) != len(ids):
            raise ValueError(f"duplicate object ids: {ids}")
        if self.reference_image is not None:
            ref = np.ascontiguousarray(np.asarray(self.reference_image, dtype=np.uint8))
            ref.setflags(write=False)
            object.__setattr__(self, "reference_image", ref)

    def get(self, object_id: str) -> ObjectRecord | None:
        for rec in self.objects:
            if rec.object_id == object_id:
                return rec
        return None

    def with_objects(self, objects) -> "SceneProject":
        return replace(self, objects=tuple(objects))

    def with_reference(self, image: np.ndarray | None) -> "SceneProject":
        return replace(self, reference_image=image)

    def with_provenance(self, provenance: dict | None) -> "SceneProject":
        return replace(self, provenance=provenance)

    def to_doc(self) -> dict:
        return {
            "version": self.version,
            "room": {"min": list(self.room.min), "max": list(self.room.max)},
            "style_prompt": self.style_prompt,
            "seed": self.seed,
            "reference_image": "reference.png" if self.reference_image is not None else None,
            "objects": [rec.to_doc() for rec in self.objects],
            "provenance": self.provenance,
        }

    def scene_json(self) -> str:
        return canonical_json(self.to_doc()) + "\n"


# ---------------------------------------------------------------------------
# directory I/O
# ---------------------------------------------------------------------------

def atomic_write_text(path: Path, text: str) -> None:
    """Write via temp file + rename so a crash never leaves a torn file."""
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def save_project(project: SceneProject, directory: str | Path) -> None:
    directory = Path(directory)
    try:
        (directory / "meshes").mkdir(parents=True, exist_ok=True)
        (directory / "atlases").mkdir(parents=True, exist_ok=True)

        written_meshes: set[str] = set()
        for rec in project.objects:
            if rec.mesh_name not in written_meshes:  # clones share their source mesh file
                save_mesh(rec.mesh, directory / rec.mesh_name)
                written_meshes.add(rec.mesh_name)
            save_atlas(rec.atlas, directory / rec.atlas_name)

        if project.reference_image is not None:
            Image.fromarray(project.reference_image, mode="RGBA").save(
                directory / "reference.png", format="PNG"
            )
        elif (directory / "reference.png").exists():
            (directory / "reference.png").unlink()

        # garbage-collect files dropped by REMOVE ops
        keep = {str(Path(rec.mesh_name)) for rec in project.objects} | {
            str(Path(rec.atlas_name)) for rec in project.objects
        }
        for sub in ("meshes", "atlases"):
            for f in sorted((directory / sub).iterdir()):
                if str(f.relative_to(directory)) not in keep:
                    f.unlink()

        atomic_write_text(directory / "scene.json", project.scene_json())
    except OSError as e:
        raise IoError(f"saving project to {directory}: {e}") from e


def load_project(directory: str | Path) -> SceneProject:
    directory = Path(directory)
    scene_path = directory / "scene.json"
    try:
        doc = json.loads(scene_path.read_text())
    except OSError as e:
        raise IoError(f"loading {scene_path}: {e}") from e
    except json.JSONDecodeError as e:
        raise IoError(f"{scene_path} is not valid JSON: {e}") from e

    version = doc.get("version")
    if version != SCHEMA_VERSION:
        raise SchemaVersionMismatch(f"scene.json version {version!r}, expected {SCHEMA_VERSION!r}")

    room = Aabb(tuple(doc["room"]["min"]), tuple(doc["room"]["max"]))

    mesh_cache: dict[str, TriangleMesh] = {}
    records = []
    for entry in doc["objects"]:
        mesh_name = entry["mesh"]
        if mesh_name not in mesh_cache:
            mesh_path = directory / mesh_name
            if not mesh_path.exists():
                raise IoError(f"referenced mesh missing: {mesh_path}")
            mesh_cache[mesh_name] = load_mesh(mesh_path)
        atlas_path = directory / entry["atlas"]
        if not atlas_path.exists():
            raise IoError(f"referenced atlas missing: {atlas_path}")
        b = entry["box"]
        t = entry["transform"]
        records.append(
            ObjectRecord(
                object_id=entry["id"],
                mesh=mesh_cache[mesh_name],
                mesh_name=mesh_name,
                atlas=load_atlas(atlas_path, object_id=entry["id"]),
                atlas_name=entry["atlas"],
                box=OrientedBox(
                    center=tuple(b["center"]),
                    half_extents=tuple(b["half_extents"]),
                    yaw=b["yaw"],
                    category=b["category"],
                    box_id=entry["id"],
                ),
                transform=Transform(tuple(t["t"]), tuple(t["ypr"]), t["s"]),
                canonical_yaw_offset=entry["canonical_yaw_offset"],
            )
        )

    reference = None
    if doc.get("reference_image"):
        ref_path = directory / doc["reference_image"]
        if not ref_path.exists():
            raise IoError(f"referenced image missing: {ref_path}")
        with Image.open(ref_path) as im:
            reference = np.asarray(im.convert("RGBA"), dtype=np.uint8)

    return SceneProject(
        room=room,
        objects=tuple(records),
        style_prompt=doc.get("style_prompt", ""),
        seed=int(doc.get("seed", 0)),
        reference_image=reference,
        version=version,
        provenance=doc.get("provenance"),
    )
