"""Pipeline configuration: JSON schema, camera specs, backend selection."""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path

from ..backends import ProceduralBackend, RemoteBackend, RemoteLlmClient, ToyDdpmBackend
from ..errors import ConfigError
from ..geometry import Aabb, Camera

BACKEND_KINDS = ("procedural", "toy_ddpm", "remote")


@dataclass(frozen=True)
class ObjectSpec:
    mesh_path: Path
    category: str
    canonical_yaw_offset: float = 0.0


@dataclass(frozen=True)
class ViewConfig:
    n_azimuth: int = 8
    elevations_deg: tuple = (0.0, 30.0)
    include_top: bool = True
    distance_factor: float = 1.5
    resolution: tuple = (256, 256)

    @property
    def elevations(self) -> tuple:
        return tuple(math.radians(e) for e in self.elevations_deg)

    @property
    def views_per_object(self) -> int:
        return self.n_azimuth * len(self.elevations_deg) + (1 if self.include_top else 0)


@dataclass(frozen=True)
class PipelineConfig:
    objects: tuple
    room: Aabb
    style_prompt: str
    seed: int
    out_dir: Path
    layout_source: str = "llm"          # "file" | "llm"
    layout_path: Path | None = None
    room_type: str = "living room"
    backend: str = "procedural"
    synth_endpoint: str | None = None
    llm_endpoint: str | None = None
    cameras: tuple = ()
    atlas_size: int = 256
    views: ViewConfig = field(default_factory=ViewConfig)
    use_references: bool = True
    debug_dumps: bool = False

    def __post_init__(self):
        if not self.objects:
            raise ConfigError("config needs at least one object")
        if self.layout_source not in ("file", "llm"):
            raise ConfigError(f"layout source must be file or llm, got {self.layout_source!r}")
        if self.layout_source == "file" and self.layout_path is None:
            raise ConfigError("file layout source needs a layout path")
        if self.backend not in BACKEND_KINDS:
            raise ConfigError(f"backend must be one of {BACKEND_KINDS}, got {self.backend!r}")
        if self.atlas_size < 64:
            raise ConfigError("atlas size below 64 cannot hold a useful texture")


def parse_camera_spec(spec: str, width: int = 512, height: int = 512) -> Camera:
    """px,py,pz,lx,ly,lz,fov with fov in degrees."""
    parts = spec.split(",")
    if len(parts) != 7:
        raise ConfigError(f"camera spec needs 7 comma-separated numbers, got {spec!r}")
    try:
        vals = [float(p) for p in parts]
    except ValueError as exc:
        raise ConfigError(f"bad camera spec {spec!r}: {exc}") from exc
    return Camera(
        position=vals[0:3],
        look_at=vals[3:6],
        vertical_fov=math.radians(vals[6]),
        resolution=(width, height),
    )


def camera_from_doc(doc) -> Camera:
    if isinstance(doc, str):
        return parse_camera_spec(doc)
    try:
        return Camera(
            position=doc["position"],
            look_at=doc["look_at"],
            vertical_fov=math.radians(doc.get("fov_deg", 60.0)),
            resolution=tuple(doc.get("resolution", (512, 512))),
        )
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"bad camera entry {doc!r}: {exc}") from exc


def load_config(path: str | Path, out_dir: str | Path | None = None) -> PipelineConfig:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc

    try:
        if "seed" not in doc:
            raise ConfigError("config must state a seed; there is no implicit entropy")
        room = Aabb(tuple(doc["room"]["min"]), tuple(doc["room"]["max"]))
        objects = tuple(
            ObjectSpec(
                mesh_path=(path.parent / o["mesh"]).resolve(),
                category=o["category"],
                canonical_yaw_offset=math.radians(o.get("canonical_yaw_offset_deg", 0.0)),
            )
            for o in doc["objects"]
        )
        layout = doc.get("layout", {"source": "llm"})
        views_doc = doc.get("views", {})
        views = ViewConfig(
            n_azimuth=views_doc.get("n_azimuth", 8),
            elevations_deg=tuple(views_doc.get("elevations_deg", (0.0, 30.0))),
            include_top=views_doc.get("include_top", True),
            distance_factor=views_doc.get("distance_factor", 1.5),
            resolution=tuple(views_doc.get("resolution", (256, 256))),
        )
        resolved_out = Path(out_dir) if out_dir is not None else Path(doc.get("out_dir", "scene-out"))
        return PipelineConfig(
            objects=objects,
            room=room,
            style_prompt=doc.get("style_prompt", ""),
            seed=int(doc["seed"]),
            out_dir=resolved_out,
            layout_source=layout.get("source", "llm"),
            layout_path=(path.parent / layout["path"]).resolve() if "path" in layout else None,
            room_type=layout.get("room_type", "living room"),
            backend=doc.get("backend", "procedural"),
            synth_endpoint=doc.get("synth_endpoint"),
            llm_endpoint=doc.get("llm_endpoint"),
            cameras=tuple(camera_from_doc(c) for c in doc.get("cameras", [])),
            atlas_size=int(doc.get("atlas_size", 256)),
            views=views,
            use_references=bool(doc.get("use_references", True)),
            debug_dumps=bool(doc.get("debug_dumps", False)),
        )
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"config {path}: {exc!r}") from exc


def make_backend(kind: str, endpoint: str | None = None):
    if kind == "procedural":
        return ProceduralBackend()
    if kind == "toy_ddpm":
        return ToyDdpmBackend()
    if kind == "remote":
        endpoint = endpoint or os.environ.get("SYNTH_ENDPOINT")
        if not endpoint:
            raise ConfigError("remote backend needs synth_endpoint or SYNTH_ENDPOINT")
        return RemoteBackend(endpoint)
    raise ConfigError(f"unknown backend kind {kind!r}")


def make_llm_client(endpoint: str | None = None):
    endpoint = endpoint or os.environ.get("LLM_ENDPOINT")
    if not endpoint:
        raise ConfigError("llm layout source needs llm_endpoint or LLM_ENDPOINT")
    return RemoteLlmClient(endpoint)
