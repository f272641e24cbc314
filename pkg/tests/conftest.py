"""Shared fixtures: canned meshes, scenes, and fake backends."""

from __future__ import annotations

import hashlib
from pathlib import Path

import numpy as np
import pytest

from roomforge.backends.contracts import SynthesisRequest
from roomforge.geometry import (
    Aabb,
    OrientedBox,
    TextureAtlas,
    Transform,
    TriangleMesh,
)
from roomforge.layout.fit import fit_object
from roomforge.project import ObjectRecord, SceneProject

# Face order: +x, -x, +y, -y, +z, -z; each quad wound CCW seen from outside.
CUBE_QUADS = [
    (4, 6, 7, 5),
    (0, 1, 3, 2),
    (2, 3, 7, 6),
    (0, 4, 5, 1),
    (1, 5, 7, 3),
    (0, 2, 6, 4),
]


def make_cube(size: float = 1.0, origin=(0.0, 0.0, 0.0), object_id: str = "cube") -> TriangleMesh:
    """Axis-aligned cube with each face mapped to its own cell of a 3x2 UV grid.

    Duplicated corner vertices per face keep the UV islands disjoint, so every
    texel belongs to exactly one face.
    """
    o = np.asarray(origin, dtype=np.float64)
    v8 = np.array([[x, y, z] for x in (0, 1) for y in (0, 1) for z in (0, 1)], dtype=np.float64)
    v8 = v8 * size + o
    verts: list[np.ndarray] = []
    uvs: list[tuple[float, float]] = []
    faces: list[tuple[int, int, int]] = []
    for fi, quad in enumerate(CUBE_QUADS):
        col, row = fi % 3, fi // 3
        u0, v0 = col / 3.0, row / 2.0
        u1, v1 = (col + 1) / 3.0, (row + 1) / 2.0
        base = len(verts)
        # inset the island slightly so nearest-texel lookups never cross cells
        eps = 1e-4
        corner_uv = [(u0 + eps, v0 + eps), (u1 - eps, v0 + eps), (u1 - eps, v1 - eps), (u0 + eps, v1 - eps)]
        for vi, uv in zip(quad, corner_uv):
            verts.append(v8[vi])
            uvs.append(uv)
        faces.append((base, base + 1, base + 2))
        faces.append((base, base + 2, base + 3))
    return TriangleMesh.from_arrays(
        np.array(verts), np.array(uvs, dtype=np.float64), np.array(faces), object_id=object_id
    )


def make_quad(object_id: str = "quad") -> TriangleMesh:
    """Unit quad in the z=0 plane, normal +Z, UVs spanning the full atlas.

    Faces a camera placed at positive z looking toward the origin.
    """
    verts = np.array([[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]], dtype=np.float64)
    uvs = np.array([[0, 0], [1, 0], [1, 1], [0, 1]], dtype=np.float64)
    faces = np.array([[0, 1, 2], [0, 2, 3]])
    return TriangleMesh.from_arrays(verts, uvs, faces, object_id=object_id)


class CannedLlm:
    """LLM stub that replays a fixed list of responses and records prompts."""

    def __init__(self, responses):
        self.responses = list(responses)
        self.calls: list[tuple[str, str]] = []

    def chat(self, system: str, user: str) -> str:
        self.calls.append((system, user))
        idx = min(len(self.calls) - 1, len(self.responses) - 1)
        return self.responses[idx]


class ConstantBackend:
    """Deliberately sloppy synthesizer: paints the whole frame one color.

    Ignores the mask entirely, which is exactly what the engine-side re-blend
    has to defend against.
    """

    backend_id = "constant"

    def __init__(self, rgb=(200, 40, 40)):
        self.rgb = tuple(rgb)
        self.requests: list[SynthesisRequest] = []

    def run(self, request: SynthesisRequest) -> np.ndarray:
        self.requests.append(request)
        img = np.zeros((request.height, request.width, 4), dtype=np.uint8)
        img[..., :3] = self.rgb
        img[..., 3] = 255
        return img


def place_cube(object_id: str, box: OrientedBox, atlas_size: int = 64) -> ObjectRecord:
    mesh = make_cube(object_id=object_id)
    transform = fit_object(mesh, box)
    return ObjectRecord(
        object_id=object_id,
        mesh=mesh,
        mesh_name=f"meshes/{object_id}.obj",
        atlas=TextureAtlas.untouched(atlas_size, atlas_size, object_id),
        atlas_name=f"atlases/{object_id}.png",
        box=box,
        transform=transform,
    )


def make_scene(n_objects: int = 3, atlas_size: int = 64, seed: int = 7) -> SceneProject:
    """Room with n separated, floor-resting cubes of decreasing size."""
    room = Aabb(np.array([0.0, 0.0, 0.0]), np.array([8.0, 3.0, 6.0]))
    objects = []
    for i in range(n_objects):
        h = 0.6 - 0.1 * i
        box = OrientedBox(
            center=(1.5 + 2.0 * i, h, 1.5 + 0.8 * i),
            half_extents=(h, h, h),
            yaw=0.2 * i,
            category=f"crate-{i}",
        )
        objects.append(place_cube(f"obj-{i}", box, atlas_size))
    return SceneProject(
        room=room,
        objects=tuple(objects),
        style_prompt="weathered plywood crates",
        seed=seed,
    )


def dir_hash(path: str | Path) -> str:
    """Order-independent digest of a directory tree (relative name + bytes)."""
    root = Path(path)
    h = hashlib.sha256()
    for f in sorted(p for p in root.rglob("*") if p.is_file()):
        h.update(str(f.relative_to(root)).encode())
        h.update(b"\0")
        h.update(f.read_bytes())
    return h.hexdigest()


@pytest.fixture
def cube() -> TriangleMesh:
    return make_cube()


@pytest.fixture
def quad() -> TriangleMesh:
    return make_quad()


@pytest.fixture
def scene() -> SceneProject:
    return make_scene()
