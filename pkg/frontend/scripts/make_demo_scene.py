"""Builds a small painted scene for UI tests: three crates in an 8x3x6 room.

Usage: python3 make_demo_scene.py OUT_DIR
"""

import sys

import numpy as np

from roomforge.geometry import Aabb, OrientedBox, TextureAtlas, TriangleMesh
from roomforge.layout.fit import fit_object
from roomforge.project import ObjectRecord, SceneProject, save_project

# Face order: +x, -x, +y, -y, +z, -z; each quad wound CCW seen from outside.
CUBE_QUADS = [
    (4, 6, 7, 5),
    (0, 1, 3, 2),
    (2, 3, 7, 6),
    (0, 4, 5, 1),
    (1, 5, 7, 3),
    (0, 2, 6, 4),
]


def make_cube(object_id: str) -> TriangleMesh:
    v8 = np.array([[x, y, z] for x in (0, 1) for y in (0, 1) for z in (0, 1)], dtype=np.float64)
    verts, uvs, faces = [], [], []
    for fi, quad in enumerate(CUBE_QUADS):
        col, row = fi % 3, fi // 3
        u0, v0 = col / 3.0, row / 2.0
        u1, v1 = (col + 1) / 3.0, (row + 1) / 2.0
        base = len(verts)
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


def place_crate(object_id: str, box: OrientedBox, rgb: tuple) -> ObjectRecord:
    mesh = make_cube(object_id)
    px = np.zeros((64, 64, 4), dtype=np.uint8)
    px[..., :3] = rgb
    px[..., 3] = 255
    atlas = TextureAtlas(64, 64, px, object_id)
    return ObjectRecord(
        object_id=object_id,
        mesh=mesh,
        mesh_name=f"meshes/{object_id}.obj",
        atlas=atlas,
        atlas_name=f"atlases/{object_id}.png",
        box=box,
        transform=fit_object(mesh, box),
    )


def main(out_dir: str) -> None:
    room = Aabb(np.array([0.0, 0.0, 0.0]), np.array([8.0, 3.0, 6.0]))
    objects = (
        place_crate("crate-a", OrientedBox((2.0, 0.5, 2.0), (0.5, 0.5, 0.5), 0.0, "crate"), (200, 60, 40)),
        place_crate("crate-b", OrientedBox((5.5, 0.5, 2.2), (0.6, 0.5, 0.4), 0.0, "crate"), (40, 160, 70)),
        place_crate("crate-c", OrientedBox((3.5, 0.5, 4.5), (0.5, 0.5, 0.5), 0.0, "crate"), (50, 80, 210)),
    )
    scene = SceneProject(room=room, objects=objects, style_prompt="weathered plywood crates", seed=7)
    save_project(scene, out_dir)
    print(f"wrote {len(objects)} objects to {out_dir}")


if __name__ == "__main__":
    main(sys.argv[1])
