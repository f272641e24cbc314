"""Triangle meshes and Wavefront OBJ I/O.

Meshes must arrive UV-unwrapped: every face needs texture coordinates so the
texturing engine can map view pixels onto the object's atlas. OBJ is the only
interchange format (text, diffable in tests).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..errors import EmptyMesh, MalformedFile, MissingUVs
from .boxes import Aabb
from .transforms import Transform

_UV_TOL = 1e-4  # slack before out-of-range UVs are rejected


@dataclass(frozen=True)
class TriangleMesh:
    """Indexed triangle mesh with per-corner UVs and unit vertex normals.

    faces_v / faces_vt / faces_vn are (F, 3) index arrays into vertices, uvs
    and normals respectively. All arrays are frozen after construction.
    """

    vertices: np.ndarray   # (N, 3) float64, meters
    normals: np.ndarray    # (M, 3) float64, unit length
    uvs: np.ndarray        # (K, 2) float64 in [0, 1]^2
    faces_v: np.ndarray    # (F, 3) int32
    faces_vt: np.ndarray   # (F, 3) int32
    faces_vn: np.ndarray   # (F, 3) int32
    object_id: str = field(default="")

    def __post_init__(self):
        v = np.ascontiguousarray(np.asarray(self.vertices, dtype=np.float64)).reshape(-1, 3)
        n = np.ascontiguousarray(np.asarray(self.normals, dtype=np.float64)).reshape(-1, 3)
        uv = np.ascontiguousarray(np.asarray(self.uvs, dtype=np.float64)).reshape(-1, 2)
        fv = np.ascontiguousarray(np.asarray(self.faces_v, dtype=np.int32)).reshape(-1, 3)
        ft = np.ascontiguousarray(np.asarray(self.faces_vt, dtype=np.int32)).reshape(-1, 3)
        fn = np.ascontiguousarray(np.asarray(self.faces_vn, dtype=np.int32)).reshape(-1, 3)
        if not (fv.shape == ft.shape == fn.shape):
            raise MalformedFile("face index arrays disagree in shape")
        for arr, count, what in ((fv, len(v), "vertex"), (ft, len(uv), "uv"), (fn, len(n), "normal")):
            if arr.size and (arr.min() < 0 or arr.max() >= count):
                raise MalformedFile(f"{what} index out of range")
        if fv.size and np.any(
            (fv[:, 0] == fv[:, 1]) | (fv[:, 1] == fv[:, 2]) | (fv[:, 0] == fv[:, 2])
        ):
            raise MalformedFile("degenerate face: repeated vertex index")
        if uv.size:
            if uv.min() < -_UV_TOL or uv.max() > 1.0 + _UV_TOL:
                raise MalformedFile("UV coordinates outside [0,1]^2")
            uv = np.clip(uv, 0.0, 1.0)
        if n.size:
            lengths = np.linalg.norm(n, axis=1)
            if np.any(np.abs(lengths - 1.0) > 1e-5):
                raise MalformedFile("normals are not unit length")
        for arr in (v, n, uv, fv, ft, fn):
            arr.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "normals", n)
        object.__setattr__(self, "uvs", uv)
        object.__setattr__(self, "faces_v", fv)
        object.__setattr__(self, "faces_vt", ft)
        object.__setattr__(self, "faces_vn", fn)

    @property
    def face_count(self) -> int:
        return int(self.faces_v.shape[0])

    @property
    def vertex_count(self) -> int:
        return int(self.vertices.shape[0])

    @classmethod
    def from_arrays(cls, vertices, uvs, faces_v, faces_vt=None, object_id: str = "") -> "TriangleMesh":
        """Mesh from positions, UVs and faces; normals computed per vertex."""
        vertices = np.asarray(vertices, dtype=np.float64).reshape(-1, 3)
        faces_v = np.asarray(faces_v, dtype=np.int32).reshape(-1, 3)
        return cls(
            vertices=vertices,
            normals=_area_weighted_vertex_normals(vertices, faces_v),
            uvs=uvs,
            faces_v=faces_v,
            faces_vt=faces_v if faces_vt is None else faces_vt,
            faces_vn=faces_v,
            object_id=object_id,
        )

    def bounding_sphere(self) -> tuple[np.ndarray, float]:
        """(center, radius) of the AABB-centered bounding sphere."""
        if self.vertices.size == 0:
            raise EmptyMesh("mesh has no vertices")
        box = Aabb.of_points(self.vertices)
        center = box.center
        radius = float(np.linalg.norm(self.vertices - center, axis=1).max())
        return center, radius

    def with_object_id(self, object_id: str) -> "TriangleMesh":
        return TriangleMesh(
            self.vertices, self.normals, self.uvs,
            self.faces_v, self.faces_vt, self.faces_vn, object_id,
        )


def mesh_aabb(mesh: TriangleMesh, transform: Transform = Transform()) -> Aabb:
    """Minimal axis-aligned box containing all transformed vertices."""
    if mesh.vertices.size == 0 or mesh.face_count == 0:
        raise EmptyMesh("cannot take the AABB of an empty mesh")
    return Aabb.of_points(transform.apply(mesh.vertices))


def _area_weighted_vertex_normals(vertices: np.ndarray, faces_v: np.ndarray) -> np.ndarray:
    acc = np.zeros_like(vertices)
    a = vertices[faces_v[:, 0]]
    b = vertices[faces_v[:, 1]]
    c = vertices[faces_v[:, 2]]
    # cross product length is twice the face area, so summing it area-weights
    face_n = np.cross(b - a, c - a)
    for k in range(3):
        np.add.at(acc, faces_v[:, k], face_n)
    lengths = np.linalg.norm(acc, axis=1, keepdims=True)
    out = np.where(lengths > 1e-20, acc / np.maximum(lengths, 1e-20), [0.0, 1.0, 0.0])
    return out


def _parse_index(token: str, count: int, path: Path, what: str) -> int:
    try:
        idx = int(token)
    except ValueError as e:
        raise MalformedFile(f"{path}: bad {what} index '{token}'") from e
    if idx < 0:
        idx = count + idx
    else:
        idx = idx - 1
    if idx < 0 or idx >= count:
        raise MalformedFile(f"{path}: {what} index {token} out of range")
    return idx


def load_mesh(path: str | Path) -> TriangleMesh:
    """Load a Wavefront OBJ with UVs.

    Missing normals are computed as area-weighted vertex normals. Polygonal
    faces are fan-triangulated.
    """
    path = Path(path)
    verts: list[list[float]] = []
    uvs: list[list[float]] = []
    norms: list[list[float]] = []
    tri_v: list[list[int]] = []
    tri_vt: list[list[int]] = []
    tri_vn: list[list[int]] = []
    saw_missing_vn = False

    try:
        text = path.read_text()
    except OSError as e:
        raise MalformedFile(f"cannot read {path}: {e}") from e

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        tag, args = parts[0], parts[1:]
        try:
            if tag == "v":
                verts.append([float(args[0]), float(args[1]), float(args[2])])
            elif tag == "vt":
                uvs.append([float(args[0]), float(args[1])])
            elif tag == "vn":
                norms.append([float(args[0]), float(args[1]), float(args[2])])
            elif tag == "f":
                if len(args) < 3:
                    raise MalformedFile(f"{path}:{lineno}: face with <3 corners")
                corners = []
                for tok in args:
                    fields = tok.split("/")
                    vi = _parse_index(fields[0], len(verts), path, "vertex")
                    ti = None
                    ni = None
                    if len(fields) > 1 and fields[1] != "":
                        ti = _parse_index(fields[1], len(uvs), path, "uv")
                    if len(fields) > 2 and fields[2] != "":
                        ni = _parse_index(fields[2], len(norms), path, "normal")
                    corners.append((vi, ti, ni))
                for k in range(1, len(corners) - 1):
                    fan = (corners[0], corners[k], corners[k + 1])
                    if any(c[1] is None for c in fan):
                        if not uvs:
                            raise MissingUVs(f"{path}: no vt records")
                        raise MalformedFile(f"{path}:{lineno}: face corner without uv index")
                    if any(c[2] is None for c in fan):
                        saw_missing_vn = True
                    tri_v.append([c[0] for c in fan])
                    tri_vt.append([c[1] for c in fan])
                    tri_vn.append([c[2] if c[2] is not None else 0 for c in fan])
        except MalformedFile:
            raise
        except (ValueError, IndexError) as e:
            raise MalformedFile(f"{path}:{lineno}: {e}") from e

    if not tri_v:
        raise MalformedFile(f"{path}: no faces")
    if not uvs:
        raise MissingUVs(f"{path}: no vt records")

    vertices = np.asarray(verts, dtype=np.float64)
    uv_arr = np.asarray(uvs, dtype=np.float64)
    faces_v = np.asarray(tri_v, dtype=np.int32)
    faces_vt = np.asarray(tri_vt, dtype=np.int32)

    if norms and not saw_missing_vn:
        n_arr = np.asarray(norms, dtype=np.float64)
        lengths = np.linalg.norm(n_arr, axis=1, keepdims=True)
        if np.any(lengths < 1e-12):
            raise MalformedFile(f"{path}: zero-length normal")
        n_arr = n_arr / lengths
        faces_vn = np.asarray(tri_vn, dtype=np.int32)
    else:
        n_arr = _area_weighted_vertex_normals(vertices, faces_v)
        faces_vn = faces_v.copy()

    return TriangleMesh(
        vertices=vertices, normals=n_arr, uvs=uv_arr,
        faces_v=faces_v, faces_vt=faces_vt, faces_vn=faces_vn,
        object_id=path.stem,
    )


def save_mesh(mesh: TriangleMesh, path: str | Path) -> None:
    """Write a canonical OBJ: fixed 6-decimal floats, v/vt/vn face triples."""
    path = Path(path)
    lines: list[str] = []
    for x, y, z in mesh.vertices:
        lines.append(f"v {x:.6f} {y:.6f} {z:.6f}")
    for u, v in mesh.uvs:
        lines.append(f"vt {u:.6f} {v:.6f}")
    for x, y, z in mesh.normals:
        lines.append(f"vn {x:.6f} {y:.6f} {z:.6f}")
    for fv, ft, fn in zip(mesh.faces_v, mesh.faces_vt, mesh.faces_vn):
        corner = " ".join(f"{fv[k] + 1}/{ft[k] + 1}/{fn[k] + 1}" for k in range(3))
        lines.append(f"f {corner}")
    path.write_text("\n".join(lines) + "\n")
