"""Deterministic software rasterizer.

Perspective-correct barycentric interpolation, z-buffering on perpendicular
depth, back-face culling, nearest-texel atlas sampling, no anti-aliasing.
Loops run in a fixed order so identical inputs always produce byte-identical
buffers; depth ties keep the earlier fragment.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import EmptyMesh
from ..geometry import Camera, TextureAtlas, Transform, TriangleMesh
from ..geometry.atlas import UNTOUCHED_RGB
from .buffers import NONE_FACE, DepthImage, FrameBuffers


def texel_coords(u: np.ndarray, v: np.ndarray, width: int, height: int):
    """Nearest-texel quantization of UVs; u indexes columns, v indexes rows."""
    tx = np.clip((np.asarray(u) * width).astype(np.int64), 0, width - 1)
    ty = np.clip((np.asarray(v) * height).astype(np.int64), 0, height - 1)
    return tx, ty


def _clip_near(corners: np.ndarray, attrs: np.ndarray, near: float):
    """Sutherland-Hodgman clip of one triangle against the plane z = -near.

    corners is (3, 3) camera-space positions, attrs (3, A) linearly
    interpolable attributes. Returns (positions, attrs) with 0, 3 or 4 rows.
    """
    keep = corners[:, 2] <= -near
    if keep.all():
        return corners, attrs
    if not keep.any():
        return corners[:0], attrs[:0]
    out_p, out_a = [], []
    for i in range(3):
        j = (i + 1) % 3
        pi, pj = corners[i], corners[j]
        ai, aj = attrs[i], attrs[j]
        if keep[i]:
            out_p.append(pi)
            out_a.append(ai)
        if keep[i] != keep[j]:
            t = (-near - pi[2]) / (pj[2] - pi[2])
            out_p.append(pi + t * (pj - pi))
            out_a.append(ai + t * (aj - ai))
    return np.asarray(out_p), np.asarray(out_a)


def rasterize(
    mesh: TriangleMesh,
    transform: Transform,
    camera: Camera,
    atlas: TextureAtlas | None = None,
) -> FrameBuffers:
    """Render one object into fresh framebuffers.

    Color is the nearest-texel sample of the object's atlas (untouched
    default where no atlas is given); back-facing fragments are discarded.
    """
    if mesh.face_count == 0:
        raise EmptyMesh("cannot rasterize an empty mesh")
    camera.validate()
    width, height = camera.resolution
    fb = FrameBuffers.empty(width, height)

    verts_world = transform.apply(mesh.vertices)
    verts_cam = camera.to_camera(verts_world)
    forward = camera.forward

    if atlas is not None:
        atlas_px = atlas.pixels
        aw, ah = atlas.width, atlas.height
    else:
        atlas_px = None
        aw = ah = 0

    tri_cam = verts_cam[mesh.faces_v]       # (F, 3, 3)
    tri_world = verts_world[mesh.faces_v]   # (F, 3, 3)
    tri_uv = mesh.uvs[mesh.faces_vt]        # (F, 3, 2)

    # geometric face normals from winding; |n . forward| is the view cosine
    face_n = np.cross(tri_world[:, 1] - tri_world[:, 0], tri_world[:, 2] - tri_world[:, 0])
    n_len = np.linalg.norm(face_n, axis=1)
    cosines = np.zeros(len(face_n))
    valid = n_len > 1e-20
    cosines[valid] = np.clip(
        np.abs(face_n[valid] @ forward) / n_len[valid], 0.0, 1.0
    )

    for f in range(mesh.face_count):
        if not valid[f]:
            continue
        pos, attr = _clip_near(tri_cam[f], tri_uv[f], camera.near)
        if len(pos) < 3:
            continue
        pix_all = camera.project(pos)
        w_all = -pos[:, 2]
        # fan-triangulate the clipped polygon (3 or 4 vertices)
        for k in range(1, len(pos) - 1):
            idx = (0, k, k + 1)
            _raster_one(
                fb, pix_all[list(idx)], w_all[list(idx)], attr[list(idx)],
                f, cosines[f], atlas_px, aw, ah, width, height, camera.far,
            )
    return fb


def _raster_one(fb, pix, w, uv, face_idx, cosine, atlas_px, aw, ah, width, height, far):
    x0, y0 = pix[0]
    x1, y1 = pix[1]
    x2, y2 = pix[2]
    area2 = (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0)
    if area2 >= 0.0:  # back-facing or degenerate in y-down pixel coords
        return

    min_x = max(0, int(np.floor(min(x0, x1, x2) - 0.5)))
    max_x = min(width - 1, int(np.ceil(max(x0, x1, x2))))
    min_y = max(0, int(np.floor(min(y0, y1, y2) - 0.5)))
    max_y = min(height - 1, int(np.ceil(max(y0, y1, y2))))
    if min_x > max_x or min_y > max_y:
        return

    px = np.arange(min_x, max_x + 1) + 0.5
    py = np.arange(min_y, max_y + 1) + 0.5
    gx, gy = np.meshgrid(px, py)

    l0 = ((x2 - x1) * (gy - y1) - (y2 - y1) * (gx - x1)) / area2
    l1 = ((x0 - x2) * (gy - y2) - (y0 - y2) * (gx - x2)) / area2
    l2 = 1.0 - l0 - l1
    inside = (l0 >= 0.0) & (l1 >= 0.0) & (l2 >= 0.0)
    if not inside.any():
        return

    inv_w = 1.0 / w
    denom = l0 * inv_w[0] + l1 * inv_w[1] + l2 * inv_w[2]
    depth = 1.0 / denom  # perspective-correct |z|
    inside &= depth <= far

    tile = fb.depth[min_y:max_y + 1, min_x:max_x + 1]
    win = inside & (depth < tile)
    if not win.any():
        return

    u = (l0 * uv[0, 0] * inv_w[0] + l1 * uv[1, 0] * inv_w[1] + l2 * uv[2, 0] * inv_w[2]) / denom
    v = (l0 * uv[0, 1] * inv_w[0] + l1 * uv[1, 1] * inv_w[1] + l2 * uv[2, 1] * inv_w[2]) / denom

    tile[win] = depth[win].astype(np.float32)
    fb.face_id[min_y:max_y + 1, min_x:max_x + 1][win] = face_idx
    fb.view_cosine[min_y:max_y + 1, min_x:max_x + 1][win] = cosine
    uv_tile = fb.uv[min_y:max_y + 1, min_x:max_x + 1]
    uv_tile[..., 0][win] = u[win].astype(np.float32)
    uv_tile[..., 1][win] = v[win].astype(np.float32)

    color_tile = fb.color[min_y:max_y + 1, min_x:max_x + 1]
    if atlas_px is not None:
        tx, ty = texel_coords(u[win], v[win], aw, ah)
        color_tile[win] = atlas_px[ty, tx]
    else:
        color_tile[win] = (*UNTOUCHED_RGB, 0)


def merge_framebuffers(buffers: list[FrameBuffers], width: int, height: int) -> FrameBuffers:
    """Depth-merge per-object buffers; ties keep the earlier object."""
    out = FrameBuffers.empty(width, height)
    for fb in buffers:
        nearer = fb.depth < out.depth
        out.depth[nearer] = fb.depth[nearer]
        out.face_id[nearer] = fb.face_id[nearer]
        out.color[nearer] = fb.color[nearer]
        out.uv[nearer] = fb.uv[nearer]
        out.view_cosine[nearer] = fb.view_cosine[nearer]
    return out


def render_depth(
    scene_objects: list[tuple[TriangleMesh, Transform]], camera: Camera
) -> DepthImage:
    """Merged multi-object z-buffer, quantized per DepthImage.

    An empty object list yields an all-far depth image.
    """
    camera.validate()
    width, height = camera.resolution
    merged = merge_framebuffers(
        [rasterize(mesh, tf, camera) for mesh, tf in scene_objects], width, height
    )
    return DepthImage.encode(merged.depth, camera.near, camera.far)


@dataclass(frozen=True)
class CoverageSamples:
    """Per-pixel records of which atlas texel each surviving fragment hits.

    Parallel arrays ordered by row-major pixel index; texel ids are flat
    (row * atlas_width + column).
    """

    texel_id: np.ndarray     # (N,) int64
    pixel: np.ndarray        # (N,) int64, row-major pixel index
    view_cosine: np.ndarray  # (N,) float32
    depth: np.ndarray        # (N,) float32

    def __len__(self) -> int:
        return int(self.texel_id.shape[0])


def visible_texels(
    mesh: TriangleMesh,
    transform: Transform,
    camera: Camera,
    atlas_dims: tuple[int, int],
) -> CoverageSamples:
    """One entry per covered pixel, mapping it into the atlas grid."""
    fb = rasterize(mesh, transform, camera)
    return coverage_from_buffers(fb, atlas_dims)


def coverage_from_buffers(fb: FrameBuffers, atlas_dims: tuple[int, int]) -> CoverageSamples:
    aw, ah = atlas_dims
    mask = fb.covered
    ys, xs = np.nonzero(mask)
    width = fb.depth.shape[1]
    tx, ty = texel_coords(fb.uv[ys, xs, 0], fb.uv[ys, xs, 1], aw, ah)
    return CoverageSamples(
        texel_id=ty * aw + tx,
        pixel=(ys * width + xs).astype(np.int64),
        view_cosine=fb.view_cosine[ys, xs],
        depth=fb.depth[ys, xs],
    )
