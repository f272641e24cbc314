"""View synthesis and UV backprojection for a single object."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..backends import SynthesisRequest, TextureSynthesizer, synthesize
from ..errors import BackendError
from ..geometry import TextureAtlas, Transform, TriangleMesh
from ..imgio import rgba_png_bytes
from ..raster import DepthImage, FrameBuffers, rasterize, texel_coords
from .trimap import COS_UPDATE_MARGIN, CoverageBuffer, State, Trimap, build_trimap, trimap_to_mask
from .views import ViewSchedule

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class StyleContext:
    """Conditioning for one object's stylization pass."""

    prompt: str
    global_reference: np.ndarray | None = None
    object_references: tuple = ()
    seed: int = 0

    def reference_list(self) -> tuple:
        refs = () if self.global_reference is None else (self.global_reference,)
        return refs + tuple(self.object_references)


def backproject(
    view_image: np.ndarray,
    frame: FrameBuffers,
    trimap: Trimap,
    atlas: TextureAtlas,
    coverage: CoverageBuffer,
):
    """Write GENERATE/UPDATE pixels into their texels.

    When several pixels land on one texel the highest view cosine wins,
    ties broken by lower row-major pixel index. Painted texels get alpha
    255; KEEP and BACKGROUND pixels write nothing.
    """
    writable = (trimap.states == State.GENERATE) | (trimap.states == State.UPDATE)
    if not writable.any():
        return atlas, coverage
    ys, xs = np.nonzero(writable)
    tx, ty = texel_coords(frame.uv[ys, xs, 0], frame.uv[ys, xs, 1], atlas.width, atlas.height)
    tex = ty * atlas.width + tx
    cos = frame.view_cosine[ys, xs]
    pix = ys * frame.depth.shape[1] + xs
    order = np.lexsort((pix, -cos, tex))
    tex_sorted = tex[order]
    first = np.r_[True, tex_sorted[1:] != tex_sorted[:-1]]
    win = order[first]

    pixels = atlas.pixels.copy()
    pixels[ty[win], tx[win], :3] = view_image[ys[win], xs[win], :3]
    pixels[ty[win], tx[win], 3] = 255
    coverage.painted[ty[win], tx[win]] = True
    coverage.best_cosine[ty[win], tx[win]] = np.maximum(
        coverage.best_cosine[ty[win], tx[win]], cos[win]
    )
    return atlas.with_pixels(pixels), coverage


def _dump_debug(debug_dir: Path, object_id: str, view_idx: int, image, trimap, mask):
    out = debug_dir / object_id
    out.mkdir(parents=True, exist_ok=True)
    (out / f"view{view_idx:02d}.png").write_bytes(rgba_png_bytes(image))
    palette = np.array(
        [[0, 0, 0, 255], [0, 200, 0, 255], [230, 160, 0, 255], [70, 70, 200, 255]],
        dtype=np.uint8,
    )
    (out / f"trimap{view_idx:02d}.png").write_bytes(rgba_png_bytes(palette[trimap.states]))
    gray = np.repeat((mask * 255).astype(np.uint8)[..., None], 4, axis=2)
    gray[..., 3] = 255
    (out / f"mask{view_idx:02d}.png").write_bytes(rgba_png_bytes(gray))


def stylize_object(
    mesh: TriangleMesh,
    transform: Transform,
    atlas: TextureAtlas,
    views: ViewSchedule,
    context: StyleContext,
    backend: TextureSynthesizer,
    cos_update_margin: float = COS_UPDATE_MARGIN,
    debug_dir: Path | None = None,
):
    """Paint one object's atlas view by view.

    Views run strictly in schedule order since each partial render depends
    on the atlas state left by the previous view. Backend failures abort
    the object; the completed view count is logged and the error propagates.
    """
    coverage = CoverageBuffer.from_atlas(atlas)
    images = []
    for i, camera in enumerate(views):
        fb = rasterize(mesh, transform, camera, atlas=atlas)
        trimap = build_trimap(fb, coverage, cos_update_margin)
        mask = trimap_to_mask(trimap)
        request = SynthesisRequest(
            prompt=context.prompt,
            width=camera.resolution[0],
            height=camera.resolution[1],
            depth=DepthImage.encode(fb.depth, camera.near, camera.far),
            partial_image=fb.color,
            mask=mask,
            reference_images=context.reference_list(),
            seed=context.seed + i,
        )
        try:
            response = synthesize(backend, request)
        except BackendError:
            log.warning(
                "object %s aborted after %d of %d views", atlas.object_id, i, len(views)
            )
            raise
        atlas, coverage = backproject(response.image, fb, trimap, atlas, coverage)
        images.append(response.image)
        if debug_dir is not None:
            _dump_debug(debug_dir, atlas.object_id or "object", i, response.image, trimap, mask)
    return atlas, images
