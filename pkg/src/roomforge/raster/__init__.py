from .buffers import DEPTH_MAX_CODE, NONE_FACE, DepthImage, FrameBuffers, depth_sidecar_path, load_depth_image, save_depth_image
from .render import CoverageSamples, coverage_from_buffers, merge_framebuffers, rasterize, render_depth, texel_coords, visible_texels

__all__ = [
    "DEPTH_MAX_CODE",
    "NONE_FACE",
    "CoverageSamples",
    "DepthImage",
    "FrameBuffers",
    "coverage_from_buffers",
    "depth_sidecar_path",
    "load_depth_image",
    "merge_framebuffers",
    "rasterize",
    "render_depth",
    "save_depth_image",
    "texel_coords",
    "visible_texels",
]
