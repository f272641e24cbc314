"""Render targets: per-pixel framebuffers and the 16-bit depth encoding."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from ..errors import MalformedFile

NONE_FACE = -1  # face_id value for uncovered pixels

DEPTH_MAX_CODE = 65535


@dataclass
class FrameBuffers:
    """Outputs of one rasterization pass; all buffers share the camera resolution.

    depth is the perpendicular distance to the camera plane in meters (+inf
    where no fragment survived); view_cosine is |face normal . camera forward|.
    """

    color: np.ndarray        # (H, W, 4) uint8
    depth: np.ndarray        # (H, W) float32, +inf where empty
    face_id: np.ndarray      # (H, W) int32, NONE_FACE where empty
    uv: np.ndarray           # (H, W, 2) float32
    view_cosine: np.ndarray  # (H, W) float32 in [0, 1]

    @staticmethod
    def empty(width: int, height: int) -> "FrameBuffers":
        return FrameBuffers(
            color=np.zeros((height, width, 4), dtype=np.uint8),
            depth=np.full((height, width), np.inf, dtype=np.float32),
            face_id=np.full((height, width), NONE_FACE, dtype=np.int32),
            uv=np.zeros((height, width, 2), dtype=np.float32),
            view_cosine=np.zeros((height, width), dtype=np.float32),
        )

    @property
    def covered(self) -> np.ndarray:
        return self.face_id != NONE_FACE


@dataclass(frozen=True)
class DepthImage:
    """16-bit quantized depth raster with the linear code->meters mapping."""

    codes: np.ndarray  # (H, W) uint16
    near: float
    far: float

    def __post_init__(self):
        codes = np.ascontiguousarray(np.asarray(self.codes, dtype=np.uint16))
        codes.setflags(write=False)
        object.__setattr__(self, "codes", codes)
        if not (0.0 < self.near < self.far):
            raise ValueError(f"need 0 < near < far, got {self.near}, {self.far}")

    @staticmethod
    def encode(depth_m: np.ndarray, near: float, far: float) -> "DepthImage":
        """Quantize metric depth; +inf (background) encodes the far plane."""
        d = np.asarray(depth_m, dtype=np.float64)
        frac = np.clip((d - near) / (far - near), 0.0, 1.0)
        codes = np.rint(frac * DEPTH_MAX_CODE).astype(np.uint16)
        return DepthImage(codes, float(near), float(far))

    def decode(self) -> np.ndarray:
        """Metric depth in meters, float64."""
        return self.near + self.codes.astype(np.float64) / DEPTH_MAX_CODE * (self.far - self.near)

    @property
    def quantization_step(self) -> float:
        return (self.far - self.near) / DEPTH_MAX_CODE


def depth_sidecar_path(png_path: str | Path) -> Path:
    return Path(png_path).with_suffix(".json")


def save_depth_image(depth: DepthImage, png_path: str | Path) -> None:
    """Write the 16-bit gray PNG plus its {near, far} sidecar JSON."""
    png_path = Path(png_path)
    Image.fromarray(depth.codes).save(png_path, format="PNG")  # uint16 -> I;16
    depth_sidecar_path(png_path).write_text(
        json.dumps({"near": depth.near, "far": depth.far}) + "\n"
    )


def load_depth_image(png_path: str | Path) -> DepthImage:
    png_path = Path(png_path)
    try:
        with Image.open(png_path) as im:
            codes = np.asarray(im, dtype=np.uint16)
        meta = json.loads(depth_sidecar_path(png_path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise MalformedFile(f"cannot read depth image {png_path}: {e}") from e
    return DepthImage(codes, float(meta["near"]), float(meta["far"]))
