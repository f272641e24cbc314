"""Per-object texture atlases.

The painted/untouched state of every texel is encoded in the alpha channel:
alpha 255 means the texel was written by a backprojection, alpha 0 means it
still holds the untouched default. This keeps the on-disk form a single RGBA
PNG while preserving exact coverage accounting.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from ..errors import MalformedFile

UNTOUCHED_RGB = (128, 128, 128)
PAINTED_ALPHA = 255


def _is_pow2(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class TextureAtlas:
    """RGBA8 texture image addressed by mesh UVs; dimensions are powers of two."""

    width: int
    height: int
    pixels: np.ndarray  # (height, width, 4) uint8, read-only
    object_id: str = ""

    def __post_init__(self):
        for dim in (self.width, self.height):
            if not (_is_pow2(dim) and 64 <= dim <= 4096):
                raise ValueError(f"atlas dimensions must be powers of two in [64, 4096], got {dim}")
        px = np.ascontiguousarray(np.asarray(self.pixels, dtype=np.uint8))
        if px.shape != (self.height, self.width, 4):
            raise ValueError(f"pixel buffer shape {px.shape} != {(self.height, self.width, 4)}")
        px.setflags(write=False)
        object.__setattr__(self, "pixels", px)

    @staticmethod
    def untouched(width: int, height: int, object_id: str = "") -> "TextureAtlas":
        px = np.zeros((height, width, 4), dtype=np.uint8)
        px[..., :3] = UNTOUCHED_RGB
        return TextureAtlas(width, height, px, object_id)

    @property
    def painted(self) -> np.ndarray:
        """(H, W) bool mask of texels ever written."""
        return self.pixels[..., 3] == PAINTED_ALPHA

    @property
    def painted_count(self) -> int:
        return int(self.painted.sum())

    def with_pixels(self, pixels: np.ndarray) -> "TextureAtlas":
        return TextureAtlas(self.width, self.height, pixels, self.object_id)

    def with_object_id(self, object_id: str) -> "TextureAtlas":
        return TextureAtlas(self.width, self.height, self.pixels, object_id)


def save_atlas(atlas: TextureAtlas, path: str | Path) -> None:
    Image.fromarray(atlas.pixels, mode="RGBA").save(Path(path), format="PNG")


def load_atlas(path: str | Path, object_id: str = "") -> TextureAtlas:
    path = Path(path)
    try:
        with Image.open(path) as im:
            rgba = np.asarray(im.convert("RGBA"), dtype=np.uint8)
    except OSError as e:
        raise MalformedFile(f"cannot read atlas {path}: {e}") from e
    h, w = rgba.shape[:2]
    return TextureAtlas(w, h, rgba, object_id)
