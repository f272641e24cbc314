"""Per-pixel progression states and per-texel paint bookkeeping."""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from ..geometry import TextureAtlas
from ..raster import FrameBuffers, texel_coords

COS_UPDATE_MARGIN = 0.1


class State(IntEnum):
    BACKGROUND = 0
    GENERATE = 1
    UPDATE = 2
    KEEP = 3


@dataclass(frozen=True)
class Trimap:
    """Pixel partition into background/generate/update/keep."""

    states: np.ndarray

    def __post_init__(self):
        states = np.asarray(self.states, dtype=np.uint8)
        if states.max(initial=0) > State.KEEP:
            raise ValueError("unknown trimap state")
        states.flags.writeable = False
        object.__setattr__(self, "states", states)

    def count(self, state: State) -> int:
        return int((self.states == state).sum())


@dataclass
class CoverageBuffer:
    """Which atlas texels are painted, and at what best view angle.

    best_cosine is 0 exactly where unpainted; it never decreases.
    """

    painted: np.ndarray
    best_cosine: np.ndarray

    @classmethod
    def empty(cls, atlas_height: int, atlas_width: int) -> "CoverageBuffer":
        shape = (atlas_height, atlas_width)
        return cls(np.zeros(shape, dtype=bool), np.zeros(shape, dtype=np.float32))

    @classmethod
    def from_atlas(cls, atlas: TextureAtlas) -> "CoverageBuffer":
        # resumed atlases carry no angle history; saturate so painted texels
        # are never overwritten
        painted = atlas.painted.copy()
        return cls(painted, np.where(painted, 1.0, 0.0).astype(np.float32))


def build_trimap(
    frame: FrameBuffers,
    coverage: CoverageBuffer,
    cos_update_margin: float = COS_UPDATE_MARGIN,
) -> Trimap:
    """Covered pixels become GENERATE (texel unpainted), UPDATE (markedly
    better view angle than any previous paint), or KEEP."""
    states = np.full(frame.depth.shape, State.BACKGROUND, dtype=np.uint8)
    covered = frame.covered
    if covered.any():
        ah, aw = coverage.painted.shape
        ys, xs = np.nonzero(covered)
        tx, ty = texel_coords(frame.uv[ys, xs, 0], frame.uv[ys, xs, 1], aw, ah)
        painted = coverage.painted[ty, tx]
        better = frame.view_cosine[ys, xs] > coverage.best_cosine[ty, tx] + cos_update_margin
        states[ys, xs] = np.where(
            ~painted, State.GENERATE, np.where(better, State.UPDATE, State.KEEP)
        )
    return Trimap(states)


def trimap_to_mask(trimap: Trimap) -> np.ndarray:
    """1 where the synthesizer must fill (GENERATE or UPDATE), else 0."""
    s = trimap.states
    return ((s == State.GENERATE) | (s == State.UPDATE)).astype(np.uint8)
