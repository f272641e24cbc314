"""Deterministic offline synthesizer.

Stands in for a depth-conditioned image model so the whole pipeline runs
without network access. The output is a blocky seeded pattern whose palette
is keyed by the prompt, brightened toward the camera (near = bright), and
pulled toward the mean color of any reference images so that reference
conditioning has a measurable effect.
"""

from __future__ import annotations

import hashlib

import numpy as np

from .contracts import SynthesisRequest

REFERENCE_PULL = 0.55
BRIGHTNESS_FLOOR = 0.45
PALETTE_SIZE = 6


def _pattern_rng(prompt: str, seed: int) -> np.random.Generator:
    digest = hashlib.sha256(prompt.encode("utf-8")).digest()
    ss = np.random.SeedSequence(
        [seed & 0xFFFFFFFFFFFFFFFF, int.from_bytes(digest[:8], "little")]
    )
    return np.random.Generator(np.random.PCG64(ss))


class ProceduralBackend:
    backend_id = "procedural"

    def __init__(self, cell_px: int = 24):
        if cell_px < 1:
            raise ValueError("cell size must be positive")
        self.cell_px = cell_px

    def run(self, request: SynthesisRequest) -> np.ndarray:
        rng = _pattern_rng(request.prompt, request.seed)
        h, w = request.height, request.width

        palette = rng.integers(32, 224, size=(PALETTE_SIZE, 3)).astype(np.float64)
        gh = -(-h // self.cell_px)
        gw = -(-w // self.cell_px)
        grid = rng.integers(0, PALETTE_SIZE, size=(gh, gw))
        cells = np.repeat(np.repeat(grid, self.cell_px, 0), self.cell_px, 1)[:h, :w]
        color = palette[cells]

        if request.reference_images:
            ref_mean = np.mean(
                [ref[..., :3].astype(np.float64) for ref in request.reference_images],
                axis=(0, 1, 2),
            )
            color = (1.0 - REFERENCE_PULL) * color + REFERENCE_PULL * ref_mean

        depth = request.depth.decode()
        near, far = request.depth.near, request.depth.far
        nearness = 1.0 - np.clip((depth - near) / (far - near), 0.0, 1.0)
        color *= (BRIGHTNESS_FLOOR + (1.0 - BRIGHTNESS_FLOOR) * nearness)[..., None]

        out = request.partial_image.copy()
        filled = np.empty((h, w, 4), dtype=np.uint8)
        filled[..., :3] = np.clip(np.rint(color), 0, 255).astype(np.uint8)
        filled[..., 3] = 255
        out[request.mask] = filled[request.mask]
        return out
