"""In-process denoising backend running the masked sampler in pixel space."""

from __future__ import annotations

import numpy as np

from ..diffusion import NoisePredictor, NoiseSchedule, PointMassPredictor, make_schedule, sample
from .contracts import SynthesisRequest


def to_unit(pixels: np.ndarray) -> np.ndarray:
    """uint8 [0, 255] -> float [-1, 1]."""
    return pixels.astype(np.float64) / 127.5 - 1.0


def from_unit(z: np.ndarray) -> np.ndarray:
    return np.clip(np.rint((z + 1.0) * 127.5), 0, 255).astype(np.uint8)


class ToyDdpmBackend:
    """Masked reverse-chain sampling over RGB channels.

    Default predictor is the point-mass oracle for a mid-gray image, which
    makes the backend converge somewhere sensible without any training.
    """

    backend_id = "toy-ddpm"

    def __init__(self, schedule: NoiseSchedule | None = None, predictor: NoisePredictor | None = None):
        self.schedule = schedule if schedule is not None else make_schedule()
        self.predictor = (
            predictor
            if predictor is not None
            else PointMassPredictor(np.zeros(()), self.schedule)
        )

    def run(self, request: SynthesisRequest) -> np.ndarray:
        h, w = request.height, request.width
        rng = np.random.default_rng(request.seed)
        mask3 = np.repeat(request.mask[..., None].astype(np.uint8), 3, axis=2)
        known = to_unit(request.partial_image[..., :3])
        z0 = sample(
            self.predictor, self.schedule, (h, w, 3), rng, mask=mask3, known_z0=known
        )
        out = request.partial_image.copy()
        out[..., :3][request.mask] = from_unit(z0)[request.mask]
        out[..., 3][request.mask] = 255
        return out
