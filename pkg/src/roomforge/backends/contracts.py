"""Texture-synthesizer contract and the engine-side blending guarantee."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Protocol, runtime_checkable

import numpy as np

from ..diffusion.sampler import validate_mask
from ..errors import DimensionMismatch, ShapeMismatch
from ..raster import DepthImage


@dataclass(frozen=True)
class SynthesisRequest:
    """Everything a synthesizer needs for one view.

    partial_image is authoritative where mask = 0; reference_images are
    ordered with the global scene reference first, then object views.
    """

    prompt: str
    width: int
    height: int
    depth: DepthImage
    partial_image: np.ndarray
    mask: np.ndarray
    reference_images: tuple = ()
    seed: int = 0

    def __post_init__(self):
        hw = (self.height, self.width)
        partial = np.ascontiguousarray(self.partial_image, dtype=np.uint8)
        if partial.shape != (*hw, 4):
            raise ShapeMismatch(f"partial image {partial.shape} != {(*hw, 4)}")
        if self.depth.codes.shape != hw:
            raise ShapeMismatch(f"depth {self.depth.codes.shape} != {hw}")
        mask = validate_mask(self.mask, hw)
        refs = []
        for i, ref in enumerate(self.reference_images):
            ref = np.ascontiguousarray(ref, dtype=np.uint8)
            if ref.shape != (*hw, 4):
                raise ShapeMismatch(f"reference {i} shape {ref.shape} != {(*hw, 4)}")
            ref.flags.writeable = False
            refs.append(ref)
        partial.flags.writeable = False
        mask.flags.writeable = False
        object.__setattr__(self, "partial_image", partial)
        object.__setattr__(self, "mask", mask)
        object.__setattr__(self, "reference_images", tuple(refs))


@dataclass(frozen=True)
class SynthesisResponse:
    image: np.ndarray
    backend_id: str
    elapsed_ms: float = field(compare=False, default=0.0)


@runtime_checkable
class TextureSynthesizer(Protocol):
    backend_id: str

    def run(self, request: SynthesisRequest) -> np.ndarray: ...


def synthesize(backend: TextureSynthesizer, request: SynthesisRequest) -> SynthesisResponse:
    """Run a backend and enforce the unmasked-pixel guarantee.

    Whatever the backend returns, mask=0 pixels of the response are the
    request's partial image, bit for bit. Real services drift in "known"
    pixels, so the guarantee is enforced here instead of trusted.
    """
    t0 = time.perf_counter()
    image = np.asarray(backend.run(request))
    if image.shape != (request.height, request.width, 4) or image.dtype != np.uint8:
        raise DimensionMismatch(
            f"backend {backend.backend_id} returned {image.dtype} {image.shape}, "
            f"wanted uint8 {(request.height, request.width, 4)}"
        )
    blended = np.where(request.mask[..., None], image, request.partial_image)
    return SynthesisResponse(
        image=blended,
        backend_id=backend.backend_id,
        elapsed_ms=(time.perf_counter() - t0) * 1000.0,
    )
