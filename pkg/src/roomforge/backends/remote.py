"""HTTP transport to real synthesizer and chat services.

Wire format for texture synthesis: POST {endpoint}/synthesize with JSON
{prompt, width, height, seed, depth_png_b64, depth_near, depth_far,
partial_png_b64, mask_png_b64, reference_png_b64: [..]} and a 200 JSON
{image_png_b64} reply. All images travel as base64 PNG, RGBA8 except the
16-bit grayscale depth. The chat protocol is POST {endpoint}/chat with
{system, user} -> {text}.
"""

from __future__ import annotations

import threading

import numpy as np
import requests

from ..errors import BackendUnavailable, DimensionMismatch, ProtocolError, Timeout
from ..imgio import (
    b64decode_png,
    b64encode_png,
    gray16_png_bytes,
    rgba_from_png_bytes,
    rgba_png_bytes,
)
from .contracts import SynthesisRequest

DEFAULT_TIMEOUT_S = 120.0
DEFAULT_MAX_IN_FLIGHT = 2


def _mask_png(mask: np.ndarray) -> bytes:
    rgba = np.empty((*mask.shape, 4), dtype=np.uint8)
    rgba[..., :3] = np.where(mask[..., None], 255, 0)
    rgba[..., 3] = 255
    return rgba_png_bytes(rgba)


def _post(url: str, body: dict, timeout: float, api_key: str | None) -> dict:
    headers = {"Authorization": f"Bearer {api_key}"} if api_key else None
    try:
        resp = requests.post(url, json=body, timeout=timeout, headers=headers)
    except requests.exceptions.ConnectionError as exc:
        # ConnectTimeout lands here too: an unreachable host is unavailable,
        # not merely slow
        raise BackendUnavailable(f"{url}: {exc}") from exc
    except requests.exceptions.Timeout as exc:
        raise Timeout(f"{url}: no reply within {timeout}s") from exc
    if resp.status_code != 200:
        raise ProtocolError(f"{url}: HTTP {resp.status_code}: {resp.text[:200]}")
    try:
        return resp.json()
    except ValueError as exc:
        raise ProtocolError(f"{url}: non-JSON reply") from exc


class RemoteBackend:
    """Client for a depth-conditioned synthesis service."""

    def __init__(
        self,
        endpoint: str,
        timeout: float = DEFAULT_TIMEOUT_S,
        api_key: str | None = None,
        max_in_flight: int = DEFAULT_MAX_IN_FLIGHT,
    ):
        if not endpoint.startswith(("http://", "https://")):
            raise ValueError(f"endpoint must be an http(s) URL, got {endpoint!r}")
        self.endpoint = endpoint.rstrip("/")
        self.timeout = timeout
        self.api_key = api_key
        self._gate = threading.BoundedSemaphore(max_in_flight)

    @property
    def backend_id(self) -> str:
        return f"remote:{self.endpoint}"

    def run(self, request: SynthesisRequest) -> np.ndarray:
        body = {
            "prompt": request.prompt,
            "width": request.width,
            "height": request.height,
            "seed": request.seed,
            "depth_png_b64": b64encode_png(gray16_png_bytes(request.depth.codes)),
            "depth_near": request.depth.near,
            "depth_far": request.depth.far,
            "partial_png_b64": b64encode_png(rgba_png_bytes(request.partial_image)),
            "mask_png_b64": b64encode_png(_mask_png(request.mask)),
            "reference_png_b64": [
                b64encode_png(rgba_png_bytes(ref)) for ref in request.reference_images
            ],
        }
        with self._gate:
            reply = _post(f"{self.endpoint}/synthesize", body, self.timeout, self.api_key)
        if "image_png_b64" not in reply:
            raise ProtocolError(f"{self.endpoint}: reply lacks image_png_b64")
        image = rgba_from_png_bytes(b64decode_png(reply["image_png_b64"]))
        if image.shape != (request.height, request.width, 4):
            raise DimensionMismatch(
                f"{self.endpoint} returned {image.shape[1]}x{image.shape[0]}, "
                f"requested {request.width}x{request.height}"
            )
        return image


class RemoteLlmClient:
    """Client for a chat-completions style layout service."""

    def __init__(self, endpoint: str, timeout: float = DEFAULT_TIMEOUT_S, api_key: str | None = None):
        if not endpoint.startswith(("http://", "https://")):
            raise ValueError(f"endpoint must be an http(s) URL, got {endpoint!r}")
        self.endpoint = endpoint.rstrip("/")
        self.timeout = timeout
        self.api_key = api_key

    def chat(self, system: str, user: str) -> str:
        reply = _post(
            f"{self.endpoint}/chat", {"system": system, "user": user}, self.timeout, self.api_key
        )
        if "text" not in reply or not isinstance(reply["text"], str):
            raise ProtocolError(f"{self.endpoint}: reply lacks text")
        return reply["text"]
