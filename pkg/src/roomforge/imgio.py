"""PNG and base64 codecs shared by backends, pipeline, and service."""

from __future__ import annotations

import base64
import io

import numpy as np
from PIL import Image

from .errors import ProtocolError


def rgba_png_bytes(image: np.ndarray) -> bytes:
    image = np.asarray(image, dtype=np.uint8)
    if image.ndim != 3 or image.shape[2] != 4:
        raise ValueError(f"expected (H, W, 4) RGBA, got {image.shape}")
    buf = io.BytesIO()
    Image.fromarray(image, mode="RGBA").save(buf, format="PNG")
    return buf.getvalue()


def rgba_from_png_bytes(data: bytes) -> np.ndarray:
    try:
        with Image.open(io.BytesIO(data)) as im:
            return np.asarray(im.convert("RGBA"), dtype=np.uint8)
    except Exception as exc:
        raise ProtocolError(f"undecodable RGBA png: {exc}") from exc


def gray16_png_bytes(codes: np.ndarray) -> bytes:
    codes = np.asarray(codes, dtype=np.uint16)
    buf = io.BytesIO()
    Image.fromarray(codes).save(buf, format="PNG")  # uint16 -> I;16
    return buf.getvalue()


def gray16_from_png_bytes(data: bytes) -> np.ndarray:
    try:
        with Image.open(io.BytesIO(data)) as im:
            return np.asarray(im, dtype=np.uint16)
    except Exception as exc:
        raise ProtocolError(f"undecodable 16-bit png: {exc}") from exc


def b64encode_png(data: bytes) -> str:
    return base64.b64encode(data).decode("ascii")


def b64decode_png(text: str) -> bytes:
    try:
        return base64.b64decode(text, validate=True)
    except Exception as exc:
        raise ProtocolError(f"invalid base64 payload: {exc}") from exc
