"""Perspective cameras and the world-to-pixel mapping used by the rasterizer."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateCamera


@dataclass(frozen=True)
class Camera:
    """Look-at perspective camera.

    vertical_fov is in radians, resolution is (width, height) in pixels, and
    0 < near < far are the clip distances in meters.
    """

    position: tuple[float, float, float]
    look_at: tuple[float, float, float]
    up: tuple[float, float, float] = (0.0, 1.0, 0.0)
    vertical_fov: float = math.radians(60.0)
    resolution: tuple[int, int] = (512, 512)
    near: float = 0.05
    far: float = 100.0

    def __post_init__(self):
        object.__setattr__(self, "position", tuple(float(v) for v in self.position))
        object.__setattr__(self, "look_at", tuple(float(v) for v in self.look_at))
        object.__setattr__(self, "up", tuple(float(v) for v in self.up))
        object.__setattr__(self, "resolution", (int(self.resolution[0]), int(self.resolution[1])))
        self.validate()

    def validate(self) -> None:
        if not (0.0 < self.vertical_fov < math.pi):
            raise DegenerateCamera(f"vertical_fov {self.vertical_fov} outside (0, pi)")
        if not (0.0 < self.near < self.far):
            raise DegenerateCamera(f"need 0 < near < far, got {self.near}, {self.far}")
        w, h = self.resolution
        if w < 1 or h < 1:
            raise DegenerateCamera(f"resolution must be positive, got {self.resolution}")
        fwd = np.asarray(self.look_at) - np.asarray(self.position)
        if np.linalg.norm(fwd) < 1e-12:
            raise DegenerateCamera("look_at coincides with position")
        upv = np.asarray(self.up)
        if np.linalg.norm(upv) < 1e-12:
            raise DegenerateCamera("up vector is zero")
        if np.linalg.norm(np.cross(fwd, upv)) < 1e-9 * np.linalg.norm(fwd) * np.linalg.norm(upv):
            raise DegenerateCamera("look direction parallel to up")

    @property
    def forward(self) -> np.ndarray:
        f = np.asarray(self.look_at) - np.asarray(self.position)
        return f / np.linalg.norm(f)

    def view_matrix(self) -> np.ndarray:
        """4x4 world-to-camera matrix; camera space looks down -Z, +Y up."""
        zc = -self.forward
        xc = np.cross(np.asarray(self.up), zc)
        xc = xc / np.linalg.norm(xc)
        yc = np.cross(zc, xc)
        m = np.eye(4)
        m[0, :3], m[1, :3], m[2, :3] = xc, yc, zc
        m[:3, 3] = -m[:3, :3] @ np.asarray(self.position)
        return m

    def to_camera(self, points: np.ndarray) -> np.ndarray:
        """World points (N, 3) -> camera space (N, 3)."""
        m = self.view_matrix()
        return np.asarray(points) @ m[:3, :3].T + m[:3, 3]

    def project(self, cam_points: np.ndarray) -> np.ndarray:
        """Camera-space points (N, 3) -> pixel coordinates (N, 2), y down.

        Callers must guarantee z < 0 (in front of the camera).
        """
        w, h = self.resolution
        tan_half = math.tan(self.vertical_fov / 2.0)
        aspect = w / h
        p = np.asarray(cam_points, dtype=np.float64)
        inv_z = -1.0 / p[:, 2]
        x_ndc = p[:, 0] * inv_z / (tan_half * aspect)
        y_ndc = p[:, 1] * inv_z / tan_half
        px = (x_ndc + 1.0) * 0.5 * w
        py = (1.0 - y_ndc) * 0.5 * h
        return np.stack([px, py], axis=1)

    def pixel_rays(self) -> np.ndarray:
        """Unit ray direction in camera space per pixel center, shape (H, W, 3)."""
        w, h = self.resolution
        tan_half = math.tan(self.vertical_fov / 2.0)
        aspect = w / h
        xs = (np.arange(w) + 0.5) / w * 2.0 - 1.0
        ys = 1.0 - (np.arange(h) + 0.5) / h * 2.0
        gx, gy = np.meshgrid(xs * tan_half * aspect, ys * tan_half)
        d = np.stack([gx, gy, -np.ones_like(gx)], axis=-1)
        return d / np.linalg.norm(d, axis=-1, keepdims=True)
