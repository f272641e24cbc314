"""Axis-aligned and yaw-oriented boxes."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .transforms import wrap_angle, yaw_matrix


@dataclass(frozen=True)
class Aabb:
    """Axis-aligned box, min/max corners in meters."""

    min: tuple[float, float, float]
    max: tuple[float, float, float]

    def __post_init__(self):
        object.__setattr__(self, "min", tuple(float(v) for v in self.min))
        object.__setattr__(self, "max", tuple(float(v) for v in self.max))

    @property
    def extents(self) -> np.ndarray:
        return np.asarray(self.max) - np.asarray(self.min)

    @property
    def center(self) -> np.ndarray:
        return (np.asarray(self.max) + np.asarray(self.min)) * 0.5

    def contains_point(self, p, tol: float = 0.0) -> bool:
        lo = np.asarray(self.min) - tol
        hi = np.asarray(self.max) + tol
        q = np.asarray(p)
        return bool(np.all(q >= lo) and np.all(q <= hi))

    @staticmethod
    def of_points(points: np.ndarray) -> "Aabb":
        pts = np.asarray(points, dtype=np.float64)
        return Aabb(tuple(pts.min(axis=0)), tuple(pts.max(axis=0)))


@dataclass(frozen=True)
class OrientedBox:
    """Yaw-rotated placement box prescribing an object's position and size.

    half_extents are along the box's local axes; yaw rotates the box about +Y
    around its center.
    """

    center: tuple[float, float, float]
    half_extents: tuple[float, float, float]
    yaw: float
    category: str
    box_id: str = field(default="")

    def __post_init__(self):
        he = tuple(float(v) for v in self.half_extents)
        if any(h <= 0.0 for h in he):
            raise ValueError(f"half_extents must be strictly positive, got {he}")
        object.__setattr__(self, "center", tuple(float(v) for v in self.center))
        object.__setattr__(self, "half_extents", he)
        object.__setattr__(self, "yaw", wrap_angle(float(self.yaw)))

    def corners(self) -> np.ndarray:
        """All 8 world-space corners, shape (8, 3)."""
        hx, hy, hz = self.half_extents
        signs = np.array(
            [[sx, sy, sz] for sx in (-1, 1) for sy in (-1, 1) for sz in (-1, 1)],
            dtype=np.float64,
        )
        local = signs * np.array([hx, hy, hz])
        return local @ yaw_matrix(self.yaw).T + np.asarray(self.center)

    def footprint_corners(self) -> np.ndarray:
        """The 4 corners of the box footprint in the XZ plane, shape (4, 2)."""
        hx, _, hz = self.half_extents
        c, s = math.cos(self.yaw), math.sin(self.yaw)
        out = []
        for sx, sz in ((-1, -1), (-1, 1), (1, -1), (1, 1)):
            lx, lz = sx * hx, sz * hz
            # rows 0 and 2 of the yaw matrix
            out.append((c * lx + s * lz + self.center[0], -s * lx + c * lz + self.center[2]))
        return np.asarray(out)

    def world_aabb(self) -> Aabb:
        return Aabb.of_points(self.corners())

    @property
    def volume(self) -> float:
        hx, hy, hz = self.half_extents
        return 8.0 * hx * hy * hz
