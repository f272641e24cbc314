"""Rigid-plus-uniform-scale transforms.

Conventions (used everywhere in roomforge): units are meters, the world is
right-handed with +Y up, yaw rotates about +Y. Rotation order is
yaw-pitch-roll, i.e. R = Ry(yaw) @ Rx(pitch) @ Rz(roll), and a transform maps
a point v to scale * R @ v + translation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi


def wrap_angle(a: float) -> float:
    """Normalize an angle to (-pi, pi]."""
    w = a - TWO_PI * math.ceil((a - math.pi) / TWO_PI)
    # ceil rounding at the exact boundary can land on -pi
    if w <= -math.pi:
        w += TWO_PI
    return w


def yaw_matrix(yaw: float) -> np.ndarray:
    c, s = math.cos(yaw), math.sin(yaw)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def ypr_matrix(yaw: float, pitch: float, roll: float) -> np.ndarray:
    """Rotation matrix for R = Ry(yaw) @ Rx(pitch) @ Rz(roll)."""
    cy, sy = math.cos(yaw), math.sin(yaw)
    cp, sp = math.cos(pitch), math.sin(pitch)
    cr, sr = math.cos(roll), math.sin(roll)
    return np.array(
        [
            [cy * cr + sy * sp * sr, -cy * sr + sy * sp * cr, sy * cp],
            [cp * sr, cp * cr, -sp],
            [-sy * cr + cy * sp * sr, sy * sr + cy * sp * cr, cy * cp],
        ]
    )


def matrix_to_ypr(r: np.ndarray) -> tuple[float, float, float]:
    """Invert ypr_matrix. At gimbal lock (|pitch| = pi/2) roll is set to 0."""
    sp = -float(r[1, 2])
    sp = min(1.0, max(-1.0, sp))
    pitch = math.asin(sp)
    if abs(sp) < 1.0 - 1e-9:
        yaw = math.atan2(float(r[0, 2]), float(r[2, 2]))
        roll = math.atan2(float(r[1, 0]), float(r[1, 1]))
    elif sp > 0.0:  # pitch = +pi/2: only yaw - roll is determined
        yaw = math.atan2(float(r[0, 1]), float(r[0, 0]))
        roll = 0.0
    else:  # pitch = -pi/2: only yaw + roll is determined
        yaw = math.atan2(-float(r[0, 1]), float(r[0, 0]))
        roll = 0.0
    return wrap_angle(yaw), wrap_angle(pitch), wrap_angle(roll)


@dataclass(frozen=True)
class Transform:
    """Similarity transform: uniform scale, yaw-pitch-roll rotation, translation.

    Angles are normalized to (-pi, pi] at construction; uniform_scale must be
    strictly positive.
    """

    translation: tuple[float, float, float] = (0.0, 0.0, 0.0)
    yaw_pitch_roll: tuple[float, float, float] = (0.0, 0.0, 0.0)
    uniform_scale: float = 1.0

    def __post_init__(self):
        if not (self.uniform_scale > 0.0):
            raise ValueError(f"uniform_scale must be > 0, got {self.uniform_scale}")
        t = tuple(float(v) for v in self.translation)
        ypr = tuple(wrap_angle(float(a)) for a in self.yaw_pitch_roll)
        object.__setattr__(self, "translation", t)
        object.__setattr__(self, "yaw_pitch_roll", ypr)

    @property
    def rotation(self) -> np.ndarray:
        return ypr_matrix(*self.yaw_pitch_roll)

    def apply(self, points: np.ndarray) -> np.ndarray:
        """Transform an (N, 3) array of points."""
        pts = np.asarray(points, dtype=np.float64)
        return self.uniform_scale * pts @ self.rotation.T + np.asarray(self.translation)

    def apply_direction(self, dirs: np.ndarray) -> np.ndarray:
        """Rotate direction vectors (no scale, no translation, no renorm)."""
        return np.asarray(dirs, dtype=np.float64) @ self.rotation.T

    def compose(self, other: "Transform") -> "Transform":
        """Return self applied after other: the transform applying `other` first, then `self`."""
        r = self.rotation @ other.rotation
        s = self.uniform_scale * other.uniform_scale
        t = self.apply(np.asarray(other.translation)[None, :])[0]
        return Transform(tuple(t), matrix_to_ypr(r), s)

    @staticmethod
    def identity() -> "Transform":
        return Transform()
