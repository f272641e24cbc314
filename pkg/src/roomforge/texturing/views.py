"""Camera schedules orbiting an object's bounding sphere."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import InvalidRange
from ..geometry import Camera, Transform, TriangleMesh

DEFAULT_AZIMUTHS = 8
DEFAULT_ELEVATIONS = (0.0, math.radians(30.0))
DEFAULT_DISTANCE_FACTOR = 1.5


@dataclass(frozen=True)
class ViewSchedule:
    """Ordered cameras; index 0 is the designated front view."""

    cameras: tuple
    front_index: int = 0

    def __post_init__(self):
        if not self.cameras:
            raise InvalidRange("a view schedule needs at least one camera")
        object.__setattr__(self, "cameras", tuple(self.cameras))

    def __len__(self) -> int:
        return len(self.cameras)

    def __iter__(self):
        return iter(self.cameras)


def _alternating_azimuths(n: int) -> list[float]:
    """0, +step, -step, +2 step, ... covering n distinct angles."""
    step = 2.0 * math.pi / n
    out = [0.0]
    k = 1
    while len(out) < n:
        out.append(k * step)
        if len(out) < n and k * step < math.pi - 1e-12:
            out.append(-k * step)
        k += 1
    return out


def schedule_views(
    mesh: TriangleMesh,
    transform: Transform | None = None,
    n_azimuth: int = DEFAULT_AZIMUTHS,
    elevations=DEFAULT_ELEVATIONS,
    distance_factor: float = DEFAULT_DISTANCE_FACTOR,
    include_top: bool = True,
    resolution=(512, 512),
) -> ViewSchedule:
    """Front view first, then alternating left/right sweeps per elevation.

    Azimuth 0 places the camera on the object's -Z side looking toward +Z;
    positive elevation raises it. The optional top view looks straight down.
    Near/far planes bracket the bounding sphere so depth codes spend their
    range on the object.
    """
    if n_azimuth < 1:
        raise InvalidRange(f"need at least one azimuth, got {n_azimuth}")
    if distance_factor <= 1.0:
        raise InvalidRange("camera distance must exceed the bounding sphere")
    center, radius = mesh.bounding_sphere()
    if transform is not None:
        center = transform.apply(center[None, :])[0]
        radius *= transform.uniform_scale
    dist = distance_factor * radius
    near = max(1e-3, 0.5 * (dist - radius))
    far = dist + 2.0 * radius

    def cam(offset, up=(0.0, 1.0, 0.0)):
        return Camera(
            position=center + dist * np.asarray(offset, dtype=np.float64),
            look_at=center,
            up=up,
            resolution=resolution,
            near=near,
            far=far,
        )

    cameras = []
    for e in elevations:
        ce, se = math.cos(e), math.sin(e)
        for a in _alternating_azimuths(n_azimuth):
            cameras.append(cam((math.sin(a) * ce, se, -math.cos(a) * ce)))
    if include_top:
        cameras.append(cam((0.0, 1.0, 0.0), up=(0.0, 0.0, -1.0)))
    return ViewSchedule(cameras=tuple(cameras))
