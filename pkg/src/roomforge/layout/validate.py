"""Layout validation: room containment and pairwise box separation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidRange
from ..geometry import Aabb, OrientedBox

PENETRATION_TOL_M = 0.02
ROOM_TOL_M = 0.01


@dataclass(frozen=True)
class Violation:
    kind: str         # "out_of_room" | "overlap"
    objects: tuple
    amount: float     # meters of overhang or penetration

    def __str__(self):
        names = " and ".join(self.objects)
        if self.kind == "out_of_room":
            return f"{names} sticks {self.amount:.3f} m outside the room"
        return f"{names} interpenetrate by {self.amount:.3f} m"


@dataclass(frozen=True)
class Layout:
    """A room with placement boxes, containment-checked on construction."""

    room: Aabb
    boxes: tuple

    def __post_init__(self):
        object.__setattr__(self, "boxes", tuple(self.boxes))
        bad = [
            (b.category, amt)
            for b in self.boxes
            if (amt := room_overhang(b, self.room)) > ROOM_TOL_M
        ]
        if bad:
            raise InvalidRange(f"boxes outside the room: {bad}")


def room_overhang(box: OrientedBox, room: Aabb) -> float:
    """Largest distance any part of the box pokes out of the room, 0 if inside."""
    fp = box.footprint_corners()
    lo_y = box.center[1] - box.half_extents[1]
    hi_y = box.center[1] + box.half_extents[1]
    overhangs = [
        room.min[0] - fp[:, 0].min(),
        fp[:, 0].max() - room.max[0],
        room.min[2] - fp[:, 1].min(),
        fp[:, 1].max() - room.max[2],
        room.min[1] - lo_y,
        hi_y - room.max[1],
    ]
    return max(0.0, *overhangs)


def _footprint_axes(yaw: float) -> np.ndarray:
    c, s = np.cos(yaw), np.sin(yaw)
    # box-local x and z directions expressed in the XZ plane
    return np.array([[c, -s], [s, c]])


def box_penetration(a: OrientedBox, b: OrientedBox) -> float:
    """Penetration depth of two oriented boxes, 0 when separated.

    Separating-axis test over both boxes' footprint axes, intersected with
    the vertical overlap. Exact for yaw-only boxes.
    """
    ya = (a.center[1] - a.half_extents[1], a.center[1] + a.half_extents[1])
    yb = (b.center[1] - b.half_extents[1], b.center[1] + b.half_extents[1])
    y_overlap = min(ya[1], yb[1]) - max(ya[0], yb[0])
    if y_overlap <= 0.0:
        return 0.0
    fa, fb = a.footprint_corners(), b.footprint_corners()
    depth = np.inf
    for axis in np.vstack([_footprint_axes(a.yaw), _footprint_axes(b.yaw)]):
        pa, pb = fa @ axis, fb @ axis
        overlap = min(pa.max(), pb.max()) - max(pa.min(), pb.min())
        if overlap <= 0.0:
            return 0.0
        depth = min(depth, overlap)
    return float(min(depth, y_overlap))


def validate_boxes(
    boxes,
    room: Aabb,
    penetration_tol: float = PENETRATION_TOL_M,
    room_tol: float = ROOM_TOL_M,
    names=None,
) -> list[Violation]:
    boxes = list(boxes)
    if names is None:
        names = [b.box_id or f"{b.category}[{i}]" for i, b in enumerate(boxes)]
    out = []
    for i, box in enumerate(boxes):
        amt = room_overhang(box, room)
        if amt > room_tol:
            out.append(Violation("out_of_room", (names[i],), amt))
    for i in range(len(boxes)):
        for j in range(i + 1, len(boxes)):
            depth = box_penetration(boxes[i], boxes[j])
            if depth > penetration_tol:
                out.append(Violation("overlap", (names[i], names[j]), depth))
    return out


def validate_scene(scene, penetration_tol: float = PENETRATION_TOL_M) -> list[Violation]:
    """Containment and interpenetration report for a whole project."""
    return validate_boxes(
        [o.box for o in scene.objects],
        scene.room,
        penetration_tol=penetration_tol,
        names=[o.object_id for o in scene.objects],
    )
