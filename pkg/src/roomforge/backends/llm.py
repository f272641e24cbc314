"""Prompt construction and reply parsing for the layout chat service."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Protocol

import numpy as np

from ..errors import InvalidBox, InvalidRange, NoJsonFound
from ..geometry import Aabb, OrientedBox
from ..project import canonical_json

CLAMP_TOL_M = 0.01

LAYOUT_SYSTEM_PROMPT = (
    "You are an interior layout planner. You place furniture bounding boxes "
    "inside rectangular rooms and reply only with JSON."
)


class LlmClient(Protocol):
    def chat(self, system: str, user: str) -> str: ...


@dataclass(frozen=True)
class LayoutRequest:
    room_type: str
    room: Aabb
    categories: tuple
    exemplars: tuple

    def __post_init__(self):
        cats = tuple((str(name), int(count)) for name, count in dict(self.categories).items())
        if not cats:
            raise InvalidRange("at least one required category")
        if any(count < 1 for _, count in cats):
            raise InvalidRange("category counts must be >= 1")
        exemplars = tuple(tuple(boxes) for boxes in self.exemplars)
        if not exemplars or any(not boxes for boxes in exemplars):
            raise InvalidRange("at least one non-empty exemplar layout")
        object.__setattr__(self, "categories", cats)
        object.__setattr__(self, "exemplars", exemplars)


def _box_doc(box: OrientedBox) -> dict:
    return {
        "category": box.category,
        "center": list(box.center),
        "half_extents": list(box.half_extents),
        "yaw": float(box.yaw),
    }


def build_layout_prompt(request: LayoutRequest) -> str:
    """Deterministic user prompt: instruction, exemplars, constraints, format."""
    lines = [
        f"Place furniture inside a {request.room_type}.",
        "",
        "Example layouts from professionally designed rooms:",
    ]
    for i, boxes in enumerate(request.exemplars, start=1):
        lines.append(f"Example {i}:")
        lines.append(canonical_json([_box_doc(b) for b in boxes]))
    room = request.room
    lines += [
        "",
        "Room bounds in meters: "
        f"x in [{room.min[0]:.3f}, {room.max[0]:.3f}], "
        f"y in [{room.min[1]:.3f}, {room.max[1]:.3f}], "
        f"z in [{room.min[2]:.3f}, {room.max[2]:.3f}]. The floor is y={room.min[1]:.3f}.",
        "Required objects: "
        + ", ".join(f"{count} {name}" for name, count in request.categories)
        + ".",
        "",
        "Reply with exactly one JSON array. Each element is an object "
        '{"category": <name as listed above>, "center": [x, y, z], '
        '"half_extents": [hx, hy, hz], "yaw": <radians about vertical>}. '
        "Boxes must lie fully inside the room, must not overlap each other, "
        "and should rest on the floor (center y = half extent y). No prose.",
    ]
    return "\n".join(lines)


def _require(cond, index, reason):
    if not cond:
        raise InvalidBox(index, reason)


def _first_json_array(text: str):
    decoder = json.JSONDecoder()
    for pos, ch in enumerate(text):
        if ch != "[":
            continue
        try:
            value, _ = decoder.raw_decode(text, pos)
        except json.JSONDecodeError:
            continue
        if isinstance(value, list):
            return value
    raise NoJsonFound("no JSON array in reply")


def _clamp_into_room(box: OrientedBox, room: Aabb, index: int) -> OrientedBox:
    """Shift a box fully inside the room if it overhangs by at most 1 cm."""
    center = np.array(box.center, dtype=np.float64)
    fp = box.footprint_corners()
    spans = [
        (0, fp[:, 0].min(), fp[:, 0].max(), room.min[0], room.max[0]),
        (2, fp[:, 1].min(), fp[:, 1].max(), room.min[2], room.max[2]),
        (1, center[1] - box.half_extents[1], center[1] + box.half_extents[1], room.min[1], room.max[1]),
    ]
    for axis, lo, hi, room_lo, room_hi in spans:
        under = room_lo - lo
        over = hi - room_hi
        _require(not (under > 0.0 and over > 0.0), index, f"larger than the room on axis {axis}")
        _require(under <= CLAMP_TOL_M and over <= CLAMP_TOL_M, index, f"outside the room on axis {axis}")
        if under > 0.0:
            center[axis] += under
        elif over > 0.0:
            center[axis] -= over
    if np.array_equal(center, box.center):
        return box
    return OrientedBox(center, box.half_extents, box.yaw, box.category, box.box_id)


def parse_layout_response(text: str, room: Aabb) -> list[OrientedBox]:
    """Extract the first JSON array of boxes from the reply, prose allowed."""
    items = _first_json_array(text)
    boxes = []
    for i, item in enumerate(items):
        _require(isinstance(item, dict), i, "not an object")
        _require(isinstance(item.get("category"), str) and item["category"], i, "missing category")
        for key in ("center", "half_extents"):
            v = item.get(key)
            _require(
                isinstance(v, list) and len(v) == 3
                and all(isinstance(c, (int, float)) and math.isfinite(c) for c in v),
                i, f"bad {key}",
            )
        _require(all(c > 0.0 for c in item["half_extents"]), i, "non-positive half extent")
        yaw = item.get("yaw", 0.0)
        _require(isinstance(yaw, (int, float)) and math.isfinite(yaw), i, "bad yaw")
        box = OrientedBox(item["center"], item["half_extents"], float(yaw), item["category"])
        boxes.append(_clamp_into_room(box, room, i))
    return boxes
