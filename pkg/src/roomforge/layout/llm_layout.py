"""Requesting a placement layout from the chat service, with one retry."""

from __future__ import annotations

import json
from importlib import resources

from ..backends import LAYOUT_SYSTEM_PROMPT, LayoutRequest, LlmClient, build_layout_prompt, parse_layout_response
from ..errors import InvalidBox, LayoutRejected, NoJsonFound
from ..geometry import Aabb, OrientedBox
from .validate import Layout, validate_boxes


def load_exemplars(room_type: str):
    """Shipped example layouts for in-context prompting, one set per file."""
    out = []
    root = resources.files("roomforge.layout") / "exemplars"
    for entry in sorted(root.iterdir(), key=lambda e: e.name):
        if not entry.name.endswith(".json"):
            continue
        doc = json.loads(entry.read_text())
        if doc["room_type"] != room_type:
            continue
        out.append(
            tuple(
                OrientedBox(
                    tuple(b["center"]), tuple(b["half_extents"]),
                    float(b.get("yaw", 0.0)), b["category"],
                )
                for b in doc["boxes"]
            )
        )
    return tuple(out)


def _shortfalls(boxes, categories) -> list[str]:
    got: dict[str, int] = {}
    for b in boxes:
        got[b.category] = got.get(b.category, 0) + 1
    return [
        f"{name}: wanted {count}, got {got.get(name, 0)}"
        for name, count in categories
        if got.get(name, 0) < count
    ]


def _attempt(text: str, request: LayoutRequest) -> tuple:
    """Returns (boxes, problems); boxes is None when parsing itself failed."""
    try:
        boxes = parse_layout_response(text, request.room)
    except NoJsonFound as exc:
        return None, [str(exc)]
    except InvalidBox as exc:
        return None, [f"box {exc.index}: {exc.reason}"]
    problems = [str(v) for v in validate_boxes(boxes, request.room)]
    problems += ["missing " + s for s in _shortfalls(boxes, request.categories)]
    return boxes, problems


def request_layout(client: LlmClient, request: LayoutRequest) -> Layout:
    """Prompt, parse, validate; retry once with the violations spelled out."""
    prompt = build_layout_prompt(request)
    boxes, problems = _attempt(client.chat(LAYOUT_SYSTEM_PROMPT, prompt), request)
    if not problems:
        return Layout(request.room, boxes)

    retry_prompt = (
        prompt
        + "\n\nYour previous layout was rejected for these reasons:\n- "
        + "\n- ".join(problems)
        + "\nProduce a corrected JSON array."
    )
    boxes, problems = _attempt(client.chat(LAYOUT_SYSTEM_PROMPT, retry_prompt), request)
    if not problems:
        return Layout(request.room, boxes)
    raise LayoutRejected(problems)
