from .fit import fit_object
from .llm_layout import load_exemplars, request_layout
from .ops import CLONE, KINDS, MOVE, REMOVE, ROTATE, SCALE, ManipulationOp, apply_op
from .validate import (
    PENETRATION_TOL_M,
    ROOM_TOL_M,
    Layout,
    Violation,
    box_penetration,
    room_overhang,
    validate_boxes,
    validate_scene,
)

__all__ = [
    "CLONE",
    "KINDS",
    "MOVE",
    "PENETRATION_TOL_M",
    "REMOVE",
    "ROOM_TOL_M",
    "ROTATE",
    "SCALE",
    "Layout",
    "ManipulationOp",
    "Violation",
    "apply_op",
    "box_penetration",
    "fit_object",
    "load_exemplars",
    "request_layout",
    "room_overhang",
    "validate_boxes",
    "validate_scene",
]
