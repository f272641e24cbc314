"""Scene manipulation: move, rotate, scale, remove, clone."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidOp, UnknownObject
from ..geometry import OrientedBox, TextureAtlas, wrap_angle
from ..project import SceneProject
from .fit import fit_object

MOVE = "move"
ROTATE = "rotate"
SCALE = "scale"
REMOVE = "remove"
CLONE = "clone"
KINDS = (MOVE, ROTATE, SCALE, REMOVE, CLONE)


@dataclass(frozen=True)
class ManipulationOp:
    kind: str
    target: str
    delta: tuple = ()
    yaw_delta: float = 0.0
    factor: float = 1.0
    clone_box: OrientedBox | None = None
    clone_id: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidOp(f"unknown op kind {self.kind!r}")
        if not self.target:
            raise InvalidOp("op needs a target object id")
        if self.kind == MOVE and len(self.delta) != 3:
            raise InvalidOp("move needs a 3-vector delta")
        if self.kind == SCALE and not self.factor > 0.0:
            raise InvalidOp(f"scale factor must be positive, got {self.factor}")
        if self.kind == CLONE and self.clone_box is None:
            raise InvalidOp("clone needs a destination box")

    def to_doc(self) -> dict:
        doc = {"op": self.kind, "id": self.target}
        if self.kind == MOVE:
            doc["delta"] = list(self.delta)
        elif self.kind == ROTATE:
            doc["yaw_delta"] = self.yaw_delta
        elif self.kind == SCALE:
            doc["factor"] = self.factor
        elif self.kind == CLONE:
            b = self.clone_box
            doc["box"] = {
                "center": list(b.center),
                "half_extents": list(b.half_extents),
                "yaw": b.yaw,
                "category": b.category,
            }
            if self.clone_id:
                doc["clone_id"] = self.clone_id
        return doc

    @classmethod
    def from_doc(cls, doc: dict) -> "ManipulationOp":
        try:
            kind = doc["op"]
            target = doc["id"]
            if kind == MOVE:
                return cls(MOVE, target, delta=tuple(float(v) for v in doc["delta"]))
            if kind == ROTATE:
                return cls(ROTATE, target, yaw_delta=float(doc["yaw_delta"]))
            if kind == SCALE:
                return cls(SCALE, target, factor=float(doc["factor"]))
            if kind == REMOVE:
                return cls(REMOVE, target)
            if kind == CLONE:
                b = doc["box"]
                box = OrientedBox(
                    tuple(b["center"]),
                    tuple(b["half_extents"]),
                    float(b.get("yaw", 0.0)),
                    b.get("category", ""),
                )
                return cls(CLONE, target, clone_box=box, clone_id=doc.get("clone_id"))
            raise InvalidOp(f"unknown op kind {kind!r}")
        except InvalidOp:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidOp(f"malformed op document: {exc}") from exc


def _q6(values) -> tuple:
    # box fields are quantized to the serialization grid, so an op followed
    # by its inverse restores the record bit for bit
    arr = np.atleast_1d(np.asarray(values, dtype=np.float64))
    return tuple(float(round(v, 6)) for v in arr)


def _quantized(box: OrientedBox, box_id: str) -> OrientedBox:
    return OrientedBox(
        center=_q6(box.center),
        half_extents=_q6(box.half_extents),
        yaw=_q6(box.yaw)[0],
        category=box.category,
        box_id=box_id,
    )


def _unique_clone_id(scene: SceneProject, base: str) -> str:
    if scene.get(base) is None:
        return base
    n = 2
    while scene.get(f"{base}-{n}") is not None:
        n += 1
    return f"{base}-{n}"


def apply_op(scene: SceneProject, op: ManipulationOp) -> SceneProject:
    """Apply one op, touching only the target's record.

    Every other object's serialized bytes are unchanged; placement changes
    re-run the fit so the mesh keeps filling its box.
    """
    rec = scene.get(op.target)
    if rec is None:
        raise UnknownObject(f"no object {op.target!r}")
    box = rec.box

    if op.kind == MOVE:
        new_box = OrientedBox(
            np.asarray(box.center) + np.asarray(op.delta), box.half_extents,
            box.yaw, box.category, box.box_id,
        )
    elif op.kind == ROTATE:
        new_box = OrientedBox(
            box.center, box.half_extents,
            wrap_angle(box.yaw + op.yaw_delta), box.category, box.box_id,
        )
    elif op.kind == SCALE:
        new_box = OrientedBox(
            box.center, np.asarray(box.half_extents) * op.factor,
            box.yaw, box.category, box.box_id,
        )
    elif op.kind == REMOVE:
        return scene.with_objects([o for o in scene.objects if o.object_id != op.target])
    elif op.kind == CLONE:
        clone_id = _unique_clone_id(scene, op.clone_id or f"{op.target}-copy")
        if op.clone_id and scene.get(op.clone_id) is not None:
            raise InvalidOp(f"clone id {op.clone_id!r} already exists")
        dest = op.clone_box
        if not dest.category:
            dest = OrientedBox(dest.center, dest.half_extents, dest.yaw, box.category)
        dest = _quantized(dest, clone_id)
        clone = rec.__class__(
            object_id=clone_id,
            mesh=rec.mesh,                       # shared: one file on disk
            mesh_name=rec.mesh_name,
            atlas=TextureAtlas(
                rec.atlas.width, rec.atlas.height,
                rec.atlas.pixels.copy(), object_id=clone_id,
            ),
            atlas_name=f"atlases/{clone_id}.png",
            box=dest,
            transform=fit_object(rec.mesh, dest, rec.canonical_yaw_offset),
            canonical_yaw_offset=rec.canonical_yaw_offset,
        )
        return scene.with_objects([*scene.objects, clone])
    else:  # unreachable, __post_init__ rejects unknown kinds
        raise InvalidOp(f"unknown op kind {op.kind!r}")

    new_box = _quantized(new_box, box.box_id)
    updated = rec.with_placement(new_box, fit_object(rec.mesh, new_box, rec.canonical_yaw_offset))
    return scene.with_objects(
        [updated if o.object_id == op.target else o for o in scene.objects]
    )
