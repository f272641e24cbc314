"""Placement fitting, overlap validation, scene ops, layout via chat."""

import math

import numpy as np
import pytest

from roomforge.errors import (
    EmptyMesh,
    InvalidOp,
    InvalidRange,
    LayoutRejected,
    UnknownObject,
)
from roomforge.geometry import Aabb, OrientedBox, Transform, yaw_matrix
from roomforge.layout.fit import fit_object
from roomforge.layout.llm_layout import load_exemplars, request_layout
from roomforge.layout.ops import ManipulationOp, apply_op
from roomforge.layout.validate import (
    Layout,
    box_penetration,
    room_overhang,
    validate_boxes,
    validate_scene,
)
from roomforge.backends.llm import LayoutRequest
from roomforge.project import canonical_json

from conftest import CannedLlm, make_cube, make_scene


# ---------------------------------------------------------------------------
# fit_object
# ---------------------------------------------------------------------------

def box_frame_coords(points, box: OrientedBox):
    rel = np.asarray(points) - np.asarray(box.center)
    return rel @ yaw_matrix(box.yaw)  # R^T via right-multiplication


def test_fit_unit_cube_into_unit_box():
    cube = make_cube()
    box = OrientedBox((2.0, 0.5, 3.0), (0.5, 0.5, 0.5), 0.0, "crate")
    t = fit_object(cube, box)
    assert t.uniform_scale == pytest.approx(1.0)
    world = t.apply(cube.vertices)
    assert np.allclose(world.min(axis=0), [1.5, 0.0, 2.5], atol=1e-9)
    assert np.allclose(world.max(axis=0), [2.5, 1.0, 3.5], atol=1e-9)


def test_fit_scale_binds_on_tightest_axis():
    # mesh extents (1, 2, 1) into a half-unit cube box: y binds, scale = 1/2
    tall = make_cube()
    stretched = tall.vertices.copy()
    stretched[:, 1] *= 2.0
    tall = tall.__class__(
        vertices=stretched, normals=tall.normals, uvs=tall.uvs,
        faces_v=tall.faces_v, faces_vt=tall.faces_vt, faces_vn=tall.faces_vn,
    )
    box = OrientedBox((0.0, 0.5, 0.0), (0.5, 0.5, 0.5), 0.0, "crate")
    t = fit_object(tall, box)
    assert t.uniform_scale == pytest.approx(0.5)
    world = t.apply(tall.vertices)
    assert world[:, 1].min() == pytest.approx(0.0, abs=1e-12)  # rests on box bottom


def test_fit_respects_canonical_yaw_offset():
    # mesh long in x; offset pi/2 turns it to face z, so a z-long box fits at scale 1
    wide = make_cube()
    v = wide.vertices.copy()
    v[:, 0] *= 2.0
    wide = wide.__class__(
        vertices=v, normals=wide.normals, uvs=wide.uvs,
        faces_v=wide.faces_v, faces_vt=wide.faces_vt, faces_vn=wide.faces_vn,
    )
    box = OrientedBox((0.0, 0.5, 0.0), (0.5, 0.5, 1.0), 0.0, "bench")
    with_offset = fit_object(wide, box, canonical_yaw_offset=math.pi / 2)
    assert with_offset.uniform_scale == pytest.approx(1.0)
    assert with_offset.yaw_pitch_roll[0] == pytest.approx(math.pi / 2)
    without = fit_object(wide, box)
    assert without.uniform_scale == pytest.approx(0.5)


def test_fit_yawed_box_total_rotation():
    cube = make_cube()
    box = OrientedBox((1.0, 0.5, 1.0), (0.5, 0.5, 0.5), 0.7, "crate")
    t = fit_object(cube, box, canonical_yaw_offset=0.3)
    assert t.yaw_pitch_roll[0] == pytest.approx(1.0)


def test_fit_containment_property():
    rng = np.random.default_rng(21)
    cube = make_cube()
    for _ in range(200):
        center = rng.uniform(-5, 5, 3)
        he = rng.uniform(0.1, 2.0, 3)
        yaw = rng.uniform(-math.pi, math.pi)
        box = OrientedBox(tuple(center), tuple(he), yaw, "x")
        t = fit_object(cube, box, canonical_yaw_offset=float(rng.uniform(-math.pi, math.pi)))
        local = box_frame_coords(t.apply(cube.vertices), box)
        assert np.all(np.abs(local) <= np.asarray(he) + 1e-4)
        # resting on the bottom, not floating mid-box
        assert local[:, 1].min() == pytest.approx(-he[1], abs=1e-9)


def test_fit_rejects_degenerate_input():
    cls = make_cube().__class__
    box = OrientedBox((0, 0.5, 0), (0.5, 0.5, 0.5), 0.0, "x")
    empty = cls(
        vertices=np.zeros((0, 3)), normals=np.zeros((0, 3)), uvs=np.zeros((0, 2)),
        faces_v=np.zeros((0, 3), np.int32), faces_vt=np.zeros((0, 3), np.int32),
        faces_vn=np.zeros((0, 3), np.int32),
    )
    with pytest.raises(EmptyMesh):
        fit_object(empty, box)
    collapsed = make_cube()
    point = cls(
        vertices=np.zeros_like(collapsed.vertices), normals=collapsed.normals,
        uvs=collapsed.uvs, faces_v=collapsed.faces_v,
        faces_vt=collapsed.faces_vt, faces_vn=collapsed.faces_vn,
    )
    with pytest.raises(InvalidRange):
        fit_object(point, box)


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

ROOM = Aabb((0.0, 0.0, 0.0), (8.0, 3.0, 6.0))


def box_at(x, z, hx=0.5, hz=0.5, yaw=0.0, hy=0.5, category="crate"):
    return OrientedBox((x, hy, z), (hx, hy, hz), yaw, category)


def test_distant_boxes_do_not_violate():
    assert validate_boxes([box_at(1, 1), box_at(5, 4)], ROOM) == []


def test_coincident_boxes_interpenetrate():
    violations = validate_boxes([box_at(2, 2), box_at(2, 2)], ROOM)
    assert len(violations) == 1
    v = violations[0]
    assert "interpenetrate" in str(v)
    assert v.amount == pytest.approx(1.0)


def test_shallow_overlap_inside_tolerance():
    # 1 cm overlap, 2 cm tolerance
    boxes = [box_at(2.0, 2.0), box_at(2.99, 2.0)]
    assert validate_boxes(boxes, ROOM, penetration_tol=0.02) == []
    assert len(validate_boxes(boxes, ROOM, penetration_tol=0.005)) == 1


def test_vertical_separation_is_no_overlap():
    low = OrientedBox((2, 0.5, 2), (0.5, 0.5, 0.5), 0.0, "table")
    high = OrientedBox((2, 1.7, 2), (0.5, 0.5, 0.5), 0.0, "shelf")
    assert box_penetration(low, high) == 0.0
    assert validate_boxes([low, high], ROOM) == []


def test_yawed_sat_beats_aabb_test():
    # diamond next to a small box: their AABBs overlap, the boxes do not
    diamond = OrientedBox((0.0, 0.5, 0.0), (0.5, 0.5, 0.5), math.pi / 4, "a")
    nearby = OrientedBox((0.65, 0.5, 0.65), (0.2, 0.5, 0.2), 0.0, "b")
    assert diamond.world_aabb().max[0] > nearby.world_aabb().min[0]  # AABBs do touch
    assert box_penetration(diamond, nearby) == 0.0


def test_room_overhang_reported():
    poking = box_at(7.8, 3.0)  # x spans 7.3..8.3 in an 8 m room
    assert room_overhang(poking, ROOM) == pytest.approx(0.3)
    violations = validate_boxes([poking], ROOM)
    assert len(violations) == 1
    assert "outside the room" in str(violations[0])


def test_layout_constructor_enforces_containment():
    with pytest.raises(InvalidRange):
        Layout(ROOM, (box_at(9.0, 2.0),))
    layout = Layout(ROOM, (box_at(2.0, 2.0),))
    assert len(layout.boxes) == 1


def test_validate_scene_on_clean_fixture():
    assert validate_scene(make_scene()) == []


# ---------------------------------------------------------------------------
# ops
# ---------------------------------------------------------------------------

def record_bytes(scene, object_id):
    return canonical_json(scene.get(object_id).to_doc())


def test_op_doc_round_trip():
    ops = [
        ManipulationOp("move", "a", delta=(0.1, 0.0, -0.2)),
        ManipulationOp("rotate", "a", yaw_delta=0.5),
        ManipulationOp("scale", "a", factor=1.25),
        ManipulationOp("remove", "a"),
        ManipulationOp(
            "clone", "a",
            clone_box=OrientedBox((1, 0.5, 1), (0.5, 0.5, 0.5), 0.0, "crate"),
            clone_id="a-twin",
        ),
    ]
    for op in ops:
        assert ManipulationOp.from_doc(op.to_doc()) == op


def test_op_validation():
    with pytest.raises(InvalidOp):
        ManipulationOp("teleport", "a")
    with pytest.raises(InvalidOp):
        ManipulationOp("move", "")
    with pytest.raises(InvalidOp):
        ManipulationOp("move", "a", delta=(1.0,))
    with pytest.raises(InvalidOp):
        ManipulationOp("scale", "a", factor=0.0)
    with pytest.raises(InvalidOp):
        ManipulationOp("clone", "a")
    with pytest.raises(InvalidOp):
        ManipulationOp.from_doc({"op": "move", "id": "a"})  # missing delta


def test_move_shifts_box_and_refits():
    scene = make_scene()
    moved = apply_op(scene, ManipulationOp("move", "obj-0", delta=(0.5, 0.0, 0.25)))
    old, new = scene.get("obj-0"), moved.get("obj-0")
    assert np.allclose(np.asarray(new.box.center) - np.asarray(old.box.center), [0.5, 0.0, 0.25])
    assert new.transform != old.transform
    assert new.mesh is old.mesh


def test_ops_do_not_touch_other_records():
    scene = make_scene(n_objects=3)
    before = {oid: record_bytes(scene, oid) for oid in ("obj-1", "obj-2")}
    out = apply_op(scene, ManipulationOp("move", "obj-0", delta=(0.3, 0.0, 0.0)))
    out = apply_op(out, ManipulationOp("rotate", "obj-0", yaw_delta=0.4))
    out = apply_op(out, ManipulationOp("scale", "obj-0", factor=0.8))
    for oid, doc in before.items():
        assert record_bytes(out, oid) == doc


def test_move_then_unmove_restores_bits():
    scene = make_scene()
    before = record_bytes(scene, "obj-1")
    out = apply_op(scene, ManipulationOp("move", "obj-1", delta=(0.7, 0.0, -0.3)))
    assert record_bytes(out, "obj-1") != before
    out = apply_op(out, ManipulationOp("move", "obj-1", delta=(-0.7, 0.0, 0.3)))
    assert record_bytes(out, "obj-1") == before


def test_rotate_and_scale_inverses_restore_bits():
    scene = make_scene()
    before = record_bytes(scene, "obj-0")
    out = apply_op(scene, ManipulationOp("rotate", "obj-0", yaw_delta=0.25))
    out = apply_op(out, ManipulationOp("rotate", "obj-0", yaw_delta=-0.25))
    assert record_bytes(out, "obj-0") == before
    out = apply_op(out, ManipulationOp("scale", "obj-0", factor=2.0))
    out = apply_op(out, ManipulationOp("scale", "obj-0", factor=0.5))
    assert record_bytes(out, "obj-0") == before


def test_remove():
    scene = make_scene(n_objects=2)
    out = apply_op(scene, ManipulationOp("remove", "obj-0"))
    assert out.get("obj-0") is None
    assert record_bytes(out, "obj-1") == record_bytes(scene, "obj-1")
    with pytest.raises(UnknownObject):
        apply_op(out, ManipulationOp("remove", "obj-0"))


def test_clone_shares_mesh_copies_atlas():
    scene = make_scene(n_objects=1)
    dest = OrientedBox((4.0, 0.6, 4.0), (0.6, 0.6, 0.6), 0.5, "")
    out = apply_op(scene, ManipulationOp("clone", "obj-0", clone_box=dest))
    clone = out.get("obj-0-copy")
    src = out.get("obj-0")
    assert clone is not None
    assert clone.mesh is src.mesh
    assert clone.mesh_name == src.mesh_name  # one obj file on disk
    assert clone.atlas_name == "atlases/obj-0-copy.png"
    assert np.array_equal(clone.atlas.pixels, src.atlas.pixels)
    assert clone.atlas.pixels is not src.atlas.pixels
    assert clone.box.category == "crate-0"  # inherited
    # second clone auto-numbers
    out2 = apply_op(out, ManipulationOp("clone", "obj-0", clone_box=dest))
    assert out2.get("obj-0-copy-2") is not None


def test_clone_rejects_existing_explicit_id():
    scene = make_scene(n_objects=2)
    dest = OrientedBox((4.0, 0.5, 4.0), (0.5, 0.5, 0.5), 0.0, "x")
    with pytest.raises(InvalidOp):
        apply_op(scene, ManipulationOp("clone", "obj-0", clone_box=dest, clone_id="obj-1"))


def test_unknown_target():
    with pytest.raises(UnknownObject):
        apply_op(make_scene(), ManipulationOp("move", "ghost", delta=(1, 0, 0)))


# ---------------------------------------------------------------------------
# layout via chat service
# ---------------------------------------------------------------------------

GOOD_LAYOUT = (
    '[{"category": "bed", "center": [2.0, 0.3, 1.2], "half_extents": [0.9, 0.3, 1.0], "yaw": 0.0},'
    ' {"category": "nightstand", "center": [0.5, 0.25, 0.5], "half_extents": [0.25, 0.25, 0.25], "yaw": 0.0}]'
)
BAD_LAYOUT = '[{"category": "bed", "center": [9.0, 0.3, 1.0], "half_extents": [0.9, 0.3, 1.0], "yaw": 0.0}]'


def layout_request():
    return LayoutRequest(
        room_type="bedroom",
        room=Aabb((0, 0, 0), (4, 3, 4)),
        categories={"bed": 1, "nightstand": 1},
        exemplars=load_exemplars("bedroom"),
    )


def test_load_exemplars():
    bedrooms = load_exemplars("bedroom")
    assert len(bedrooms) == 2
    assert all(len(boxes) >= 3 for boxes in bedrooms)
    assert all(b.category for boxes in bedrooms for b in boxes)
    assert load_exemplars("aquarium") == ()


def test_request_layout_accepts_valid_reply():
    llm = CannedLlm([GOOD_LAYOUT])
    layout = request_layout(llm, layout_request())
    assert len(layout.boxes) == 2
    assert len(llm.calls) == 1
    assert {b.category for b in layout.boxes} == {"bed", "nightstand"}


def test_request_layout_retries_with_problems_once():
    llm = CannedLlm([BAD_LAYOUT, GOOD_LAYOUT])
    layout = request_layout(llm, layout_request())
    assert len(layout.boxes) == 2
    assert len(llm.calls) == 2
    retry_user_prompt = llm.calls[1][1]
    assert "rejected" in retry_user_prompt
    assert "outside the room" in retry_user_prompt


def test_request_layout_gives_up_after_second_failure():
    llm = CannedLlm([BAD_LAYOUT, "no layout for you"])
    with pytest.raises(LayoutRejected) as err:
        request_layout(llm, layout_request())
    assert err.value.violations
    assert len(llm.calls) == 2


def test_request_layout_flags_missing_categories():
    only_bed = '[{"category": "bed", "center": [2.0, 0.3, 1.2], "half_extents": [0.9, 0.3, 1.0], "yaw": 0.0}]'
    llm = CannedLlm([only_bed, GOOD_LAYOUT])
    layout = request_layout(llm, layout_request())
    assert len(llm.calls) == 2
    assert "nightstand" in llm.calls[1][1]
    assert len(layout.boxes) == 2


def test_request_layout_parses_prose_wrapped_reply():
    llm = CannedLlm(["Here you go:\n" + GOOD_LAYOUT + "\nHope that helps!"])
    layout = request_layout(llm, layout_request())
    assert len(layout.boxes) == 2
