"""Transforms, boxes, meshes, cameras, atlases and the depth encoding."""

import math

import numpy as np
import pytest

from roomforge.errors import DegenerateCamera, MalformedFile, MissingUVs
from roomforge.geometry import (
    Aabb,
    Camera,
    OrientedBox,
    TextureAtlas,
    Transform,
    TriangleMesh,
    load_atlas,
    load_mesh,
    mesh_aabb,
    save_atlas,
    save_mesh,
)
from roomforge.geometry.transforms import matrix_to_ypr, wrap_angle, yaw_matrix, ypr_matrix
from roomforge.raster.buffers import DepthImage, load_depth_image, save_depth_image

from conftest import make_cube, make_quad


# ---------------------------------------------------------------------------
# transforms
# ---------------------------------------------------------------------------

@pytest.mark.parametrize(
    "angle,expected",
    [
        (0.0, 0.0),
        (math.pi, math.pi),
        (-math.pi, math.pi),
        (3 * math.pi, math.pi),
        (-3 * math.pi, math.pi),
        (2 * math.pi, 0.0),
        (math.pi / 4 + 6 * math.pi, math.pi / 4),
    ],
)
def test_wrap_angle(angle, expected):
    assert wrap_angle(angle) == pytest.approx(expected, abs=1e-12)
    w = wrap_angle(angle)
    assert -math.pi < w <= math.pi


def test_yaw_matrix_sends_x_toward_minus_z():
    r = yaw_matrix(math.pi / 2)
    assert np.allclose(r @ np.array([1.0, 0.0, 0.0]), [0.0, 0.0, -1.0], atol=1e-12)
    assert np.allclose(r @ np.array([0.0, 1.0, 0.0]), [0.0, 1.0, 0.0], atol=1e-12)


def test_ypr_round_trip():
    rng = np.random.default_rng(11)
    for _ in range(50):
        yaw, roll = rng.uniform(-math.pi, math.pi, 2)
        pitch = rng.uniform(-math.pi / 2 + 1e-3, math.pi / 2 - 1e-3)
        y2, p2, r2 = matrix_to_ypr(ypr_matrix(yaw, pitch, roll))
        assert (y2, p2, r2) == pytest.approx((yaw, pitch, roll), abs=1e-9)


def test_ypr_gimbal_lock_reproduces_matrix():
    m = ypr_matrix(0.7, math.pi / 2, -0.3)
    assert np.allclose(ypr_matrix(*matrix_to_ypr(m)), m, atol=1e-9)


def test_transform_apply_example():
    t = Transform(translation=(1.0, 0.0, 0.0), yaw_pitch_roll=(math.pi / 2, 0.0, 0.0), uniform_scale=2.0)
    out = t.apply(np.array([[1.0, 0.0, 0.0]]))
    assert np.allclose(out, [[1.0, 0.0, -2.0]], atol=1e-12)


def test_transform_compose_matches_sequential_application():
    rng = np.random.default_rng(3)
    pts = rng.normal(size=(10, 3))
    for _ in range(20):
        a = Transform(tuple(rng.normal(size=3)), tuple(rng.uniform(-1.2, 1.2, 3)), float(rng.uniform(0.2, 3.0)))
        b = Transform(tuple(rng.normal(size=3)), tuple(rng.uniform(-1.2, 1.2, 3)), float(rng.uniform(0.2, 3.0)))
        assert np.allclose(a.compose(b).apply(pts), a.apply(b.apply(pts)), atol=1e-9)


def test_transform_rejects_nonpositive_scale():
    with pytest.raises(ValueError):
        Transform(uniform_scale=0.0)


# ---------------------------------------------------------------------------
# boxes
# ---------------------------------------------------------------------------

def test_aabb_basics():
    box = Aabb((0.0, 0.0, 0.0), (2.0, 1.0, 4.0))
    assert np.allclose(box.extents, [2.0, 1.0, 4.0])
    assert np.allclose(box.center, [1.0, 0.5, 2.0])
    assert box.contains_point((1.0, 0.5, 3.9))
    assert not box.contains_point((2.1, 0.5, 2.0))
    assert box.contains_point((2.05, 0.5, 2.0), tol=0.1)


def test_oriented_box_corners_and_volume():
    b = OrientedBox(center=(1.0, 0.5, 2.0), half_extents=(0.5, 0.5, 1.0), yaw=0.0, category="sofa")
    corners = b.corners()
    assert corners.shape == (8, 3)
    assert np.allclose(corners.min(axis=0), [0.5, 0.0, 1.0])
    assert np.allclose(corners.max(axis=0), [1.5, 1.0, 3.0])
    assert b.volume == pytest.approx(2.0)
    fp = b.footprint_corners()
    assert fp.shape == (4, 2)
    assert np.allclose(sorted(fp[:, 0]), [0.5, 0.5, 1.5, 1.5])


def test_oriented_box_yaw_rotates_footprint():
    b = OrientedBox(center=(0.0, 0.5, 0.0), half_extents=(2.0, 0.5, 1.0), yaw=math.pi / 2, category="bed")
    aabb = b.world_aabb()
    # after a quarter turn, the long x axis sweeps into z
    assert np.allclose(aabb.extents, [2.0, 1.0, 4.0], atol=1e-9)


def test_oriented_box_rejects_nonpositive_extent():
    with pytest.raises(ValueError):
        OrientedBox(center=(0, 0, 0), half_extents=(1.0, 0.0, 1.0), yaw=0.0, category="x")


# ---------------------------------------------------------------------------
# meshes
# ---------------------------------------------------------------------------

def test_cube_fixture_shape():
    cube = make_cube()
    assert cube.vertex_count == 24
    assert cube.face_count == 12
    assert np.allclose(np.linalg.norm(cube.normals, axis=1), 1.0, atol=1e-12)


def test_bounding_sphere_of_unit_cube():
    center, radius = make_cube().bounding_sphere()
    assert np.allclose(center, [0.5, 0.5, 0.5], atol=1e-12)
    assert radius == pytest.approx(math.sqrt(3) / 2, abs=1e-12)


def test_mesh_aabb_with_transform():
    cube = make_cube()
    t = Transform(translation=(10.0, 0.0, 0.0), uniform_scale=2.0)
    box = mesh_aabb(cube, t)
    assert np.allclose(box.min, [10.0, 0.0, 0.0])
    assert np.allclose(box.max, [12.0, 2.0, 2.0])


def test_obj_round_trip(tmp_path):
    cube = make_cube(object_id="roundtrip")
    path = tmp_path / "cube.obj"
    save_mesh(cube, path)
    back = load_mesh(path)
    # the writer emits fixed 6-decimal floats
    assert np.allclose(back.vertices, cube.vertices, atol=5e-7)
    assert np.allclose(back.uvs, cube.uvs, atol=5e-7)
    assert np.array_equal(back.faces_v, cube.faces_v)
    assert np.array_equal(back.faces_vt, cube.faces_vt)


def test_obj_without_uvs_is_rejected(tmp_path):
    path = tmp_path / "bare.obj"
    path.write_text("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n")
    with pytest.raises(MissingUVs):
        load_mesh(path)


def test_obj_bad_face_index_is_rejected(tmp_path):
    path = tmp_path / "bad.obj"
    path.write_text("v 0 0 0\nv 1 0 0\nv 0 1 0\nvt 0 0\nvt 1 0\nvt 0 1\nf 1/1 2/2 9/3\n")
    with pytest.raises(MalformedFile):
        load_mesh(path)


def test_faceless_mesh_constructs_but_has_no_faces():
    # constructing is legal; operations that need geometry raise EmptyMesh
    m = TriangleMesh.from_arrays(np.zeros((3, 3)), np.zeros((3, 2)), np.zeros((0, 3), dtype=np.int32))
    assert m.face_count == 0


# ---------------------------------------------------------------------------
# cameras
# ---------------------------------------------------------------------------

def test_camera_validation_errors():
    with pytest.raises(DegenerateCamera):
        Camera(position=(0, 0, 0), look_at=(0, 0, 0))
    with pytest.raises(DegenerateCamera):
        Camera(position=(0, 0, 0), look_at=(0, 0, -1), near=2.0, far=1.0)
    with pytest.raises(DegenerateCamera):
        Camera(position=(0, 0, 0), look_at=(0, 1, 0))  # parallel to default up
    with pytest.raises(DegenerateCamera):
        Camera(position=(0, 0, 0), look_at=(0, 0, -1), vertical_fov=0.0)


def test_camera_projects_center_point_to_image_center():
    cam = Camera(position=(0, 0, 0), look_at=(0, 0, -1), resolution=(128, 96))
    px = cam.project(cam.to_camera(np.array([[0.0, 0.0, -3.0]])))
    assert np.allclose(px, [[64.0, 48.0]], atol=1e-9)


def test_camera_y_axis_points_down_in_pixels():
    cam = Camera(position=(0, 0, 0), look_at=(0, 0, -1), resolution=(100, 100))
    up_px = cam.project(cam.to_camera(np.array([[0.0, 0.5, -3.0]])))
    assert up_px[0, 1] < 50.0


def test_pixel_rays_center_and_reprojection():
    cam = Camera(position=(1, 2, 3), look_at=(1, 2, 0), resolution=(33, 33))
    rays = cam.pixel_rays()
    assert rays.shape == (33, 33, 3)
    assert np.allclose(rays[16, 16], [0.0, 0.0, -1.0], atol=1e-12)
    # every ray, pushed to an arbitrary depth, must land back in its own pixel
    pts = rays.reshape(-1, 3) * 4.2
    px = cam.project(pts)
    gx, gy = np.meshgrid(np.arange(33) + 0.5, np.arange(33) + 0.5)
    expect = np.stack([gx.ravel(), gy.ravel()], axis=1)
    assert np.allclose(px, expect, atol=1e-9)


# ---------------------------------------------------------------------------
# atlases
# ---------------------------------------------------------------------------

def test_untouched_atlas_state():
    atlas = TextureAtlas.untouched(64, 64)
    assert atlas.painted_count == 0
    assert np.all(atlas.pixels[..., :3] == 128)
    assert np.all(atlas.pixels[..., 3] == 0)


@pytest.mark.parametrize("dim", [63, 32, 8192, 0])
def test_atlas_rejects_bad_dimensions(dim):
    with pytest.raises(ValueError):
        TextureAtlas.untouched(dim, 64)


def test_atlas_painted_tracking_and_io(tmp_path):
    atlas = TextureAtlas.untouched(64, 64, "obj")
    px = atlas.pixels.copy()
    px[3, 5] = (10, 20, 30, 255)
    atlas = atlas.with_pixels(px)
    assert atlas.painted_count == 1
    assert atlas.painted[3, 5]
    path = tmp_path / "a.png"
    save_atlas(atlas, path)
    back = load_atlas(path, "obj")
    assert np.array_equal(back.pixels, atlas.pixels)


# ---------------------------------------------------------------------------
# depth encoding
# ---------------------------------------------------------------------------

def test_depth_encode_decode_extremes():
    d = np.array([[1.0, 9.0], [np.inf, 5.0]])
    img = DepthImage.encode(d, near=1.0, far=9.0)
    assert img.codes[0, 0] == 0
    assert img.codes[0, 1] == 65535
    assert img.codes[1, 0] == 65535  # background clamps to far
    out = img.decode()
    assert out[0, 0] == pytest.approx(1.0)
    assert out[0, 1] == pytest.approx(9.0)
    assert abs(out[1, 1] - 5.0) <= img.quantization_step / 2 + 1e-9


def test_depth_round_trip_error_bound():
    rng = np.random.default_rng(0)
    d = rng.uniform(0.5, 20.0, size=(32, 32))
    img = DepthImage.encode(d, near=0.5, far=20.0)
    assert np.max(np.abs(img.decode() - d)) <= img.quantization_step / 2 + 1e-9


def test_depth_sidecar_round_trip(tmp_path):
    d = np.linspace(1.0, 7.0, 64).reshape(8, 8)
    img = DepthImage.encode(d, near=1.0, far=7.0)
    path = tmp_path / "depth.png"
    save_depth_image(img, path)
    back = load_depth_image(path)
    assert np.array_equal(back.codes, img.codes)
    assert back.near == img.near and back.far == img.far


def test_depth_rejects_bad_range():
    with pytest.raises(ValueError):
        DepthImage.encode(np.zeros((2, 2)), near=3.0, far=1.0)
