"""Fitting a mesh into an oriented placement box."""

from __future__ import annotations

import numpy as np

from ..errors import EmptyMesh, InvalidRange
from ..geometry import Aabb, OrientedBox, Transform, TriangleMesh, wrap_angle, yaw_matrix


def fit_object(
    mesh: TriangleMesh, box: OrientedBox, canonical_yaw_offset: float = 0.0
) -> Transform:
    """Uniform-scale placement of a mesh inside its box.

    canonical_yaw_offset rotates the mesh from its authored facing to the
    box's notion of front before fitting; the scale is then the tightest
    axis ratio in the box's local frame. The footprint is centered and the
    mesh bottom sits on the box bottom, so floor-resting boxes put objects
    on the floor.
    """
    if mesh.vertex_count == 0 or mesh.face_count == 0:
        raise EmptyMesh("cannot fit an empty mesh")
    local = mesh.vertices @ yaw_matrix(canonical_yaw_offset).T
    aabb = Aabb.of_points(local)
    ext = aabb.extents
    if (ext < 1e-12).all():
        raise InvalidRange("mesh has no spatial extent")
    ratios = np.where(ext > 1e-12, 2.0 * np.asarray(box.half_extents) / np.maximum(ext, 1e-12), np.inf)
    scale = float(ratios.min())

    c = aabb.center
    t_local = np.array(
        [-scale * c[0], -box.half_extents[1] - scale * aabb.min[1], -scale * c[2]]
    )
    t_world = yaw_matrix(box.yaw) @ t_local + np.asarray(box.center)
    return Transform(
        translation=t_world,
        yaw_pitch_roll=(wrap_angle(box.yaw + canonical_yaw_offset), 0.0, 0.0),
        uniform_scale=scale,
    )
