from .atlas import TextureAtlas, load_atlas, save_atlas
from .boxes import Aabb, OrientedBox
from .camera import Camera
from .mesh import TriangleMesh, load_mesh, mesh_aabb, save_mesh
from .transforms import Transform, matrix_to_ypr, wrap_angle, yaw_matrix, ypr_matrix

__all__ = [
    "Aabb",
    "Camera",
    "OrientedBox",
    "TextureAtlas",
    "Transform",
    "TriangleMesh",
    "load_atlas",
    "load_mesh",
    "matrix_to_ypr",
    "mesh_aabb",
    "save_atlas",
    "save_mesh",
    "wrap_angle",
    "yaw_matrix",
    "ypr_matrix",
]
