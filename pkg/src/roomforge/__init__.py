"""roomforge: stylized indoor scenes from meshes, boxes and a text prompt.

The pieces compose bottom-up: geometry and the software rasterizer feed the
texturing engine; synthesis backends fill masked view images; the layout
module places and manipulates objects; the pipeline strings it together and
the service exposes a scene for interactive editing.
"""

from .errors import RoomforgeError
from .project import SceneProject, load_project, save_project

__version__ = "0.1.0"

__all__ = ["RoomforgeError", "SceneProject", "__version__", "load_project", "save_project"]
