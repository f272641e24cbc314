from .cascade import (
    MAX_OBJECT_REFS,
    cascade_stylize,
    generate_scene_reference,
    overview_camera,
)
from .paint import StyleContext, backproject, stylize_object
from .trimap import (
    COS_UPDATE_MARGIN,
    CoverageBuffer,
    State,
    Trimap,
    build_trimap,
    trimap_to_mask,
)
from .views import (
    DEFAULT_AZIMUTHS,
    DEFAULT_DISTANCE_FACTOR,
    DEFAULT_ELEVATIONS,
    ViewSchedule,
    schedule_views,
)

__all__ = [
    "COS_UPDATE_MARGIN",
    "DEFAULT_AZIMUTHS",
    "DEFAULT_DISTANCE_FACTOR",
    "DEFAULT_ELEVATIONS",
    "MAX_OBJECT_REFS",
    "CoverageBuffer",
    "State",
    "StyleContext",
    "Trimap",
    "ViewSchedule",
    "backproject",
    "build_trimap",
    "cascade_stylize",
    "generate_scene_reference",
    "overview_camera",
    "schedule_views",
    "stylize_object",
    "trimap_to_mask",
]
