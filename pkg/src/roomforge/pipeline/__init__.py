from .config import (
    ObjectSpec,
    PipelineConfig,
    ViewConfig,
    camera_from_doc,
    load_config,
    make_backend,
    make_llm_client,
    parse_camera_spec,
)
from .run import (
    atlas_histogram,
    chi_square,
    eval_project_dir,
    eval_renders,
    load_layout_file,
    place_objects,
    render_scene,
    run_pipeline,
    style_consistency_proxy,
)

__all__ = [
    "ObjectSpec",
    "PipelineConfig",
    "ViewConfig",
    "atlas_histogram",
    "camera_from_doc",
    "chi_square",
    "eval_project_dir",
    "eval_renders",
    "load_config",
    "load_layout_file",
    "make_backend",
    "make_llm_client",
    "parse_camera_spec",
    "place_objects",
    "render_scene",
    "run_pipeline",
    "style_consistency_proxy",
]
