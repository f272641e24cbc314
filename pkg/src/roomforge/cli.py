"""Command-line surface: generate, render, edit, eval, serve."""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path

import click

from .errors import BackendError, LayoutRejected, RoomforgeError, StageError
from .geometry import OrientedBox
from .imgio import rgba_png_bytes
from .layout import ManipulationOp, apply_op, validate_scene
from .pipeline import (
    ViewConfig,
    eval_renders,
    load_config,
    parse_camera_spec,
    render_scene,
    run_pipeline,
)
from .project import load_project, save_project

EXIT_CONFIG = 2
EXIT_BACKEND = 3
EXIT_LAYOUT = 4


def _fail(exc: Exception):
    cause = exc.cause if isinstance(exc, StageError) else exc
    click.echo(f"error: {exc}", err=True)
    if isinstance(cause, LayoutRejected):
        sys.exit(EXIT_LAYOUT)
    if isinstance(cause, BackendError):
        sys.exit(EXIT_BACKEND)
    sys.exit(EXIT_CONFIG)


@click.group()
def main():
    """Stylized indoor scenes from meshes, boxes and a prompt."""


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_dir", default=None, help="Overrides the config's output directory.")
def generate(config_path, out_dir):
    """Run the whole pipeline from a config file."""
    try:
        config = load_config(config_path, out_dir=out_dir)
        scene = run_pipeline(config)
    except RoomforgeError as exc:
        _fail(exc)
    violations = validate_scene(scene)
    click.echo(f"wrote {len(scene.objects)} objects to {config.out_dir}")
    for v in violations:
        click.echo(f"warning: {v}")


@main.command()
@click.option("--scene", "scene_dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--camera", "camera_spec", required=True, help="px,py,pz,lx,ly,lz,fov (fov in degrees)")
@click.option("--width", default=512, show_default=True)
@click.option("--height", default=512, show_default=True)
@click.option("--out", "out_path", default="render.png", show_default=True)
def render(scene_dir, camera_spec, width, height, out_path):
    """Render a saved scene from one camera."""
    try:
        scene = load_project(scene_dir)
        camera = parse_camera_spec(camera_spec, width=width, height=height)
        image = render_scene(scene, camera)
    except RoomforgeError as exc:
        _fail(exc)
    Path(out_path).write_bytes(rgba_png_bytes(image))
    click.echo(f"wrote {out_path}")


def _build_op(op, object_id, delta, yaw_delta_deg, factor, box, clone_id) -> ManipulationOp:
    if op == "move":
        if delta is None:
            raise click.UsageError("move needs --delta x,y,z")
        return ManipulationOp("move", object_id, delta=tuple(float(v) for v in delta.split(",")))
    if op == "rotate":
        if yaw_delta_deg is None:
            raise click.UsageError("rotate needs --yaw-delta degrees")
        return ManipulationOp("rotate", object_id, yaw_delta=math.radians(yaw_delta_deg))
    if op == "scale":
        if factor is None:
            raise click.UsageError("scale needs --factor")
        return ManipulationOp("scale", object_id, factor=factor)
    if op == "remove":
        return ManipulationOp("remove", object_id)
    # clone
    if box is None:
        raise click.UsageError("clone needs --box cx,cy,cz,hx,hy,hz,yaw_deg")
    vals = [float(v) for v in box.split(",")]
    if len(vals) != 7:
        raise click.UsageError("--box needs 7 numbers: cx,cy,cz,hx,hy,hz,yaw_deg")
    dest = OrientedBox(vals[0:3], vals[3:6], math.radians(vals[6]))
    return ManipulationOp("clone", object_id, clone_box=dest, clone_id=clone_id)


@main.command()
@click.option("--scene", "scene_dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--op", required=True, type=click.Choice(["move", "rotate", "scale", "remove", "clone"]))
@click.option("--object", "object_id", required=True)
@click.option("--delta", default=None, help="move: x,y,z in meters")
@click.option("--yaw-delta", "yaw_delta_deg", default=None, type=float, help="rotate: degrees")
@click.option("--factor", default=None, type=float, help="scale: multiplier")
@click.option("--box", default=None, help="clone: cx,cy,cz,hx,hy,hz,yaw_deg")
@click.option("--clone-id", default=None)
def edit(scene_dir, op, object_id, delta, yaw_delta_deg, factor, box, clone_id):
    """Apply one manipulation op to a saved scene."""
    try:
        scene = load_project(scene_dir)
        scene = apply_op(scene, _build_op(op, object_id, delta, yaw_delta_deg, factor, box, clone_id))
        save_project(scene, scene_dir)
    except RoomforgeError as exc:
        _fail(exc)
    click.echo(f"applied {op} to {object_id}")
    for v in validate_scene(scene):
        click.echo(f"warning: {v}")


@main.command("eval")
@click.option("--scene", "scene_dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--camera", "camera_specs", multiple=True, help="repeatable camera spec for scoring renders")
@click.option("--scorer", default=None, help="scorer service URL; omit for the internal proxy only")
def eval_cmd(scene_dir, camera_specs, scorer):
    """Report the style-consistency proxy (plus remote scores when given)."""
    try:
        scene = load_project(scene_dir)
        cameras = [parse_camera_spec(s) for s in camera_specs]
        report = eval_renders(scene, cameras, scorer_endpoint=scorer)
    except RoomforgeError as exc:
        _fail(exc)
    click.echo(json.dumps(report, indent=2, sort_keys=True))


@main.command()
@click.option("--scene", "scene_dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--port", default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--backend", "backend_kind", default="procedural", show_default=True,
              type=click.Choice(["procedural", "toy_ddpm", "remote"]))
@click.option("--ui", "ui_dir", default=None, type=click.Path(file_okay=False),
              help="directory with a built web UI to serve at /")
def serve(scene_dir, port, host, backend_kind, ui_dir):
    """Serve a scene for interactive editing."""
    from .pipeline.config import make_backend
    from .service import serve as run_service

    try:
        backend = make_backend(backend_kind)
        run_service(scene_dir, port=port, backend=backend, host=host,
                    views=ViewConfig(), ui_dir=ui_dir)
    except RoomforgeError as exc:
        _fail(exc)


if __name__ == "__main__":
    main()
