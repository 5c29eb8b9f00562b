from pathlib import Path

import typer

from project.api.schemas import RunConfig
from project.api.v1.decorators import exit_guard
from . import controllers as ctrl

router = typer.Typer()


@router.command("frame", help="Frenet frames and curvatures on every interior sample.")
@exit_guard
def frame(
    input: Path = typer.Option(..., "--input", help="Curve-spec JSON"),
    out: Path = typer.Option(..., "--out", help="Output directory"),
    format: str = typer.Option("csv", "--format", help="csv or json"),
):
    config = RunConfig(command="frame", input=input, output_dir=out, format=format)
    for path in ctrl.cmd_frame(config):
        typer.echo(str(path))
