from pathlib import Path

import typer

from project.api.schemas import RunConfig
from project.api.v1.decorators import exit_guard
from project.config import settings
from . import controllers as ctrl

router = typer.Typer()


@router.command("synthesize", help="Integrate the Frenet system of a from_curvatures spec.")
@exit_guard
def synthesize(
    input: Path = typer.Option(..., "--input", help="Curve-spec JSON of kind from_curvatures"),
    out: Path = typer.Option(..., "--out", help="Output directory"),
    tol: float = typer.Option(settings.DEFAULT_TOL, "--tol", help="Round-trip tolerance"),
    format: str = typer.Option("csv", "--format", help="Curve samples as csv or inline json"),
):
    config = RunConfig(command="synthesize", input=input, output_dir=out, tol=tol, format=format)
    for path in ctrl.cmd_synthesize(config):
        typer.echo(str(path))
