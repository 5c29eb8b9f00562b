from pathlib import Path

import typer

from project.api.schemas import RunConfig
from project.api.v1.decorators import exit_guard
from project.config import settings
from . import controllers as ctrl

router = typer.Typer()


@router.command("check", help="Test k = lambda (k^2 + r^2) (3D) or K = lambda (K^2 + k^2) (4D).")
@exit_guard
def check(
    input: Path = typer.Option(..., "--input", help="Curve-spec JSON"),
    out: Path = typer.Option(..., "--out", help="Output directory"),
    tol: float = typer.Option(settings.DEFAULT_TOL, "--tol", help="Residual tolerance"),
):
    config = RunConfig(command="check", input=input, output_dir=out, tol=tol)
    typer.echo(str(ctrl.cmd_check(config)))
