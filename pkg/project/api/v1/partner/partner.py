from pathlib import Path
from typing import Optional

import typer

from project.api.schemas import RunConfig
from project.api.v1.decorators import exit_guard
from project.config import settings
from . import controllers as ctrl

router = typer.Typer()


@router.command("partner", help="Build the offset partner at --lambda and verify the pair.")
@exit_guard
def partner(
    input: Path = typer.Option(..., "--input", help="Curve-spec JSON"),
    out: Path = typer.Option(..., "--out", help="Output directory"),
    lam: Optional[float] = typer.Option(None, "--lambda", help="Offset along the principal normal"),
    tol: float = typer.Option(settings.DEFAULT_TOL, "--tol", help="Verdict tolerance"),
    format: str = typer.Option("csv", "--format", help="Partner samples as csv or inline json"),
):
    config = RunConfig(command="partner", input=input, output_dir=out, tol=tol, lam=lam, format=format)
    for path in ctrl.cmd_partner(config):
        typer.echo(str(path))
