from pathlib import Path
from typing import Optional

import typer

from project.api.schemas import RunConfig
from project.api.v1.decorators import exit_guard
from project.config import settings
from . import controllers as ctrl

router = typer.Typer()


@router.command("verify", help="Mannheim-pair verdicts for two curves and their correspondence.")
@exit_guard
def verify(
    input: Path = typer.Option(..., "--input", help="Curve-spec JSON of the curve"),
    input2: Optional[Path] = typer.Option(None, "--input2", help="Curve-spec JSON of the partner"),
    map: Optional[Path] = typer.Option(None, "--map", help="Correspondence CSV (s,s_star)"),
    out: Path = typer.Option(..., "--out", help="Output directory"),
    tol: float = typer.Option(settings.DEFAULT_TOL, "--tol", help="Verdict tolerance"),
):
    config = RunConfig(command="verify", input=input, input2=input2, map=map, output_dir=out, tol=tol)
    typer.echo(str(ctrl.cmd_verify(config)))
