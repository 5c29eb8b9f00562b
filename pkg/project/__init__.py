import logging

import typer
from rich.console import Console
from rich.logging import RichHandler

from project.api.v1.check import check
from project.api.v1.frame import frame
from project.api.v1.partner import partner
from project.api.v1.synthesize import synthesize
from project.api.v1.verify import verify
from project.config import settings


def register_commands(app: typer.Typer):
    for module in (frame, check, partner, verify, synthesize):
        app.registered_commands.extend(module.router.registered_commands)


def configure_logging():
    logging.basicConfig(
        level=settings.LOG_LEVEL,
        format="%(message)s",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )


def create_app() -> typer.Typer:
    app = typer.Typer(
        help="Quaternionic Frenet frames and Mannheim curve pairs in E^3 and E^4.",
        no_args_is_help=True,
        add_completion=False,
    )
    configure_logging()
    register_commands(app)
    return app
