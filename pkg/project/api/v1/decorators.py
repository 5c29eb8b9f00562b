import logging
from functools import wraps

import pandas as pd
import typer
from pydantic import ValidationError

from project.api.exceptions import CurveException, InputError


def exit_guard(command):
    """Turn toolkit errors into the CLI exit-code contract (2 input, 3 geometry, 4 correspondence)."""

    @wraps(command)
    def wrapped(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except CurveException as exc:
            logging.warning(str(exc))
            typer.echo(str(exc), err=True)
            raise typer.Exit(code=exc.exit_code)
        except ValidationError as exc:
            first = exc.errors()[0]
            detail = f"{exc.title}: {first['msg']}"
            logging.warning(detail)
            typer.echo(detail, err=True)
            raise typer.Exit(code=InputError.exit_code)
        except (pd.errors.ParserError, UnicodeDecodeError) as exc:
            logging.warning("unreadable input: %s", exc)
            typer.echo(f"unreadable input: {exc}", err=True)
            raise typer.Exit(code=InputError.exit_code)

    return wrapped
