# app/routers/params.py
"""Tipos de parámetro y helpers de salida compartidos por los comandos."""
from __future__ import annotations

from typing import Optional

import click
from pydantic import BaseModel

from app.core.errors import InputError
from app.core.tensor import as_dims
from app.utils.report_io import dumps_report


class DimsParam(click.ParamType):
    """'2,2,2' → (2, 2, 2)."""
    name = "dims"

    def convert(self, value, param, ctx):
        if isinstance(value, tuple):
            return value
        try:
            return as_dims(int(part) for part in str(value).split(",") if part.strip())
        except ValueError:
            self.fail(f"{value!r} no es una lista de enteros separados por comas", param, ctx)
        except InputError as e:
            self.fail(e.detail, param, ctx)


DIMS = DimsParam()


def emit(text: str) -> None:
    click.echo(text)


def emit_json(result: BaseModel, *, seed: Optional[int] = None, **extra) -> None:
    click.echo(dumps_report(result, seed=seed, **extra))


def is_quiet() -> bool:
    ctx = click.get_current_context(silent=True)
    while ctx is not None:
        if ctx.obj and "quiet" in ctx.obj:
            return bool(ctx.obj["quiet"])
        ctx = ctx.parent
    return False
