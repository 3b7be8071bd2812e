import logging

import click

from app import __version__
from app.core.config import LOG_LEVEL
from app.core.errors import InputError, QConcurrenceError

# --- Configuración del Logger ---
LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"
logger = logging.getLogger(__name__)


class ClickEchoHandler(logging.Handler):
    """Escribe en el stderr vigente de click (el de CliRunner en los tests)."""

    def emit(self, record: logging.LogRecord) -> None:
        try:
            click.echo(self.format(record), err=True)
        except Exception:
            self.handleError(record)


def setup_logging(level: str) -> None:
    root = logging.getLogger()
    if not any(isinstance(h, ClickEchoHandler) for h in root.handlers):
        handler = ClickEchoHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        root.addHandler(handler)
    root.setLevel(level.upper())


# --- Carga de Comandos ---
from app.routers import bound, criteria, gen, scan, verify  # noqa: E402


class ConcurrenceCLI(click.Group):
    """Traduce los errores del toolkit a mensajes en stderr y códigos de salida."""

    def make_context(self, info_name, args, parent=None, **extra) -> click.Context:
        # opciones del grupo (--log-level, ...) se validan antes de invoke
        try:
            return super().make_context(info_name, args, parent=parent, **extra)
        except click.UsageError as e:
            e.exit_code = InputError.exit_code
            raise

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except click.UsageError as e:
            # parámetros inválidos de un comando: error de entrada
            e.exit_code = InputError.exit_code
            raise
        except (click.exceptions.Exit, click.exceptions.Abort, click.ClickException):
            raise
        except QConcurrenceError as e:
            logger.debug(f"❌ {type(e).__name__}: {e.detail}")
            click.echo(f"error: {e.detail}", err=True)
            ctx.exit(e.exit_code)
        except Exception:
            logger.exception("💥 Error inesperado")
            ctx.exit(1)


@click.group(cls=ConcurrenceCLI)
@click.version_option(__version__, prog_name="qconcurrence")
@click.option(
    "--log-level",
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
    default=LOG_LEVEL,
    show_default=True,
)
@click.option("--quiet", is_flag=True, help="Sin barras de progreso.")
@click.pass_context
def cli(ctx: click.Context, log_level: str, quiet: bool):
    """Cotas inferiores de la concurrencia para estados multipartitos."""
    setup_logging(log_level)
    ctx.ensure_object(dict)
    ctx.obj["quiet"] = quiet


# --- Registro de Comandos ---
# Cada módulo de app/routers expone un único `command`.
cli.add_command(gen.command)
cli.add_command(bound.command)
cli.add_command(criteria.command)
cli.add_command(scan.command)
cli.add_command(verify.command)
