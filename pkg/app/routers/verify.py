# app/routers/verify.py
"""`verify`: propiedades aleatorizadas de la cota. Sale con 2 si alguna falla."""
from __future__ import annotations

import click

from app.core.errors import DetectorFailure
from app.routers.params import DIMS, emit, emit_json, is_quiet
from app.services.analysis import SUITES, verify_suite


@click.command("verify")
@click.option("--property", "prop", type=click.Choice(list(SUITES)), required=True)
@click.option("--trials", type=click.IntRange(min=1), default=100, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--dims", type=DIMS, default="2,2,2", show_default=True)
@click.option("--json", "as_json", is_flag=True)
def command(prop, trials, seed, dims, as_json):
    """Corre la propiedad PROPERTY sobre TRIALS muestras."""
    result = verify_suite(prop, trials, seed, dims=dims, quiet=is_quiet())
    if as_json:
        emit_json(result, seed=seed)
    else:
        emit(
            f"propiedad         {result.tag}\n"
            f"muestras          {result.trials} ({result.checked} verificadas)\n"
            f"semilla           {result.seed}\n"
            f"violación máxima  {result.max_violation:.3e}\n"
            f"tolerancia        {result.tolerance:.0e}\n"
            f"resultado         {'OK' if result.passed else 'FALLA'}"
        )
    if not result.passed:
        raise DetectorFailure(f"La propiedad {prop} falló: violación {result.max_violation:.3e} > {result.tolerance:.0e}")
