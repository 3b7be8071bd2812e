# app/routers/criteria.py
"""`criteria`: compara τ con PPT, testigo y Ky Fan sobre un estado guardado."""
from __future__ import annotations

import click

from app.core.errors import DimensionError
from app.models.state import PureState
from app.routers.params import emit, emit_json
from app.services.analysis import criteria_compare
from app.utils.state_io import load_state, load_witness


@click.command("criteria")
@click.option("--state", "state_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--witness", "witness_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--json", "as_json", is_flag=True)
def command(state_path, witness_path, as_json):
    """Tabla de detectores para el estado en STATE."""
    state = load_state(state_path)
    rho = state.to_density() if isinstance(state, PureState) else state
    witness = None
    if witness_path is not None:
        witness, w_dims = load_witness(witness_path)
        if w_dims != rho.dims:
            raise DimensionError(f"El testigo (dims {w_dims}) no corresponde al estado (dims {rho.dims})")
    report, table = criteria_compare(rho, witness)
    if as_json:
        emit_json(report, state=str(state_path))
        return
    emit(table)
