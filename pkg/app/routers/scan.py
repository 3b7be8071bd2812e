# app/routers/scan.py
"""`scan`: umbral de detección en p para las familias mezcladas."""
from __future__ import annotations

import logging

import click

from app.core.config import SCAN_TOL
from app.models.state import Family, StateFamily
from app.routers.params import emit, emit_json
from app.services.analysis import DETECTORS, threshold_scan
from app.utils.report_io import write_scan_csv
from app.utils.state_io import load_witness

logger = logging.getLogger(__name__)


@click.command("scan")
@click.option("--family", type=click.Choice(["wmix", "ghzmix"]), required=True)
@click.option("--detector", type=click.Choice(list(DETECTORS)), required=True)
@click.option("--tol", type=float, default=SCAN_TOL, show_default=True)
@click.option("--witness", "witness_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None, help="CSV con cada evaluación.")
@click.option("--json", "as_json", is_flag=True)
def command(family, detector, tol, witness_path, out, as_json):
    """Bisección del p donde el detector empieza a detectar."""
    witness = load_witness(witness_path)[0] if witness_path is not None else None
    base = StateFamily(family=Family(family), p=0.0)
    result = threshold_scan(base, detector, tol, witness)
    if out is not None:
        write_scan_csv(result.evaluations, result.threshold, result.width, out)
    if as_json:
        emit_json(result, tol=tol)
        return
    emit(
        f"familia     {result.family}\n"
        f"detector    {result.detector}\n"
        f"p*          {result.threshold:.8f}\n"
        f"ancho       {result.width:.2e}\n"
        f"evaluaciones {len(result.evaluations)}"
    )
