# app/utils/report_io.py
"""
Emisión de reportes: CSV de los barridos y JSON con procedencia.

CSV del barrido (una fila por evaluación, en el orden en que se hicieron):

    p,detector_value,verdict
    0.0,0.0,false
    ...
    summary,<p*>,<ancho>

Los flotantes se escriben con `repr`, así que leer el archivo reproduce los
valores exactos.
"""
from __future__ import annotations

import csv
import io
import json
import logging
from pathlib import Path
from typing import IO, Any, Optional, Union

from pydantic import BaseModel

from app import __version__
from app.core.config import get_settings
from app.core.errors import InputError
from app.models.report import ScanEvaluation

logger = logging.getLogger(__name__)

CSV_HEADER = ("p", "detector_value", "verdict")
SUMMARY_TAG = "summary"

Target = Union[str, Path, IO[str]]


# ─────────────────── CSV ───────────────────

def _verdict_text(flag: bool) -> str:
    return "true" if flag else "false"


def write_scan_csv(evaluations: list[ScanEvaluation], threshold: float, width: float, target: Target) -> None:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in evaluations:
        writer.writerow([repr(row.p), repr(row.value), _verdict_text(row.verdict)])
    writer.writerow([SUMMARY_TAG, repr(threshold), repr(width)])
    if isinstance(target, (str, Path)):
        Path(target).write_text(buffer.getvalue(), encoding="utf-8")
        logger.info(f"💾 CSV del barrido guardado en {target} ({len(evaluations)} evaluaciones)")
    else:
        target.write(buffer.getvalue())


def read_scan_csv(target: Target) -> tuple[list[ScanEvaluation], float, float]:
    """Devuelve (evaluaciones, p*, ancho)."""
    if isinstance(target, (str, Path)):
        try:
            text = Path(target).read_text(encoding="utf-8")
        except OSError as e:
            raise InputError(f"No se pudo leer {target}: {e}")
    else:
        text = target.read()

    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != CSV_HEADER:
        raise InputError(f"Encabezado CSV inválido, se esperaba {','.join(CSV_HEADER)}")
    evaluations = []
    summary = None
    for row in rows[1:]:
        if not row:
            continue
        if row[0] == SUMMARY_TAG:
            summary = (float(row[1]), float(row[2]))
            continue
        if row[2] not in ("true", "false"):
            raise InputError(f"Veredicto inválido en el CSV: {row[2]!r}")
        evaluations.append(ScanEvaluation(p=float(row[0]), value=float(row[1]), verdict=row[2] == "true"))
    if summary is None:
        raise InputError("El CSV no tiene fila de resumen")
    return evaluations, summary[0], summary[1]


# ─────────────────── JSON ───────────────────

def provenance(seed: Optional[int] = None) -> dict[str, Any]:
    settings = get_settings()
    return {
        "version": __version__,
        "kappa": settings.kappa,
        "seed": seed,
        "settings": settings.model_dump(),
    }


def dumps_report(result: BaseModel, *, seed: Optional[int] = None, **extra: Any) -> str:
    """Un único objeto JSON: procedencia + `result` + campos extra."""
    payload = provenance(seed)
    payload.update(extra)
    payload["result"] = result.model_dump(mode="json")
    return json.dumps(payload, ensure_ascii=False)


def loads_report(text: str) -> dict[str, Any]:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"Reporte JSON inválido: {e}")
    if not isinstance(payload, dict) or "result" not in payload:
        raise InputError("El reporte JSON debe ser un objeto con el campo 'result'")
    return payload
