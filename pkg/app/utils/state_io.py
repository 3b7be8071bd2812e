# app/utils/state_io.py
"""
Lectura y escritura del formato de texto QSTATE.

    QSTATE 1
    kind pure | kind density
    dims d1 d2 ... dN
    re im            (una entrada por línea; D líneas para puros, D² fila-mayor para densidades)

Las líneas que empiezan con `#` son comentarios. Los escritores emiten 17
cifras significativas, suficiente para reproducir cada double exactamente.
Un operador testigo se guarda como `kind density` con el comentario
`# witness` y se carga con `load_witness`, que sólo exige hermiticidad.
"""
from __future__ import annotations

import io
import logging
from math import prod
from pathlib import Path
from typing import IO, Iterable, Literal, Optional, Sequence, Union

import numpy as np

from app.core.config import HERMITIAN_TOL, LOAD_TOL
from app.core.errors import InputError, StateFormatError
from app.core.tensor import as_dims, is_hermitian
from app.models.state import DensityMatrix, PureState

logger = logging.getLogger(__name__)

MAGIC = "QSTATE 1"
WITNESS_TAG = "# witness"

Target = Union[str, Path, IO[str]]
State = Union[PureState, DensityMatrix]


# ─────────────────── Escritura ───────────────────

def _format_entries(values: np.ndarray) -> Iterable[str]:
    for z in values.reshape(-1):
        yield f"{z.real:.17g} {z.imag:.17g}"


def _write(target: Target, kind: str, dims: Sequence[int], values: np.ndarray, comments: Sequence[str] = ()) -> None:
    lines = [MAGIC, *comments, f"kind {kind}", "dims " + " ".join(str(d) for d in dims), *_format_entries(values)]
    text = "\n".join(lines) + "\n"
    if isinstance(target, (str, Path)):
        Path(target).write_text(text, encoding="utf-8")
    else:
        target.write(text)


def save_state(state: State, target: Target, *, comment: Optional[str] = None) -> None:
    comments = [f"# {comment}"] if comment else []
    if isinstance(state, PureState):
        _write(target, "pure", state.dims, state.amplitudes, comments)
    else:
        _write(target, "density", state.dims, state.matrix, comments)


def save_witness(matrix: np.ndarray, dims: Sequence[int], target: Target) -> None:
    _write(target, "density", as_dims(dims), np.asarray(matrix, dtype=complex), [WITNESS_TAG])


# ─────────────────── Lectura ───────────────────

def _read_text(target: Target) -> tuple[str, str]:
    if isinstance(target, (str, Path)):
        path = Path(target)
        try:
            return path.read_text(encoding="utf-8"), str(path)
        except OSError as e:
            raise InputError(f"No se pudo leer {path}: {e}")
    return target.read(), "<stream>"


def _parse(target: Target) -> tuple[str, tuple[int, ...], np.ndarray, list[str], str]:
    text, origin = _read_text(target)
    comments = []
    body = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            comments.append(line)
            continue
        body.append(line)

    if not body or body[0] != MAGIC:
        raise StateFormatError(f"{origin}: la primera línea debe ser '{MAGIC}'")
    if len(body) < 3:
        raise StateFormatError(f"{origin}: faltan las líneas 'kind' y 'dims'")

    kind_parts = body[1].split()
    if len(kind_parts) != 2 or kind_parts[0] != "kind" or kind_parts[1] not in ("pure", "density"):
        raise StateFormatError(f"{origin}: encabezado 'kind' inválido: {body[1]!r}")
    kind = kind_parts[1]

    dims_parts = body[2].split()
    if not dims_parts or dims_parts[0] != "dims" or len(dims_parts) < 2:
        raise StateFormatError(f"{origin}: encabezado 'dims' inválido: {body[2]!r}")
    try:
        dims = as_dims(int(d) for d in dims_parts[1:])
    except (ValueError, InputError) as e:
        raise StateFormatError(f"{origin}: dimensiones inválidas: {e}")

    size = prod(dims)
    expected = size if kind == "pure" else size * size
    rows = body[3:]
    if len(rows) != expected:
        raise StateFormatError(
            f"{origin}: se esperaban {expected} entradas para kind {kind} y dims {dims}, hay {len(rows)}"
        )
    values = np.empty(expected, dtype=complex)
    for i, row in enumerate(rows):
        parts = row.split()
        if len(parts) != 2:
            raise StateFormatError(f"{origin}: la entrada {i} debe tener la forma 're im': {row!r}")
        try:
            values[i] = complex(float(parts[0]), float(parts[1]))
        except ValueError:
            raise StateFormatError(f"{origin}: la entrada {i} no es numérica: {row!r}")
    return kind, dims, values, comments, origin


def load_state(target: Target, *, tol: float = LOAD_TOL) -> State:
    kind, dims, values, comments, origin = _parse(target)
    if WITNESS_TAG in comments:
        logger.warning(f"⚠️  {origin} está marcado como testigo; se carga como estado igualmente")
    try:
        if kind == "pure":
            norm = float(np.linalg.norm(values))
            if abs(norm ** 2 - 1.0) > tol:
                raise InputError(f"el estado puro no está normalizado (|ψ|² = {norm ** 2:.12f})")
            return PureState(amplitudes=values / norm, dims=dims)
        return DensityMatrix(matrix=values.reshape(prod(dims), prod(dims)), dims=dims, tol=tol)
    except StateFormatError:
        raise
    except InputError as e:
        raise StateFormatError(f"{origin}: estado rechazado: {e.detail}")


def load_witness(target: Target) -> tuple[np.ndarray, tuple[int, ...]]:
    """Carga un operador hermítico en formato density, sin exigir traza 1 ni positividad."""
    kind, dims, values, comments, origin = _parse(target)
    if kind != "density":
        raise StateFormatError(f"{origin}: un testigo debe guardarse con 'kind density'")
    if WITNESS_TAG not in comments:
        logger.warning(f"⚠️  {origin} no tiene el comentario '{WITNESS_TAG}'")
    matrix = values.reshape(prod(dims), prod(dims))
    if not is_hermitian(matrix, HERMITIAN_TOL):
        raise StateFormatError(f"{origin}: el testigo no es hermítico")
    return matrix, dims


def state_io(
    target: Target,
    mode: Literal["load", "save"],
    state: Optional[State] = None,
) -> Optional[State]:
    """Punto único de E/S: `load` devuelve el estado, `save` escribe `state`."""
    if mode == "load":
        return load_state(target)
    if mode == "save":
        if state is None:
            raise InputError("Para guardar hace falta un estado")
        save_state(state, target)
        return state
    raise InputError(f"Modo de E/S desconocido: {mode!r}")


def dumps_state(state: State) -> str:
    buffer = io.StringIO()
    save_state(state, buffer)
    return buffer.getvalue()
