# app/core/errors.py
"""
Jerarquía de errores del toolkit.

Cada excepción lleva un `exit_code` y un `detail`, igual que un HTTPException
lleva `status_code` y `detail`. La CLI los traduce a códigos de salida:

- 2: un detector o una propiedad verificada falló.
- 3: error de entrada (archivos, dimensiones, parámetros).
- 4: violación de un contrato numérico.
"""
from __future__ import annotations


class QConcurrenceError(Exception):
    exit_code: int = 1

    def __init__(self, detail: str, *, exit_code: int | None = None):
        super().__init__(detail)
        self.detail = detail
        if exit_code is not None:
            self.exit_code = exit_code


# ─────────────────── Fallos de detectores / propiedades ───────────────────

class DetectorFailure(QConcurrenceError):
    exit_code = 2


# ─────────────────── Errores de entrada ───────────────────

class InputError(QConcurrenceError):
    exit_code = 3


class DimensionError(InputError):
    """Dimensiones incompatibles entre matriz, vector y lista de subsistemas."""


class StateFormatError(InputError):
    """Archivo QSTATE mal formado o que no cumple los invariantes."""


class ConfigError(InputError):
    pass


# ─────────────────── Contratos numéricos ───────────────────

class SpectralContractError(QConcurrenceError, ArithmeticError):
    exit_code = 4


class NormalizationConventionError(QConcurrenceError, ArithmeticError):
    """La razón de calibración no es constante: enumeración de generadores rota."""
    exit_code = 4
