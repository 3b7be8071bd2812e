# app/core/config.py
"""
Configuración central leída de variables de entorno (y de un `.env` si existe).

Todas las tolerancias numéricas viven acá para que los servicios y la CLI
usen exactamente los mismos valores y los reportes puedan registrarlos.
"""
from __future__ import annotations

import os
from typing import Final

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict

from app.core.errors import ConfigError

load_dotenv()


def _float_env(name: str, default: str) -> float:
    raw = os.getenv(name, default)
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"La variable {name} debe ser numérica, se recibió {raw!r}")


def _int_env(name: str, default: str) -> int:
    raw = os.getenv(name, default)
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"La variable {name} debe ser entera, se recibió {raw!r}")


# ─────────────────── Tolerancias numéricas ───────────────────
CLAMP_TOL: Final[float] = _float_env("QC_CLAMP_TOL", "1e-9")
RANK_TOL: Final[float] = _float_env("QC_RANK_TOL", "1e-8")
HERMITIAN_TOL: Final[float] = _float_env("QC_HERMITIAN_TOL", "1e-10")
LOAD_TOL: Final[float] = _float_env("QC_LOAD_TOL", "1e-8")
PPT_TOL: Final[float] = _float_env("QC_PPT_TOL", "1e-9")
DETECT_TOL: Final[float] = _float_env("QC_DETECT_TOL", "1e-9")

# ─────────────────── Normalización y ejecución ───────────────────
# κ fijado tras la calibración; `calibration_constant` lo vuelve a medir.
KAPPA: Final[float] = _float_env("QC_KAPPA", "0.5")
N_JOBS: Final[int] = _int_env("QC_N_JOBS", "1")
SCAN_TOL: Final[float] = _float_env("QC_SCAN_TOL", "1e-4")
LOG_LEVEL: Final[str] = os.getenv("QC_LOG_LEVEL", "INFO").upper()

if N_JOBS == 0:
    raise ConfigError("QC_N_JOBS no puede ser 0 (usar 1 para modo secuencial)")


class Settings(BaseModel):
    """Foto inmutable de la configuración, para guardar en los reportes."""
    model_config = ConfigDict(frozen=True)

    clamp_tol: float = CLAMP_TOL
    rank_tol: float = RANK_TOL
    hermitian_tol: float = HERMITIAN_TOL
    load_tol: float = LOAD_TOL
    ppt_tol: float = PPT_TOL
    detect_tol: float = DETECT_TOL
    kappa: float = KAPPA
    n_jobs: int = N_JOBS


def get_settings() -> Settings:
    return Settings()
