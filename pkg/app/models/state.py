# app/models/state.py
"""Modelos de dominio: estados puros, matrices densidad y familias de estados."""
from __future__ import annotations

from enum import Enum
from math import prod
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from app.core.config import HERMITIAN_TOL
from app.core.errors import DimensionError, InputError
from app.core.tensor import as_dims, is_hermitian, ket_to_density, min_eigenvalue


def _frozen_array(value) -> np.ndarray:
    arr = np.array(value, dtype=complex)
    arr.flags.writeable = False
    return arr


class PureState(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    amplitudes: np.ndarray
    dims: tuple[int, ...]

    @field_validator("amplitudes", mode="before")
    @classmethod
    def _to_array(cls, v):
        return _frozen_array(v).reshape(-1)

    @field_validator("dims", mode="before")
    @classmethod
    def _to_dims(cls, v):
        return as_dims(v)

    @model_validator(mode="after")
    def _check(self) -> "PureState":
        if self.amplitudes.shape[0] != prod(self.dims):
            raise DimensionError(
                f"Se esperaban {prod(self.dims)} amplitudes para dims {self.dims}, hay {self.amplitudes.shape[0]}"
            )
        norm2 = float(np.vdot(self.amplitudes, self.amplitudes).real)
        if abs(norm2 - 1.0) > HERMITIAN_TOL:
            raise InputError(f"El estado no está normalizado: |ψ|² = {norm2:.12f}")
        return self

    @property
    def n_parties(self) -> int:
        return len(self.dims)

    def tensor(self) -> np.ndarray:
        """Amplitudes como tensor a_{i1...iN}."""
        return self.amplitudes.reshape(self.dims)

    def to_density(self) -> "DensityMatrix":
        return DensityMatrix(matrix=ket_to_density(self.amplitudes), dims=self.dims)


class DensityMatrix(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    matrix: np.ndarray
    dims: tuple[int, ...]
    # Tolerancia usada al validar; los archivos externos usan LOAD_TOL.
    tol: float = HERMITIAN_TOL

    @field_validator("matrix", mode="before")
    @classmethod
    def _to_array(cls, v):
        return _frozen_array(v)

    @field_validator("dims", mode="before")
    @classmethod
    def _to_dims(cls, v):
        return as_dims(v)

    @model_validator(mode="after")
    def _check(self) -> "DensityMatrix":
        total = prod(self.dims)
        if self.matrix.shape != (total, total):
            raise DimensionError(f"Se esperaba una matriz {total}x{total} para dims {self.dims}, se recibió {self.matrix.shape}")
        if not is_hermitian(self.matrix, self.tol):
            raise InputError("La matriz densidad no es hermítica")
        trace = complex(np.trace(self.matrix))
        if abs(trace - 1.0) > self.tol:
            raise InputError(f"La traza debe ser 1, se obtuvo {trace.real:.12f}")
        lowest = min_eigenvalue(self.matrix)
        if lowest < -self.tol:
            raise InputError(f"La matriz densidad no es semidefinida positiva (λ_min = {lowest:.3e})")
        return self

    @property
    def n_parties(self) -> int:
        return len(self.dims)

    @property
    def size(self) -> int:
        return self.matrix.shape[0]


class Family(str, Enum):
    GHZ = "ghz"
    W = "w"
    WMIX = "wmix"
    GHZMIX = "ghzmix"
    PRODUCT = "product"
    BELL = "bell"


class StateFamily(BaseModel):
    model_config = ConfigDict(frozen=True)

    family: Family
    p: Optional[float] = None
    dims: tuple[int, ...] = (2, 2, 2)

    @field_validator("dims", mode="before")
    @classmethod
    def _to_dims(cls, v):
        return as_dims(v)

    @model_validator(mode="after")
    def _check(self) -> "StateFamily":
        if self.p is not None and not 0.0 <= self.p <= 1.0:
            raise InputError(f"El parámetro p debe estar en [0, 1], se recibió {self.p}")
        if self.family in (Family.WMIX, Family.GHZMIX):
            if self.dims != (2, 2, 2):
                raise InputError(f"La familia {self.family.value} requiere tres qubits, se recibió {self.dims}")
            if self.p is None:
                raise InputError(f"La familia {self.family.value} requiere el parámetro p")
        if self.family in (Family.W, Family.WMIX) and any(d != 2 for d in self.dims):
            raise InputError("El estado W sólo está definido para qubits")
        if self.family == Family.BELL and len(self.dims) != 2:
            raise InputError("La familia bell es bipartita")
        if self.family in (Family.GHZ, Family.BELL) and len(set(self.dims)) != 1:
            raise InputError("GHZ requiere dimensiones locales iguales")
        return self

    def with_p(self, p: float) -> "StateFamily":
        return StateFamily(family=self.family, p=p, dims=self.dims)
