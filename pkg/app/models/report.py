# app/models/report.py
"""Modelos de los reportes que producen los servicios y que emite la CLI."""
from __future__ import annotations

from enum import Enum
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field


class Convention(str, Enum):
    # τ_N con el prefactor d/(2m(d−1)) y peso κ (escala de C_d^3 con Tr ρ_i²)
    MULTIPARTITE = "multipartite"
    # τ_2 con el prefactor d/(2(d−1)) y peso 2κ (se reduce a Wootters en qubits)
    BIPARTITE = "bipartite"
    # dimensiones locales distintas: suma cruda, prefactor 1
    UNNORMALIZED = "unnormalized"


class LambdaSpectrum(BaseModel):
    model_config = ConfigDict(frozen=True)

    bipartition: str
    left_gen: tuple[int, int]
    right_gen: tuple[int, int]
    lambdas: tuple[float, float, float, float]
    # mayor autovalor de ρρ̃ más allá del cuarto
    residual: float = 0.0


class PairRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    spectrum: LambdaSpectrum
    concurrence: float


class BoundReport(BaseModel):
    dims: tuple[int, ...]
    tau: float
    kappa: float
    # peso efectivo de la suma: κ en N ≥ 3, 2κ en N = 2, 1 sin normalizar
    weight: float
    prefactor: float
    convention: Convention
    records: list[PairRecord] = Field(default_factory=list)

    def recompute_tau(self) -> float:
        squares = np.array([r.concurrence ** 2 for r in self.records], dtype=float)
        return float(self.prefactor * self.weight * np.sum(squares))

    @property
    def max_concurrence(self) -> float:
        return max((r.concurrence for r in self.records), default=0.0)

    @property
    def active_pairs(self) -> int:
        return sum(1 for r in self.records if r.concurrence > 0.0)


class PPTReport(BaseModel):
    # etiqueta del subconjunto transpuesto (partes desde 1) → autovalor mínimo
    min_eigenvalues: dict[str, float]
    passes: dict[str, bool]
    ppt: bool


class WitnessResult(BaseModel):
    value: float
    entangled: bool


class KFResult(BaseModel):
    kf_norm: float
    mode: int
    mode_norms: list[float]
    entangled: bool


class CriteriaReport(BaseModel):
    tau: float
    tau_convention: Convention
    tau_entangled: bool
    ppt: PPTReport
    witness: Optional[WitnessResult] = None
    kf: Optional[KFResult] = None


class ScanEvaluation(BaseModel):
    p: float
    value: float
    verdict: bool


class ScanResult(BaseModel):
    family: str
    detector: str
    threshold: float
    width: float
    iterations: int
    evaluations: list[ScanEvaluation]


class VerifyResult(BaseModel):
    tag: str
    trials: int
    seed: int
    dims: tuple[int, ...]
    checked: int
    max_violation: float
    tolerance: float
    passed: bool


class DistillReport(BaseModel):
    flag: bool
    tau_12: float
    tau_13: float
    tau_23: float
