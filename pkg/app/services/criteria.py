# app/services/criteria.py
"""
Detectores de entrelazamiento con los que se compara la cota τ.

- ppt_check: positividad de la transpuesta parcial sobre cada subconjunto.
- witness_expectation: valor Tr(Wρ) de un testigo hermítico.
- correlation_tensor / kf_criterion: tensor de correlaciones de Pauli y la
  norma de Ky Fan máxima de sus desdoblamientos (sólo qubits).

Nota sobre el testigo ½I − |GHZ⟩⟨GHZ|: para la mezcla isotrópica del estado W
da (3 + p)/8 > 0 en todo [0, 1], así que nunca detecta esa familia; se
reporta el valor calculado tal cual.
"""
from __future__ import annotations

import logging
from itertools import combinations, product
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from app.core.config import DETECT_TOL, HERMITIAN_TOL, PPT_TOL
from app.core.errors import DimensionError, InputError
from app.core.tensor import is_hermitian, ket_to_density, min_eigenvalue, partial_transpose, singular_values
from app.models.report import CriteriaReport, KFResult, PPTReport, WitnessResult
from app.models.state import DensityMatrix
from app.services.bounds import detects, tau_n
from app.services.states import make_ghz

logger = logging.getLogger(__name__)

KF_TOL = 1e-9
TENSOR_TOL = 1e-10

# índice 1 → x, 2 → y, 3 → z (la identidad no participa)
PAULI = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)


class CorrelationTensor(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    values: np.ndarray

    @model_validator(mode="after")
    def _check(self) -> "CorrelationTensor":
        if any(s != 3 for s in self.values.shape):
            raise DimensionError(f"Cada índice del tensor de correlaciones va de 1 a 3: forma {self.values.shape}")
        if np.max(np.abs(self.values)) > 1.0 + TENSOR_TOL:
            raise InputError("Hay correlaciones fuera de [−1, 1]")
        return self

    @property
    def order(self) -> int:
        return self.values.ndim

    def at(self, *indices: int) -> float:
        """Acceso con índices de Pauli desde 1, como t_{α1…αN}."""
        return float(self.values[tuple(i - 1 for i in indices)])


def _subset_label(subset: tuple[int, ...]) -> str:
    return "".join(str(p + 1) for p in subset)


# ─────────────────── PPT ───────────────────

def ppt_check(rho: DensityMatrix, tol: float = PPT_TOL) -> PPTReport:
    n = rho.n_parties
    min_eigs: dict[str, float] = {}
    passes: dict[str, bool] = {}
    for size in range(1, n):
        for subset in combinations(range(n), size):
            lowest = min_eigenvalue(partial_transpose(rho.matrix, rho.dims, subset))
            label = _subset_label(subset)
            min_eigs[label] = lowest
            passes[label] = lowest >= -tol
    return PPTReport(min_eigenvalues=min_eigs, passes=passes, ppt=all(passes.values()))


# ─────────────────── Testigos ───────────────────

def ghz_witness(n: int = 3) -> np.ndarray:
    """½ I − |GHZ⟩⟨GHZ| sobre n qubits."""
    ghz = make_ghz(2, n)
    size = 2 ** n
    return 0.5 * np.eye(size) - ket_to_density(ghz.amplitudes)


def witness_expectation(rho: DensityMatrix, w: np.ndarray) -> WitnessResult:
    w = np.asarray(w, dtype=complex)
    if w.shape != rho.matrix.shape:
        raise DimensionError(f"El testigo {w.shape} no coincide con el estado {rho.matrix.shape}")
    if not is_hermitian(w, HERMITIAN_TOL):
        raise InputError("El testigo no es hermítico")
    value = float(np.trace(w @ rho.matrix).real)
    return WitnessResult(value=value, entangled=value < 0.0)


# ─────────────────── Criterio de la matriz de correlaciones ───────────────────

def correlation_tensor(rho: DensityMatrix) -> CorrelationTensor:
    """t_{α1…αN} = Tr(ρ σ_{α1} ⊗ … ⊗ σ_{αN})."""
    if any(d != 2 for d in rho.dims):
        raise InputError(f"El tensor de correlaciones sólo está definido para qubits, dims {rho.dims}")
    n = rho.n_parties
    values = np.zeros((3,) * n)
    for indices in product(range(3), repeat=n):
        op = PAULI[indices[0]]
        for k in indices[1:]:
            op = np.kron(op, PAULI[k])
        values[indices] = np.trace(rho.matrix @ op).real
    return CorrelationTensor(values=values)


def unfold(t: CorrelationTensor, mode: int) -> np.ndarray:
    """Matriz 3 × 3^{N−1}: filas = índice `mode`, columnas = resto con la parte menor más significativa."""
    if not 0 <= mode < t.order:
        raise InputError(f"Modo {mode} fuera de rango para un tensor de orden {t.order}")
    return np.moveaxis(t.values, mode, 0).reshape(3, -1)


def kf_criterion(t: CorrelationTensor, tol: float = KF_TOL) -> KFResult:
    norms = [float(np.sum(singular_values(unfold(t, mode)))) for mode in range(t.order)]
    mode = int(np.argmax(norms))
    kf = norms[mode]
    return KFResult(kf_norm=kf, mode=mode, mode_norms=norms, entangled=kf > 1.0 + tol)


# ─────────────────── Reporte combinado ───────────────────

def criteria_report(rho: DensityMatrix, witness: Optional[np.ndarray] = None) -> CriteriaReport:
    bound = tau_n(rho)
    kf = None
    if all(d == 2 for d in rho.dims):
        kf = kf_criterion(correlation_tensor(rho))
    return CriteriaReport(
        tau=bound.tau,
        tau_convention=bound.convention,
        tau_entangled=detects(bound, DETECT_TOL),
        ppt=ppt_check(rho),
        witness=witness_expectation(rho, witness) if witness is not None else None,
        kf=kf,
    )
