# app/services/bounds.py
"""
Cotas inferiores de la concurrencia.

- pure_concurrence: concurrencia de estados puros a partir de purezas reducidas.
- lambda_spectrum / pair_concurrence: espectro λ de ρρ̃ para un operador S y
  el término max{0, λ1 − λ2 − λ3 − λ4}.
- tau_n: suma sobre biparticiones y pares de generadores, con el prefactor
  d/(2m(d−1)) y el peso κ.
- calibration_constant: mide κ sobre estados de Haar.

Convención de normalización: con generadores E_pq − E_qp sin normalizar,
Σ_{αβ} |⟨Ψ|S|Ψ*⟩|² = 2 (1 − Tr ρ_A²) en cada corte, así que κ = 1/2 lleva la
suma a la escala de 3 − Σ Tr ρ_i². Para dos partes el único corte se cuenta
en ambas orientaciones (peso 2κ): τ₂ coincide con el cuadrado de la
concurrencia de Wootters en qubits.
"""
from __future__ import annotations

import logging
from typing import Optional, Sequence, Union

import numpy as np
from joblib import Parallel, delayed
from threadpoolctl import threadpool_limits

from app.core.config import CLAMP_TOL, KAPPA, N_JOBS, RANK_TOL
from app.core.errors import InputError, NormalizationConventionError, SpectralContractError
from app.core.tensor import eig_real_spectrum, partial_trace, permute_subsystems, purity
from app.models.report import BoundReport, Convention, LambdaSpectrum, PairRecord
from app.models.state import DensityMatrix, PureState
from app.services.generators import (
    Bipartition,
    SOperator,
    enumerate_bipartitions,
    iter_bipartition_operators,
    iter_pair_operators,
)
from app.services.states import make_rng, haar_random_pure

logger = logging.getLogger(__name__)

CALIBRATION_SPREAD = 1e-8


# ─────────────────── Normalización ───────────────────

def equal_local_dims(dims: Sequence[int]) -> bool:
    return len(set(dims)) == 1


def normalization(dims: Sequence[int], kappa: float = KAPPA) -> tuple[float, float, Convention]:
    """(prefactor, peso, convención) para τ sobre `dims`."""
    n = len(dims)
    if not equal_local_dims(dims):
        return 1.0, 1.0, Convention.UNNORMALIZED
    d = dims[0]
    m = 2 ** (n - 1) - 1
    prefactor = d / (2 * m * (d - 1))
    if n == 2:
        return prefactor, 2 * kappa, Convention.BIPARTITE
    return prefactor, kappa, Convention.MULTIPARTITE


# ─────────────────── Estados puros ───────────────────

def _cut_linear_entropy(psi: PureState, bip: Bipartition) -> float:
    rho = psi.to_density().matrix
    return 1.0 - purity(partial_trace(rho, psi.dims, bip.left))


def pure_concurrence(psi: PureState) -> float:
    """
    C(|Ψ⟩) desde las purezas reducidas de cada corte.

    N ≥ 3: C² = d/(2m(d−1)) Σ_cortes (1 − Tr ρ_A²)   (para N = 3 es 3 − Σ Tr ρ_i²)
    N = 2: C² = d/(d−1) (1 − Tr ρ_A²)
    Con dimensiones locales distintas se omite el prefactor (C² = 2 Σ_cortes (1 − Tr ρ_A²)).
    """
    bips = enumerate_bipartitions(psi.n_parties)
    linear = float(np.sum([_cut_linear_entropy(psi, bip) for bip in bips]))
    # κ fijo en 1/2: la concurrencia pura no depende del κ configurado
    prefactor, weight, convention = normalization(psi.dims, kappa=0.5)
    if convention == Convention.UNNORMALIZED:
        logger.warning(f"⚠️  Dimensiones locales distintas {psi.dims}: concurrencia sin prefactor")
    return float(np.sqrt(max(prefactor * weight * 2.0 * linear, 0.0)))


def pure_concurrence_minors(psi: PureState) -> float:
    """
    Misma cantidad por suma directa de menores |a_{αβ} a_{α'β'} − a_{αβ'} a_{α'β}|².

    La suma recorre todos los índices ordenados (α, α', β, β'); cada menor
    aparece cuatro veces, por eso la suma total es 2 (1 − Tr ρ_A²).
    """
    total = 0.0
    for bip in enumerate_bipartitions(psi.n_parties):
        d_left, d_right = bip.side_dims(psi.dims)
        order = list(bip.left + bip.right)
        a = permute_subsystems(psi.amplitudes, psi.dims, order).reshape(d_left, d_right)
        minors = np.einsum("ab,cd->acbd", a, a) - np.einsum("ad,cb->acbd", a, a)
        total += float(np.sum(np.abs(minors) ** 2))
    prefactor, weight, _ = normalization(psi.dims, kappa=0.5)
    return float(np.sqrt(max(prefactor * weight * total, 0.0)))


def pure_pair_amplitude(psi: PureState, s: SOperator) -> float:
    """|⟨Ψ|S|Ψ*⟩|; vale 2 |menor| para el par de generadores de S."""
    v = psi.amplitudes
    return float(abs(v.conj() @ (s.matrix @ v.conj())))


# ─────────────────── Espectro λ ───────────────────

def spin_flip(rho: np.ndarray, s: SOperator) -> np.ndarray:
    """ρ̃ = S ρ* S (S es real)."""
    return s.matrix @ rho.conj() @ s.matrix


def lambda_spectrum(
    rho: DensityMatrix,
    s: SOperator,
    *,
    clamp_tol: float = CLAMP_TOL,
    rank_tol: Optional[float] = RANK_TOL,
) -> LambdaSpectrum:
    """
    Raíces de los cuatro mayores autovalores de ρρ̃, en orden descendente.

    Con `rank_tol` definido, cualquier autovalor 5..D por encima de la
    tolerancia aborta con SpectralContractError; con `None` sólo se registra.
    """
    if rho.dims != s.dims:
        raise InputError(f"El estado (dims {rho.dims}) y el operador (dims {s.dims}) no coinciden")
    product = rho.matrix @ spin_flip(rho.matrix, s)
    values = eig_real_spectrum(product, clamp_tol=clamp_tol)
    residual = float(values[4]) if values.shape[0] > 4 else 0.0
    if rank_tol is not None and residual > rank_tol:
        raise SpectralContractError(
            f"ρρ̃ para {s.key} tiene rango > 4: quinto autovalor {residual:.3e} > {rank_tol:.1e}"
        )
    top = np.zeros(4)
    top[: min(4, values.shape[0])] = values[:4]
    return LambdaSpectrum(
        bipartition=s.bipartition.label,
        left_gen=tuple(s.left_gen),
        right_gen=tuple(s.right_gen),
        lambdas=tuple(float(x) for x in np.sqrt(top)),
        residual=residual,
    )


def pair_concurrence(spec: LambdaSpectrum) -> float:
    l1, l2, l3, l4 = spec.lambdas
    return max(0.0, l1 - l2 - l3 - l4)


def _pair_record(rho: DensityMatrix, s: SOperator, rank_tol: Optional[float]) -> PairRecord:
    spec = lambda_spectrum(rho, s, rank_tol=rank_tol)
    concurrence = pair_concurrence(spec)
    logger.debug(f"{s.key}: λ = {spec.lambdas}, C = {concurrence:.3e}")
    return PairRecord(spectrum=spec, concurrence=concurrence)


# ─────────────────── τ_N ───────────────────

def tau_n(
    rho: Union[DensityMatrix, PureState],
    *,
    kappa: float = KAPPA,
    n_jobs: int = N_JOBS,
    rank_tol: Optional[float] = RANK_TOL,
) -> BoundReport:
    """
    τ_N(ρ) = prefactor · peso · Σ_p Σ_{αβ} (C_{αβ}^p)².

    Los pares (bipartición, generadores) se reparten entre `n_jobs` hilos; la
    suma final es siempre en el mismo orden, así el resultado es reproducible.
    """
    if isinstance(rho, PureState):
        rho = rho.to_density()
    if rho.n_parties < 2:
        raise InputError("τ requiere al menos dos partes")
    prefactor, weight, convention = normalization(rho.dims, kappa)
    if convention == Convention.UNNORMALIZED:
        logger.warning(f"⚠️  Dimensiones locales distintas {rho.dims}: τ se reporta sin normalizar")

    operators = iter_pair_operators(rho.dims)
    if n_jobs == 1:
        records = [_pair_record(rho, s, rank_tol) for s in operators]
    else:
        with threadpool_limits(limits=1):
            records = Parallel(n_jobs=n_jobs, prefer="threads")(
                delayed(_pair_record)(rho, s, rank_tol) for s in operators
            )

    squares = np.array([r.concurrence ** 2 for r in records], dtype=float)
    tau = float(prefactor * weight * np.sum(squares))
    logger.debug(f"τ sobre dims {rho.dims}: {tau:.6e} ({len(records)} pares, convención {convention.value})")
    return BoundReport(
        dims=rho.dims,
        tau=tau,
        kappa=kappa,
        weight=weight,
        prefactor=prefactor,
        convention=convention,
        records=records,
    )


def tau_two(rho: Union[DensityMatrix, PureState], **kwargs) -> BoundReport:
    """τ₂ para estados de dos partes."""
    if len(rho.dims) != 2:
        raise InputError(f"τ₂ requiere un estado bipartito, se recibió dims {rho.dims}")
    return tau_n(rho, **kwargs)


def tau_three(rho: Union[DensityMatrix, PureState], **kwargs) -> BoundReport:
    if len(rho.dims) != 3:
        raise InputError(f"τ₃ requiere un estado tripartito, se recibió dims {rho.dims}")
    return tau_n(rho, **kwargs)


def detects(report: BoundReport, tol: float) -> bool:
    """Algún par con C > tol; no depende del prefactor ni de κ."""
    return report.max_concurrence > tol


# ─────────────────── Identidades de traza ───────────────────

def pair_trace_sum(rho: DensityMatrix, bip: Bipartition) -> float:
    """Σ_{αβ} Tr(ρ ρ̃_{αβ}) sobre los pares de un corte; vale 1 − Tr ρ_A² − Tr ρ_B² + Tr ρ²."""
    total = 0.0
    for s in iter_bipartition_operators(bip, rho.dims):
        total += float(np.trace(rho.matrix @ spin_flip(rho.matrix, s)).real)
    return total


# ─────────────────── Calibración de κ ───────────────────

def calibration_constant(trials: int, seed: int, d: int = 2) -> float:
    """
    κ tal que κ Σ_{p,αβ} |⟨Ψ|S|Ψ*⟩|² = 3 − (Tr ρ_1² + Tr ρ_2² + Tr ρ_3²).

    Se mide sobre `trials` estados tripartitos de Haar; si la razón varía más
    de 1e-8 en términos relativos la enumeración de generadores está rota.
    """
    if trials < 1:
        raise InputError(f"trials debe ser ≥ 1, se recibió {trials}")
    rng = make_rng(seed)
    dims = (d, d, d)
    ratios = []
    for _ in range(trials):
        psi = haar_random_pure(dims, rng)
        rho = psi.to_density().matrix
        target = 3.0 - sum(purity(partial_trace(rho, dims, [k])) for k in range(3))
        total = float(np.sum([pure_pair_amplitude(psi, s) ** 2 for s in iter_pair_operators(dims)]))
        ratios.append(target / total)
    ratios = np.array(ratios)
    kappa = float(np.mean(ratios))
    spread = float((ratios.max() - ratios.min()) / abs(kappa))
    if spread >= CALIBRATION_SPREAD:
        raise NormalizationConventionError(
            f"La razón de calibración no es constante (dispersión relativa {spread:.3e})"
        )
    logger.info(f"✅ κ calibrado = {kappa:.12f} sobre {trials} estados (d={d}, dispersión {spread:.1e})")
    return kappa
