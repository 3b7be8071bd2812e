# app/services/analysis.py
"""
Análisis de alto nivel que consume la CLI.

- threshold_scan: umbral en p de un detector sobre una familia, por bisección.
- verify_suite: propiedades aleatorizadas de la cota (desigualdad de pares, identidad
  pura, separables, PPT, identidad de trazas, rango 4).
- criteria_compare: tabla comparativa de todos los detectores.
- distill_flag: condición suficiente para destilar GHZ desde un estado puro.
"""
from __future__ import annotations

import logging
from typing import Callable, Final, Optional, Sequence

import numpy as np
from tqdm import tqdm

from app.core.config import DETECT_TOL, KAPPA, SCAN_TOL
from app.core.errors import DetectorFailure, InputError
from app.core.tensor import min_eigenvalue, partial_trace, partial_transpose, purity
from app.models.report import (
    CriteriaReport,
    DistillReport,
    ScanEvaluation,
    ScanResult,
    VerifyResult,
)
from app.models.state import DensityMatrix, Family, PureState, StateFamily
from app.services.bounds import detects, pair_trace_sum, pure_concurrence, tau_n
from app.services.criteria import (
    correlation_tensor,
    criteria_report,
    ghz_witness,
    kf_criterion,
    ppt_check,
    witness_expectation,
)
from app.services.generators import compress_to_pair, enumerate_bipartitions, iter_pair_operators
from app.services.states import (
    family_density,
    haar_random_pure,
    make_rng,
    noisy_mixed,
    random_mixed,
    random_separable,
    reduced,
)

logger = logging.getLogger(__name__)

DETECTORS: Final[tuple[str, ...]] = ("tau3", "kf", "witness")
PRESCAN_POINTS: Final[int] = 11
MAX_BISECTIONS: Final[int] = 64

# tag → tolerancia de la propiedad
PROPERTIES: Final[dict[str, float]] = {
    "thm3": 1e-9,
    "pure-identity": 1e-9,
    "separable-zero": 1e-9,
    "ppt-zero": 1e-9,
    "ckw-identity": 1e-9,
    "rank4": 1e-8,
}


# ═══════════ Detectores sobre familias ═══════════

def detector_value(
    family: StateFamily,
    detector: str,
    p: float,
    witness: Optional[np.ndarray] = None,
    *,
    kappa: float = KAPPA,
) -> tuple[float, bool]:
    """Valor escalar y veredicto (`True` = entrelazado) del detector en p."""
    rho = family_density(family.with_p(p))
    if detector == "tau3":
        report = tau_n(rho, kappa=kappa)
        return report.tau, detects(report, DETECT_TOL)
    if detector == "kf":
        result = kf_criterion(correlation_tensor(rho))
        return result.kf_norm, result.entangled
    if detector == "witness":
        w = ghz_witness(rho.n_parties) if witness is None else witness
        result = witness_expectation(rho, w)
        return result.value, result.entangled
    raise InputError(f"Detector desconocido: {detector!r} (opciones: {', '.join(DETECTORS)})")


def _render_prescan(rows: list[ScanEvaluation]) -> str:
    lines = ["p        valor             veredicto"]
    lines += [f"{r.p:<8.3f} {r.value:<17.10g} {'entrelazado' if r.verdict else '-'}" for r in rows]
    return "\n".join(lines)


def monotone_prescan(
    evaluate: Callable[[float], ScanEvaluation],
    label: str,
    points: int = PRESCAN_POINTS,
) -> tuple[float, float]:
    """
    Evalúa `points` valores equiespaciados de p en [0, 1] y devuelve el
    intervalo (último falso, primer verdadero) donde cambia el veredicto.

    Si el veredicto no es monótono o no cambia, falla con la tabla completa.
    """
    grid = np.linspace(0.0, 1.0, points)
    rows = [evaluate(float(p)) for p in grid]
    verdicts = [r.verdict for r in rows]
    table = _render_prescan(rows)

    if any(a and not b for a, b in zip(verdicts, verdicts[1:])):
        raise DetectorFailure(f"El veredicto de {label} no es monótono en p:\n{table}")
    if verdicts[0] or not verdicts[-1]:
        logger.warning(f"⚠️  {label} no detecta en todo [0, 1]")
        raise DetectorFailure(f"{label} no cambia de veredicto en [0, 1]:\n{table}")

    first_true = verdicts.index(True)
    return float(grid[first_true - 1]), float(grid[first_true])


def threshold_scan(
    family: StateFamily,
    detector: str,
    tol: float = SCAN_TOL,
    witness: Optional[np.ndarray] = None,
    *,
    kappa: float = KAPPA,
) -> ScanResult:
    """
    Umbral p* donde el veredicto del detector pasa de falso a verdadero.

    Un pre-barrido de 11 puntos confirma que el veredicto es monótono en p;
    después se bisecta el intervalo que contiene el cambio hasta ancho ≤ tol.
    """
    if tol <= 0:
        raise InputError(f"La tolerancia debe ser positiva, se recibió {tol}")
    if family.family not in (Family.WMIX, Family.GHZMIX):
        raise InputError(f"Sólo se escanean familias con parámetro p (wmix, ghzmix), se recibió {family.family.value}")
    evaluations: list[ScanEvaluation] = []

    def evaluate(p: float) -> ScanEvaluation:
        value, verdict = detector_value(family, detector, p, witness, kappa=kappa)
        row = ScanEvaluation(p=p, value=value, verdict=verdict)
        logger.debug(f"{family.family.value}/{detector} p={p:.8f}: {value:.10g} ({verdict})")
        evaluations.append(row)
        return row

    lo, hi = monotone_prescan(evaluate, f"{detector} sobre {family.family.value}")
    iterations = 0
    while hi - lo > tol and iterations < MAX_BISECTIONS:
        mid = (lo + hi) / 2
        if evaluate(mid).verdict:
            hi = mid
        else:
            lo = mid
        iterations += 1

    threshold = (lo + hi) / 2
    logger.info(f"📈 {family.family.value}/{detector}: p* = {threshold:.6f} (ancho {hi - lo:.1e}, {iterations} bisecciones)")
    return ScanResult(
        family=family.family.value,
        detector=detector,
        threshold=threshold,
        width=hi - lo,
        iterations=iterations,
        evaluations=evaluations,
    )


# ═══════════ Propiedades aleatorizadas ═══════════

def _tau(rho, kappa: float) -> float:
    return tau_n(rho, kappa=kappa).tau


def _violation_pair_inequality(rng, dims, kappa) -> Optional[float]:
    psi = haar_random_pure(dims, rng)
    lhs = sum(_tau(reduced(psi, pair), kappa) for pair in ([0, 1], [0, 2], [1, 2]))
    return max(0.0, lhs - 3.0 * _tau(psi, kappa))


def _violation_pure_identity(rng, dims, kappa) -> Optional[float]:
    psi = haar_random_pure(dims, rng)
    return abs(_tau(psi, kappa) - pure_concurrence(psi) ** 2)


def _violation_separable_zero(rng, dims, kappa) -> Optional[float]:
    return _tau(random_separable(dims, rng), kappa)


def _violation_ppt_zero(rng, dims, kappa) -> Optional[float]:
    """τ de un estado PPT, junto con la parte negativa de cada bloque 2⊗2 transpuesto."""
    rho = noisy_mixed(dims, rng)
    if not ppt_check(rho).ppt:
        return None
    leak = 0.0
    for s in iter_pair_operators(dims):
        block = compress_to_pair(rho.matrix, s)
        leak = max(leak, -min_eigenvalue(partial_transpose(block, (2, 2), [1])))
    return max(_tau(rho, kappa), leak)


def _violation_trace_identity(rng, dims, kappa) -> Optional[float]:
    """|2κ Σ_{αβ} Tr(ρ_ij ρ̃_ij) − (1 − Tr ρ_i² − Tr ρ_j² + Tr ρ_k²)| sobre los tres pares."""
    psi = haar_random_pure(dims, rng)
    rho = psi.to_density().matrix
    purities = [purity(partial_trace(rho, dims, [k])) for k in range(3)]
    cut = enumerate_bipartitions(2)[0]
    worst = 0.0
    for i, j, k in ((0, 1, 2), (0, 2, 1), (1, 2, 0)):
        pair = reduced(psi, [i, j])
        lhs = 2.0 * kappa * pair_trace_sum(pair, cut)
        rhs = 1.0 - purities[i] - purities[j] + purities[k]
        worst = max(worst, abs(lhs - rhs))
    return worst


def _violation_rank4(rng, dims, kappa) -> Optional[float]:
    report = tau_n(random_mixed(dims, rng), kappa=kappa, rank_tol=None)
    return max(r.spectrum.residual for r in report.records)


SUITES: Final[dict[str, Callable]] = {
    "thm3": _violation_pair_inequality,
    "pure-identity": _violation_pure_identity,
    "separable-zero": _violation_separable_zero,
    "ppt-zero": _violation_ppt_zero,
    "ckw-identity": _violation_trace_identity,
    "rank4": _violation_rank4,
}


def verify_suite(
    prop: str,
    trials: int,
    seed: int,
    *,
    dims: Sequence[int] = (2, 2, 2),
    kappa: float = KAPPA,
    quiet: bool = True,
) -> VerifyResult:
    """Corre la propiedad `prop` sobre `trials` muestras y reporta la peor violación."""
    if prop not in SUITES:
        raise InputError(f"Propiedad desconocida: {prop!r} (opciones: {', '.join(SUITES)})")
    if trials < 1:
        raise InputError(f"trials debe ser ≥ 1, se recibió {trials}")
    dims = tuple(int(d) for d in dims)
    if prop in ("thm3", "ckw-identity") and len(dims) != 3:
        raise InputError(f"La propiedad {prop} es tripartita, se recibió dims {dims}")

    rng = make_rng(seed)
    suite = SUITES[prop]
    worst = 0.0
    checked = 0
    logger.info(f"🔬 Verificando {prop} con {trials} muestras (semilla {seed}, dims {dims})")
    for _ in tqdm(range(trials), desc=prop, disable=quiet):
        violation = suite(rng, dims, kappa)
        if violation is None:
            continue
        checked += 1
        worst = max(worst, violation)

    if checked == 0:
        raise DetectorFailure(
            f"{prop}: ninguna de las {trials} muestras fue aplicable (semilla {seed}); resultado no concluyente"
        )
    tolerance = PROPERTIES[prop]
    passed = worst <= tolerance
    if passed:
        logger.info(f"✅ {prop}: violación máxima {worst:.3e} ≤ {tolerance:.0e} ({checked} casos)")
    else:
        logger.warning(f"❌ {prop}: violación máxima {worst:.3e} > {tolerance:.0e}")
    return VerifyResult(
        tag=prop,
        trials=trials,
        seed=seed,
        dims=dims,
        checked=checked,
        max_violation=worst,
        tolerance=tolerance,
        passed=passed,
    )


# ═══════════ Comparación de detectores ═══════════

def render_criteria_table(report: CriteriaReport) -> str:
    def verdict(flag: bool) -> str:
        return "entrelazado" if flag else "no detectado"

    rows = [(f"tau ({report.tau_convention.value})", f"{report.tau:.10g}", verdict(report.tau_entangled))]
    worst_label = min(report.ppt.min_eigenvalues, key=report.ppt.min_eigenvalues.get)
    rows.append((
        f"ppt (min en T_{worst_label})",
        f"{report.ppt.min_eigenvalues[worst_label]:.10g}",
        "pasa" if report.ppt.ppt else "NPT: entrelazado",
    ))
    if report.witness is not None:
        rows.append(("witness", f"{report.witness.value:.10g}", verdict(report.witness.entangled)))
    if report.kf is not None:
        rows.append((f"kf (modo {report.kf.mode + 1})", f"{report.kf.kf_norm:.10g}", verdict(report.kf.entangled)))

    width = max(len(r[0]) for r in rows)
    lines = [f"{'detector':<{width}}  {'valor':<17}  veredicto", "-" * (width + 33)]
    lines += [f"{name:<{width}}  {value:<17}  {flag}" for name, value, flag in rows]
    return "\n".join(lines)


def criteria_compare(rho: DensityMatrix, witness: Optional[np.ndarray] = None) -> tuple[CriteriaReport, str]:
    report = criteria_report(rho, witness)
    return report, render_criteria_table(report)


# ═══════════ Destilación de GHZ ═══════════

def distill_flag(psi: PureState) -> DistillReport:
    """Verdadero si al menos dos de τ₂(ρ12), τ₂(ρ13), τ₂(ρ23) son positivos."""
    if psi.n_parties != 3:
        raise InputError(f"distill_flag requiere un estado puro tripartito, se recibió dims {psi.dims}")
    reports = [tau_n(reduced(psi, pair)) for pair in ([0, 1], [0, 2], [1, 2])]
    taus = [r.tau for r in reports]
    positive = sum(1 for r in reports if detects(r, DETECT_TOL))
    return DistillReport(flag=positive >= 2, tau_12=taus[0], tau_13=taus[1], tau_23=taus[2])
