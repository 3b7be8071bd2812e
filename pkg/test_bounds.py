import logging

import numpy as np
import pytest

from app.core.errors import InputError, NormalizationConventionError, SpectralContractError
from app.core.tensor import hermitian_sqrt_spectrum
from app.models.report import Convention
from app.models.state import DensityMatrix
from app.services import bounds
from app.services.bounds import (
    calibration_constant,
    detects,
    lambda_spectrum,
    normalization,
    pair_concurrence,
    pure_concurrence,
    pure_concurrence_minors,
    pure_pair_amplitude,
    spin_flip,
    tau_n,
    tau_three,
    tau_two,
)
from app.services.generators import Bipartition, GeneratorIndex, SOperator, compress_to_pair, iter_pair_operators
from app.services.states import (
    haar_random_pure,
    isotropic_mix,
    make_ghz,
    make_w,
    random_mixed,
    random_separable,
    reduced,
)


# ─────────────────── Normalización ───────────────────

@pytest.mark.parametrize(
    "dims, prefactor, weight, convention",
    [
        ((2, 2, 2), 1 / 3, 0.5, Convention.MULTIPARTITE),
        ((3, 3, 3), 0.25, 0.5, Convention.MULTIPARTITE),
        ((2, 2, 2, 2), 1 / 7, 0.5, Convention.MULTIPARTITE),
        ((2, 2), 1.0, 1.0, Convention.BIPARTITE),
        ((2, 3), 1.0, 1.0, Convention.UNNORMALIZED),
    ],
)
def test_normalization_conventions(dims, prefactor, weight, convention):
    got_prefactor, got_weight, got_convention = normalization(dims)
    assert got_prefactor == pytest.approx(prefactor)
    assert got_weight == pytest.approx(weight)
    assert got_convention == convention


# ─────────────────── Estados puros ───────────────────

def test_pure_concurrence_of_reference_states(ghz3, w3, bell):
    assert pure_concurrence(ghz3) == pytest.approx(np.sqrt(0.5))
    assert pure_concurrence(w3) == pytest.approx(2 / 3)
    assert pure_concurrence(bell) == pytest.approx(1.0)
    assert pure_concurrence(make_ghz(3, 3)) == pytest.approx(np.sqrt(0.5))


@pytest.mark.parametrize("dims", [(2, 2), (2, 2, 2), (3, 3, 3), (2, 2, 2, 2), (2, 3)])
def test_minor_sum_matches_purity_form(dims):
    for seed in range(3):
        psi = haar_random_pure(dims, seed)
        assert pure_concurrence_minors(psi) == pytest.approx(pure_concurrence(psi), abs=1e-12)


def test_pair_amplitude_is_twice_the_minor():
    psi = haar_random_pure((2, 2), 8)
    a = psi.tensor()
    (s,) = list(iter_pair_operators((2, 2)))
    assert pure_pair_amplitude(psi, s) == pytest.approx(2 * abs(a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]))


def test_unequal_dims_warn(caplog):
    with caplog.at_level(logging.WARNING):
        pure_concurrence(haar_random_pure((2, 3), 0))
    assert "Dimensiones locales distintas" in caplog.text


# ─────────────────── Espectro λ ───────────────────

def test_maximally_mixed_has_flat_spectrum(maximally_mixed3):
    for s in iter_pair_operators((2, 2, 2)):
        spec = lambda_spectrum(maximally_mixed3, s)
        assert np.allclose(spec.lambdas, 1 / 8)
        assert pair_concurrence(spec) == 0.0
    assert tau_n(maximally_mixed3).tau == 0.0


def test_lambda_spectrum_matches_hermitian_route():
    rho = random_mixed((2, 2, 2), 21)
    for s in iter_pair_operators(rho.dims):
        spec = lambda_spectrum(rho, s)
        reference = np.sqrt(hermitian_sqrt_spectrum(rho.matrix, spin_flip(rho.matrix, s))[:4])
        assert np.allclose(spec.lambdas, reference, atol=1e-8)


def test_rank_contract():
    rho = DensityMatrix(matrix=np.eye(8) / 8, dims=(2, 2, 2))
    full_rank = SOperator(
        bipartition=Bipartition(left=(0,), right=(1, 2)),
        left_gen=GeneratorIndex(0, 1),
        right_gen=GeneratorIndex(0, 1),
        dims=(2, 2, 2),
        matrix=np.eye(8),
    )
    with pytest.raises(SpectralContractError):
        lambda_spectrum(rho, full_rank)
    spec = lambda_spectrum(rho, full_rank, rank_tol=None)
    assert spec.residual == pytest.approx(1 / 64)


def test_pair_concurrence_is_wootters_of_the_compressed_block(wootters):
    rho = random_mixed((2, 2, 2), 13)
    for s in iter_pair_operators(rho.dims):
        block = compress_to_pair(rho.matrix, s)
        assert pair_concurrence(lambda_spectrum(rho, s)) == pytest.approx(wootters(block), abs=1e-8)


def test_lambda_spectrum_checks_dims(bell):
    s = next(iter_pair_operators((2, 2, 2)))
    with pytest.raises(InputError):
        lambda_spectrum(bell.to_density(), s)


# ─────────────────── τ ───────────────────

def test_tau_two_is_squared_wootters_concurrence(wootters):
    for seed in range(10):
        rho = random_mixed((2, 2), seed)
        assert tau_two(rho).tau == pytest.approx(wootters(rho.matrix) ** 2, abs=1e-8)
    # Werner-like mezcla con concurrencia positiva
    bell = np.zeros((4, 4), dtype=complex)
    bell[np.ix_([0, 3], [0, 3])] = 0.5
    werner = DensityMatrix(matrix=0.8 * bell + 0.2 * np.eye(4) / 4, dims=(2, 2))
    assert tau_two(werner).tau == pytest.approx(wootters(werner.matrix) ** 2, abs=1e-10)
    assert tau_two(werner).tau == pytest.approx(0.7 ** 2)


def test_tau_of_reference_states(ghz3, w3, bell):
    assert tau_three(ghz3).tau == pytest.approx(0.5)
    assert tau_three(w3).tau == pytest.approx(4 / 9)
    assert tau_two(bell).tau == pytest.approx(1.0)
    assert tau_n(make_ghz(3, 3)).tau == pytest.approx(0.5)


def test_pure_states_saturate_the_bound():
    for seed in range(5):
        psi = haar_random_pure((2, 2, 2), seed)
        assert tau_n(psi).tau == pytest.approx(pure_concurrence(psi) ** 2, abs=1e-9)


def test_w_state_is_tight(w3):
    pairs = [tau_two(reduced(w3, pair)).tau for pair in ([0, 1], [0, 2], [1, 2])]
    assert pairs == pytest.approx([4 / 9] * 3)
    assert sum(pairs) == pytest.approx(3 * tau_three(w3).tau)


def test_ghz_reductions_have_zero_bound(ghz3):
    for pair in ([0, 1], [0, 2], [1, 2]):
        assert tau_two(reduced(ghz3, pair)).tau == pytest.approx(0.0, abs=1e-12)


def test_separable_states_have_zero_bound():
    for seed in range(5):
        assert tau_n(random_separable((2, 2, 2), seed)).tau <= 1e-9


def test_report_bookkeeping(w3):
    report = tau_three(w3)
    assert len(report.records) == 18
    assert report.recompute_tau() == pytest.approx(report.tau)
    assert report.active_pairs > 0
    assert report.convention == Convention.MULTIPARTITE


def test_report_keeps_kappa_apart_from_weight(bell):
    report = tau_two(bell, kappa=0.5)
    assert report.kappa == 0.5
    assert report.weight == 1.0
    assert tau_three(make_w(3), kappa=0.5).weight == 0.5


@pytest.mark.parametrize("make_psi", [lambda: make_ghz(2, 3), lambda: make_w(3)])
def test_tau_is_monotone_under_mixing(make_psi):
    psi = make_psi()
    taus = [tau_n(isotropic_mix(psi, p)).tau for p in np.linspace(0.0, 1.0, 101)]
    assert all(b >= a - 1e-12 for a, b in zip(taus, taus[1:]))
    assert taus[0] == 0.0


def test_detection_does_not_depend_on_kappa():
    psi = make_w(3)
    for p in np.linspace(0.0, 1.0, 41):
        rho = isotropic_mix(psi, p)
        assert detects(tau_n(rho, kappa=0.5), 1e-9) == detects(tau_n(rho, kappa=1.0), 1e-9)
    # justo por encima de 3/11 τ es diminuto pero ya hay un par con C > 0
    barely = tau_n(isotropic_mix(psi, 3 / 11 + 1e-6))
    assert barely.tau < 1e-9
    assert detects(barely, 1e-9)


def test_threads_do_not_change_the_result():
    rho = random_mixed((2, 2, 2), 5)
    assert tau_n(rho, n_jobs=2).tau == tau_n(rho, n_jobs=1).tau


def test_party_count_checks(ghz3, bell):
    with pytest.raises(InputError):
        tau_two(ghz3)
    with pytest.raises(InputError):
        tau_three(bell)


def test_unequal_dims_are_unnormalized():
    report = tau_n(haar_random_pure((2, 3), 1))
    assert report.convention == Convention.UNNORMALIZED
    assert report.prefactor == 1.0


# ─────────────────── Calibración ───────────────────

def test_calibration_recovers_kappa():
    assert calibration_constant(trials=5, seed=1) == pytest.approx(0.5, abs=1e-10)
    assert calibration_constant(trials=2, seed=2, d=3) == pytest.approx(0.5, abs=1e-10)


def test_calibration_detects_broken_enumeration(monkeypatch):
    calls = {"n": 0}
    original = bounds.pure_pair_amplitude

    def skewed(psi, s):
        calls["n"] += 1
        # rompe la constante a partir del segundo estado
        return original(psi, s) * (1.0 if calls["n"] <= 18 else 1.1)

    monkeypatch.setattr(bounds, "pure_pair_amplitude", skewed)
    with pytest.raises(NormalizationConventionError):
        calibration_constant(trials=3, seed=0)
