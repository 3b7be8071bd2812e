import io

import numpy as np
import pytest

from app.core.errors import DimensionError, InputError, StateFormatError
from app.core.tensor import is_hermitian, min_eigenvalue, permute_subsystems, purity
from app.models.state import DensityMatrix, Family, PureState, StateFamily
from app.services.criteria import ghz_witness
from app.services.states import (
    family_density,
    family_state,
    haar_random_pure,
    isotropic_mix,
    make_ghz,
    make_product,
    make_w,
    noisy_mixed,
    random_mixed,
    random_separable,
    reduced,
)
from app.utils.state_io import dumps_state, load_state, load_witness, save_state, save_witness, state_io


# ─────────────────── Familias ───────────────────

def test_ghz_amplitudes():
    ghz = make_ghz(2, 3)
    expected = np.zeros(8)
    expected[[0, 7]] = 1 / np.sqrt(2)
    assert np.allclose(ghz.amplitudes, expected)

    qutrit = make_ghz(3, 3)
    assert np.flatnonzero(np.abs(qutrit.amplitudes) > 0).tolist() == [0, 13, 26]


def test_w_amplitudes():
    w = make_w(3)
    assert np.flatnonzero(np.abs(w.amplitudes) > 0).tolist() == [1, 2, 4]
    assert np.allclose(w.amplitudes[[1, 2, 4]], 1 / np.sqrt(3))


def test_product_default_is_all_zeros():
    psi = make_product((2, 3))
    assert psi.amplitudes[0] == 1.0
    assert purity(reduced(make_product((2, 2, 2), seed=4), [0]).matrix) == pytest.approx(1.0)


def test_isotropic_mix_endpoints(ghz3):
    assert np.allclose(isotropic_mix(ghz3, 0.0).matrix, np.eye(8) / 8)
    assert np.allclose(isotropic_mix(ghz3, 1.0).matrix, ghz3.to_density().matrix)


def test_isotropic_mix_is_affine_in_p(w3):
    ends = isotropic_mix(w3, 0.0).matrix, isotropic_mix(w3, 1.0).matrix
    for p in (0.1, 0.37, 0.8):
        expected = (1 - p) * ends[0] + p * ends[1]
        assert np.max(np.abs(isotropic_mix(w3, p).matrix - expected)) <= 1e-14


def test_half_mixed_w_spectrum(w3):
    rho = isotropic_mix(w3, 0.5).matrix
    assert np.trace(rho).real == pytest.approx(1.0)
    assert np.allclose(np.linalg.eigvalsh(rho), [1 / 16] * 7 + [9 / 16])


@pytest.mark.parametrize("psi", [make_ghz(2, 3), make_w(3), make_ghz(3, 3)])
@pytest.mark.parametrize("perm", [(0, 2, 1), (1, 0, 2), (2, 0, 1), (2, 1, 0)])
def test_symmetric_families_survive_permutation(psi, perm):
    projector = psi.to_density().matrix
    moved = permute_subsystems(projector, psi.dims, perm)
    assert np.max(np.abs(moved - projector)) <= 1e-14


def test_family_state_pure_or_mixed():
    assert isinstance(family_state(StateFamily(family=Family.W)), PureState)
    mixed = family_state(StateFamily(family=Family.GHZMIX, p=0.3))
    assert isinstance(mixed, DensityMatrix)
    assert family_density(StateFamily(family=Family.BELL, dims=(2, 2))).dims == (2, 2)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"family": "wmix"},
        {"family": "ghzmix", "p": 1.5},
        {"family": "w", "dims": (3, 3, 3)},
        {"family": "bell", "dims": (2, 2, 2)},
        {"family": "ghz", "dims": (2, 3)},
        {"family": "wmix", "p": 0.5, "dims": (2, 2)},
    ],
)
def test_family_validation(kwargs):
    with pytest.raises(InputError):
        StateFamily(**kwargs)


# ─────────────────── Muestreo ───────────────────

def test_haar_is_reproducible_per_seed():
    a = haar_random_pure((2, 2, 2), 42)
    b = haar_random_pure((2, 2, 2), 42)
    c = haar_random_pure((2, 2, 2), 43)
    assert np.array_equal(a.amplitudes, b.amplitudes)
    assert not np.allclose(a.amplitudes, c.amplitudes)


def test_haar_mean_reduced_purity():
    # E[Tr ρ_A²] = (d_A + d_B) / (d_A d_B + 1) = 4/5 para dos qubits
    rng = np.random.default_rng(0)
    values = [purity(reduced(haar_random_pure((2, 2), rng), [0]).matrix) for _ in range(2000)]
    assert np.mean(values) == pytest.approx(0.8, abs=0.02)


@pytest.mark.parametrize("sampler", [random_mixed, random_separable, noisy_mixed])
def test_random_states_are_valid(sampler):
    rho = sampler((2, 2, 2), 9)
    assert is_hermitian(rho.matrix, 1e-12)
    assert np.trace(rho.matrix).real == pytest.approx(1.0)
    assert min_eigenvalue(rho.matrix) > -1e-12


def test_random_mixed_rank():
    rho = random_mixed((2, 2), 3, k=2)
    assert np.linalg.matrix_rank(rho.matrix, tol=1e-10) == 2


def test_reduced_ghz_is_maximally_mixed(ghz3):
    assert np.allclose(reduced(ghz3, [0]).matrix, np.eye(2) / 2)
    assert reduced(ghz3, [0, 2]).dims == (2, 2)


def test_state_models_reject_invalid_input():
    with pytest.raises(InputError):
        PureState(amplitudes=[1.0, 1.0], dims=(2,))
    with pytest.raises(DimensionError):
        PureState(amplitudes=[1.0, 0.0, 0.0], dims=(2, 2))
    with pytest.raises(InputError):
        DensityMatrix(matrix=np.diag([1.5, -0.5]), dims=(2,))
    with pytest.raises(InputError):
        DensityMatrix(matrix=[[0.5, 0.1], [0.0, 0.5]], dims=(2,))
    with pytest.raises(DimensionError):
        DensityMatrix(matrix=np.eye(4) / 4, dims=(2, 3))


def test_states_are_immutable(ghz3):
    with pytest.raises(ValueError):
        ghz3.amplitudes[0] = 0.0


# ─────────────────── Formato QSTATE ───────────────────

def test_density_file_reproduces_every_entry(tmp_path):
    rho = random_mixed((2, 3), 17)
    path = tmp_path / "rho.qstate"
    save_state(rho, path, comment="mezcla")
    loaded = load_state(path)
    assert isinstance(loaded, DensityMatrix)
    assert loaded.dims == (2, 3)
    assert np.array_equal(loaded.matrix, rho.matrix)


def test_pure_file_loads_as_pure(w3):
    loaded = state_io(io.StringIO(dumps_state(w3)), "load")
    assert isinstance(loaded, PureState)
    assert np.allclose(loaded.amplitudes, w3.amplitudes)


@pytest.mark.parametrize(
    "text",
    [
        "QSTATE 2\nkind pure\ndims 2\n1 0\n0 0\n",
        "QSTATE 1\nkind mixed\ndims 2\n1 0\n0 0\n",
        "QSTATE 1\nkind pure\ndims 2 x\n1 0\n0 0\n",
        "QSTATE 1\nkind pure\ndims 2\n1 0\n",
        "QSTATE 1\nkind pure\ndims 2\n1 0\n0\n",
        "QSTATE 1\nkind pure\ndims 2\n1 0\nuno 0\n",
        "QSTATE 1\nkind pure\ndims 2\n0.9 0\n0 0\n",
        "QSTATE 1\nkind density\ndims 2\n1 0\n0 0\n0 0\n1 0\n",
        "QSTATE 1\nkind pure\ndims 2 2 2\n1 0\n0 0\n0 0\n0 0\n0 0\n0 0\n0 0\n",
    ],
)
def test_malformed_files_are_rejected(text):
    with pytest.raises(StateFormatError):
        load_state(io.StringIO(text))


def test_load_renormalizes_within_tolerance():
    text = "QSTATE 1\nkind pure\ndims 2\n1.000000001 0\n0 0\n"
    psi = load_state(io.StringIO(text))
    assert np.vdot(psi.amplitudes, psi.amplitudes).real == pytest.approx(1.0, abs=1e-15)


def test_witness_files(tmp_path):
    path = tmp_path / "w.qstate"
    save_witness(ghz_witness(3), (2, 2, 2), path)
    matrix, dims = load_witness(path)
    assert dims == (2, 2, 2)
    assert np.allclose(matrix, ghz_witness(3))

    bad = "QSTATE 1\n# witness\nkind density\ndims 2\n0 0\n1 0\n0 0\n0 0\n"
    with pytest.raises(StateFormatError):
        load_witness(io.StringIO(bad))
