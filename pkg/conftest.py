import numpy as np
import pytest
from click.testing import CliRunner
from scipy.linalg import sqrtm

from app.models.state import DensityMatrix, PureState
from app.services.states import make_bell, make_ghz, make_w
from app.utils.state_io import save_state

SIGMA_Y = np.array([[0, -1j], [1j, 0]])


def wootters_concurrence(rho: np.ndarray) -> float:
    """Concurrencia de Wootters por la ruta √ρ ρ̃ √ρ; admite bloques sin normalizar."""
    yy = np.kron(SIGMA_Y, SIGMA_Y)
    tilde = yy @ rho.conj() @ yy
    root = sqrtm(rho)
    lambdas = np.sqrt(np.clip(np.linalg.eigvalsh(root @ tilde @ root), 0.0, None))[::-1]
    return max(0.0, lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3])


@pytest.fixture
def wootters():
    return wootters_concurrence


@pytest.fixture
def ghz3() -> PureState:
    return make_ghz(2, 3)


@pytest.fixture
def w3() -> PureState:
    return make_w(3)


@pytest.fixture
def bell() -> PureState:
    return make_bell(2)


@pytest.fixture
def maximally_mixed3() -> DensityMatrix:
    return DensityMatrix(matrix=np.eye(8) / 8, dims=(2, 2, 2))


@pytest.fixture
def runner() -> CliRunner:
    # stdout limpio para parsear JSON; los logs van a stderr
    try:
        return CliRunner(mix_stderr=False)
    except TypeError:  # click >= 8.2 always keeps stderr separate
        return CliRunner()


@pytest.fixture
def state_file(tmp_path):
    """Guarda un estado en tmp_path y devuelve la ruta."""
    def _write(state, name: str = "state.qstate") -> str:
        path = tmp_path / name
        save_state(state, path)
        return str(path)

    return _write
