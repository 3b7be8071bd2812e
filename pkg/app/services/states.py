# app/services/states.py
"""
Construcción y muestreo de estados.

- Familias canónicas: GHZ, W, Bell, producto y sus mezclas isotrópicas.
- Muestreo de Haar (gaussianas complejas normalizadas) y mezclas aleatorias
  con pesos Dirichlet uniformes, separables o no.

El generador aleatorio es PCG64 de numpy; `RNG_VERSION` identifica el
algoritmo en los reportes para que las semillas sean reproducibles.
"""
from __future__ import annotations

import logging
from math import prod
from typing import Final, Optional, Sequence, Union

import numpy as np

from app.core.errors import InputError
from app.core.tensor import as_dims, ket_to_density, partial_trace
from app.models.state import DensityMatrix, Family, PureState, StateFamily

logger = logging.getLogger(__name__)

RNG_VERSION: Final[str] = "pcg64-v1"

Seed = Union[int, np.random.Generator]


def make_rng(seed: Seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(int(seed)))


# ─────────────────── Familias canónicas ───────────────────

def make_ghz(d: int, n: int) -> PureState:
    """(1/√d) Σ_i |i…i⟩ sobre n partes de dimensión d."""
    if d < 2 or n < 2:
        raise InputError(f"GHZ requiere d ≥ 2 y n ≥ 2 (d={d}, n={n})")
    amps = np.zeros(d ** n, dtype=complex)
    step = sum(d ** k for k in range(n))  # índice de |i…i⟩ = i·(1 + d + … + d^{n-1})
    amps[np.arange(d) * step] = 1.0 / np.sqrt(d)
    return PureState(amplitudes=amps, dims=(d,) * n)


def make_w(n: int) -> PureState:
    """Superposición uniforme de los n estados de peso uno (qubits)."""
    if n < 2:
        raise InputError(f"W requiere n ≥ 2 (n={n})")
    amps = np.zeros(2 ** n, dtype=complex)
    amps[[2 ** k for k in range(n)]] = 1.0 / np.sqrt(n)
    return PureState(amplitudes=amps, dims=(2,) * n)


def make_bell(d: int = 2) -> PureState:
    return make_ghz(d, 2)


def make_product(dims: Sequence[int], seed: Optional[Seed] = None) -> PureState:
    """|0…0⟩ si no hay semilla; si no, producto de vectores locales de Haar."""
    dims = as_dims(dims)
    if seed is None:
        amps = np.zeros(prod(dims), dtype=complex)
        amps[0] = 1.0
        return PureState(amplitudes=amps, dims=dims)
    rng = make_rng(seed)
    amps = np.ones(1, dtype=complex)
    for d in dims:
        amps = np.kron(amps, _haar_vector(rng, d))
    return PureState(amplitudes=amps / np.linalg.norm(amps), dims=dims)


def isotropic_mix(psi: PureState, p: float) -> DensityMatrix:
    """(1−p)/D · I_D + p·|ψ⟩⟨ψ|."""
    if not 0.0 <= p <= 1.0:
        raise InputError(f"El parámetro p debe estar en [0, 1], se recibió {p}")
    size = psi.amplitudes.shape[0]
    matrix = (1.0 - p) / size * np.eye(size, dtype=complex) + p * ket_to_density(psi.amplitudes)
    return DensityMatrix(matrix=matrix, dims=psi.dims)


def family_pure(family: StateFamily) -> PureState:
    """Estado puro de referencia de una familia (el que se mezcla con ruido)."""
    dims = family.dims
    if family.family in (Family.GHZ, Family.GHZMIX, Family.BELL):
        return make_ghz(dims[0], len(dims))
    if family.family in (Family.W, Family.WMIX):
        return make_w(len(dims))
    return make_product(dims)


def family_state(family: StateFamily) -> Union[PureState, DensityMatrix]:
    """Materializa la familia: puro si no hay p, mezcla isotrópica si lo hay."""
    psi = family_pure(family)
    if family.p is None:
        return psi
    return isotropic_mix(psi, family.p)


def family_density(family: StateFamily) -> DensityMatrix:
    state = family_state(family)
    return state.to_density() if isinstance(state, PureState) else state


# ─────────────────── Muestreo aleatorio ───────────────────

def _haar_vector(rng: np.random.Generator, size: int) -> np.ndarray:
    v = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    return v / np.linalg.norm(v)


def haar_random_pure(dims: Sequence[int], seed: Seed) -> PureState:
    dims = as_dims(dims)
    return PureState(amplitudes=_haar_vector(make_rng(seed), prod(dims)), dims=dims)


def _mixture(vectors: list[np.ndarray], weights: np.ndarray) -> np.ndarray:
    rho = sum(w * np.outer(v, v.conj()) for w, v in zip(weights, vectors))
    rho = (rho + rho.conj().T) / 2
    return rho / np.trace(rho).real


def random_mixed(dims: Sequence[int], seed: Seed, k: Optional[int] = None) -> DensityMatrix:
    """Σ_{i≤k} w_i |φ_i⟩⟨φ_i| con pesos Dirichlet uniformes y φ_i de Haar (k = D por defecto)."""
    dims = as_dims(dims)
    size = prod(dims)
    k = size if k is None else int(k)
    if k < 1:
        raise InputError(f"k debe ser ≥ 1, se recibió {k}")
    rng = make_rng(seed)
    weights = rng.dirichlet(np.ones(k))
    vectors = [_haar_vector(rng, size) for _ in range(k)]
    return DensityMatrix(matrix=_mixture(vectors, weights), dims=dims)


def random_separable(dims: Sequence[int], seed: Seed, k: Optional[int] = None) -> DensityMatrix:
    """Mezcla Dirichlet de k productos ⊗_j |φ_ij⟩⟨φ_ij| con vectores locales de Haar."""
    dims = as_dims(dims)
    k = prod(dims) if k is None else int(k)
    if k < 1:
        raise InputError(f"k debe ser ≥ 1, se recibió {k}")
    rng = make_rng(seed)
    weights = rng.dirichlet(np.ones(k))
    vectors = []
    for _ in range(k):
        v = np.ones(1, dtype=complex)
        for d in dims:
            v = np.kron(v, _haar_vector(rng, d))
        vectors.append(v)
    return DensityMatrix(matrix=_mixture(vectors, weights), dims=dims)


def noisy_mixed(dims: Sequence[int], seed: Seed) -> DensityMatrix:
    """(1−q)·I/D + q·random_mixed con q uniforme en [0, 1]."""
    dims = as_dims(dims)
    rng = make_rng(seed)
    q = rng.uniform()
    size = prod(dims)
    core = random_mixed(dims, rng).matrix
    return DensityMatrix(matrix=(1.0 - q) / size * np.eye(size) + q * core, dims=dims)


# ─────────────────── Reducciones ───────────────────

def reduced(state: Union[PureState, DensityMatrix], keep: Sequence[int]) -> DensityMatrix:
    """Matriz densidad reducida sobre las partes de `keep` (índices desde 0)."""
    rho = state.to_density() if isinstance(state, PureState) else state
    keep = sorted(set(keep))
    matrix = partial_trace(rho.matrix, rho.dims, keep)
    return DensityMatrix(matrix=(matrix + matrix.conj().T) / 2, dims=tuple(rho.dims[p] for p in keep))
