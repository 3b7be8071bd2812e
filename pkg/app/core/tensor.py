# app/core/tensor.py
"""
Álgebra lineal densa y manipulación de índices multipartitos.

Convenciones fijas para todo el paquete:

- Las matrices son `numpy.ndarray` complejos densos, en orden fila-mayor.
- Indexado big-endian: la parte 0 es el índice más significativo, de modo que
  `reshape(dims)` de un vector de amplitudes da el tensor a_{i1 i2 ... iN}.
- Las partes se numeran desde 0 en el código; las etiquetas visibles
  (por ejemplo "12|3") usan la numeración desde 1.

Todas las funciones son puras: nunca modifican sus argumentos.
"""
from __future__ import annotations

import logging
from math import prod
from typing import Iterable, Sequence

import numpy as np
from scipy import linalg

from app.core.config import CLAMP_TOL
from app.core.errors import DimensionError, InputError, SpectralContractError

logger = logging.getLogger(__name__)

Dims = tuple[int, ...]


# ─────────────────── Validaciones ───────────────────

def as_dims(dims: Iterable[int]) -> Dims:
    """Normaliza una lista de dimensiones y exige d_i ≥ 2."""
    out = tuple(int(d) for d in dims)
    if not out:
        raise DimensionError("La lista de dimensiones está vacía")
    if any(d < 2 for d in out):
        raise DimensionError(f"Cada subsistema debe tener dimensión ≥ 2: {out}")
    return out


def check_square(m: np.ndarray, dims: Sequence[int]) -> Dims:
    dims = as_dims(dims)
    total = prod(dims)
    if m.ndim != 2 or m.shape != (total, total):
        raise DimensionError(f"Se esperaba una matriz {total}x{total} para dims {dims}, se recibió {m.shape}")
    return dims


def _check_parties(parties: Iterable[int], n: int) -> list[int]:
    out = sorted(set(int(p) for p in parties))
    if any(p < 0 or p >= n for p in out):
        raise DimensionError(f"Índices de parte fuera de rango para {n} partes: {out}")
    return out


# ─────────────────── Operaciones básicas ───────────────────

def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(a, b)


def ket_to_density(amplitudes: np.ndarray) -> np.ndarray:
    v = np.asarray(amplitudes, dtype=complex).reshape(-1)
    return np.outer(v, v.conj())


def purity(rho: np.ndarray) -> float:
    # Tr ρ² = Σ |ρ_ij|² para ρ hermítica
    return float(np.sum(np.abs(rho) ** 2))


def is_hermitian(m: np.ndarray, tol: float) -> bool:
    return m.ndim == 2 and m.shape[0] == m.shape[1] and bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= tol)


def min_eigenvalue(m: np.ndarray) -> float:
    """Menor autovalor de la parte hermítica de `m`."""
    h = (m + m.conj().T) / 2
    return float(linalg.eigvalsh(h)[0])


# ─────────────────── Reordenamiento de subsistemas ───────────────────

def permute_subsystems(m: np.ndarray, dims: Sequence[int], perm: Sequence[int]) -> np.ndarray:
    """
    Reordena los factores tensoriales de un operador (o de un vector).

    `perm[k]` es la parte original que queda en la posición k, igual que
    `numpy.transpose`. Para vectores de amplitudes se acepta `m.ndim == 1`.
    """
    dims = as_dims(dims)
    n = len(dims)
    perm = [int(p) for p in perm]
    if sorted(perm) != list(range(n)):
        raise DimensionError(f"La permutación {perm} no es una biyección sobre {n} partes")
    total = prod(dims)
    new_dims = [dims[p] for p in perm]
    if m.ndim == 1:
        if m.shape != (total,):
            raise DimensionError(f"Vector de largo {m.shape[0]} incompatible con dims {dims}")
        return m.reshape(dims).transpose(perm).reshape(total)
    check_square(m, dims)
    axes = perm + [n + p for p in perm]
    return m.reshape(dims + dims).transpose(axes).reshape(prod(new_dims), prod(new_dims))


def invert_permutation(perm: Sequence[int]) -> list[int]:
    inv = [0] * len(perm)
    for k, p in enumerate(perm):
        inv[p] = k
    return inv


# ─────────────────── Traza y transpuesta parciales ───────────────────

def partial_trace(rho: np.ndarray, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Traza parcial que conserva las partes de `keep`, en orden ascendente."""
    dims = check_square(rho, dims)
    n = len(dims)
    keep = _check_parties(keep, n)
    if not keep:
        raise InputError("El conjunto de partes a conservar no puede estar vacío")
    traced = [p for p in range(n) if p not in keep]
    if not traced:
        return rho.copy()
    d_keep = prod(dims[p] for p in keep)
    d_traced = prod(dims[p] for p in traced)
    ordered = permute_subsystems(rho, dims, keep + traced)
    return np.einsum("ajbj->ab", ordered.reshape(d_keep, d_traced, d_keep, d_traced))


def partial_transpose(rho: np.ndarray, dims: Sequence[int], subset: Iterable[int]) -> np.ndarray:
    """Transpone sólo los índices de las partes de `subset`."""
    dims = check_square(rho, dims)
    n = len(dims)
    subset = _check_parties(subset, n)
    axes = list(range(2 * n))
    for p in subset:
        axes[p], axes[n + p] = axes[n + p], axes[p]
    total = prod(dims)
    return rho.reshape(dims + dims).transpose(axes).reshape(total, total)


# ─────────────────── Espectros ───────────────────

def eig_real_spectrum(m: np.ndarray, clamp_tol: float = CLAMP_TOL) -> np.ndarray:
    """
    Autovalores de un producto de dos matrices PSD (espectro real ≥ 0).

    Las partes imaginarias deben ser ≤ clamp_tol; si no, el origen es un bug
    de hermiticidad/positividad aguas arriba y se lanza SpectralContractError.
    Partes reales por debajo de clamp_tol se fijan en 0. Orden descendente.
    """
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"Se esperaba una matriz cuadrada, se recibió {m.shape}")
    values = linalg.eigvals(m)
    residue = float(np.max(np.abs(values.imag), initial=0.0))
    if residue > clamp_tol:
        raise SpectralContractError(
            f"Autovalor con parte imaginaria {residue:.3e} > {clamp_tol:.1e}: "
            "la matriz no es producto de dos matrices PSD"
        )
    real = values.real.copy()
    real[real < clamp_tol] = 0.0
    return np.sort(real)[::-1]


def hermitian_sqrt_spectrum(rho: np.ndarray, rho_tilde: np.ndarray) -> np.ndarray:
    """Espectro de √ρ ρ̃ √ρ (ruta hermítica equivalente a ρρ̃), descendente."""
    w, v = linalg.eigh((rho + rho.conj().T) / 2)
    root = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    h = root @ rho_tilde @ root
    values = linalg.eigvalsh((h + h.conj().T) / 2)
    return np.sort(np.clip(values, 0.0, None))[::-1]


def singular_values(m: np.ndarray) -> np.ndarray:
    return np.sort(linalg.svdvals(m))[::-1]
