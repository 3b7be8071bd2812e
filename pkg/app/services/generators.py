# app/services/generators.py
"""
Biparticiones, generadores antisimétricos de SO(D) y operadores S_{αβ}^p.

- Una bipartición A|B tiene siempre la parte 0 en A (forma canónica).
- El generador (p, q) es E_pq − E_qp, sin normalizar (entradas ±1).
- S = L_α ⊗ L_β se arma en el orden (A, B) y se devuelve al orden canónico
  de las partes, así que la base de cada lado es lexicográfica sobre sus
  partes en orden ascendente.

Los operadores se generan de a uno (`iter_pair_operators`), nunca todos juntos.
"""
from __future__ import annotations

import logging
from itertools import combinations
from math import prod
from typing import Iterator, NamedTuple, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from app.core.errors import DimensionError, InputError
from app.core.tensor import as_dims, check_square, invert_permutation, kron, permute_subsystems

logger = logging.getLogger(__name__)


class Bipartition(BaseModel):
    model_config = ConfigDict(frozen=True)

    left: tuple[int, ...]
    right: tuple[int, ...]

    @model_validator(mode="after")
    def _check(self) -> "Bipartition":
        parties = sorted(self.left + self.right)
        if not self.left or not self.right:
            raise InputError("Los dos lados de una bipartición deben ser no vacíos")
        if parties != list(range(len(parties))):
            raise InputError(f"La bipartición {self.left}|{self.right} no cubre las partes 0..N-1 sin repetir")
        if tuple(sorted(self.left)) != self.left or tuple(sorted(self.right)) != self.right:
            raise InputError("Los lados de una bipartición deben estar ordenados")
        if 0 not in self.left:
            raise InputError("Forma canónica: la parte 0 va en el lado izquierdo")
        return self

    @property
    def n_parties(self) -> int:
        return len(self.left) + len(self.right)

    @property
    def label(self) -> str:
        """Etiqueta con partes numeradas desde 1, p. ej. '13|2'."""
        return "".join(str(p + 1) for p in self.left) + "|" + "".join(str(p + 1) for p in self.right)

    def side_dims(self, dims: Sequence[int]) -> tuple[int, int]:
        return prod(dims[p] for p in self.left), prod(dims[p] for p in self.right)


class GeneratorIndex(NamedTuple):
    p: int
    q: int


class SOperator(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    bipartition: Bipartition
    left_gen: GeneratorIndex
    right_gen: GeneratorIndex
    dims: tuple[int, ...]
    matrix: np.ndarray

    @property
    def key(self) -> str:
        return f"{self.bipartition.label}:{tuple(self.left_gen)}x{tuple(self.right_gen)}"


# ─────────────────── Enumeraciones ───────────────────

def enumerate_bipartitions(n: int) -> list[Bipartition]:
    """Las 2^{n−1} − 1 biparticiones canónicas, en orden lexicográfico del lado izquierdo."""
    if n < 2:
        raise InputError(f"Hacen falta al menos 2 partes, se recibió {n}")
    lefts = []
    rest = list(range(1, n))
    for size in range(0, n - 1):
        for combo in combinations(rest, size):
            lefts.append((0,) + combo)
    return [
        Bipartition(left=left, right=tuple(p for p in range(n) if p not in left))
        for left in sorted(lefts)
    ]


def generator_indices(dim: int) -> list[GeneratorIndex]:
    return [GeneratorIndex(p, q) for p, q in combinations(range(dim), 2)]


def so_generator(dim: int, idx: GeneratorIndex | tuple[int, int]) -> np.ndarray:
    """E con E[p, q] = 1, E[q, p] = −1 y ceros en el resto."""
    p, q = idx
    if not 0 <= p < q < dim:
        raise InputError(f"Índice de generador {tuple(idx)} inválido para dimensión {dim}")
    gen = np.zeros((dim, dim))
    gen[p, q] = 1.0
    gen[q, p] = -1.0
    return gen


def pair_count(dims: Sequence[int]) -> int:
    dims = as_dims(dims)
    total = 0
    for bip in enumerate_bipartitions(len(dims)):
        d_left, d_right = bip.side_dims(dims)
        total += d_left * (d_left - 1) // 2 * d_right * (d_right - 1) // 2
    return total


# ─────────────────── Operadores embebidos ───────────────────

def embed_pair_operator(
    bip: Bipartition,
    left_idx: GeneratorIndex | tuple[int, int],
    right_idx: GeneratorIndex | tuple[int, int],
    dims: Sequence[int],
) -> SOperator:
    dims = as_dims(dims)
    if bip.n_parties != len(dims):
        raise DimensionError(f"La bipartición {bip.label} no corresponde a {len(dims)} partes")
    d_left, d_right = bip.side_dims(dims)
    grouped = kron(so_generator(d_left, left_idx), so_generator(d_right, right_idx))
    order = list(bip.left + bip.right)
    if order != sorted(order):
        # el kron está en el orden (A, B); se vuelve al orden canónico
        grouped = permute_subsystems(grouped, [dims[p] for p in order], invert_permutation(order))
    grouped.flags.writeable = False
    return SOperator(
        bipartition=bip,
        left_gen=GeneratorIndex(*left_idx),
        right_gen=GeneratorIndex(*right_idx),
        dims=dims,
        matrix=grouped,
    )


def iter_bipartition_operators(bip: Bipartition, dims: Sequence[int]) -> Iterator[SOperator]:
    d_left, d_right = bip.side_dims(dims)
    for left_idx in generator_indices(d_left):
        for right_idx in generator_indices(d_right):
            yield embed_pair_operator(bip, left_idx, right_idx, dims)


def iter_pair_operators(dims: Sequence[int]) -> Iterator[SOperator]:
    """Todos los S_{αβ}^p: biparticiones en orden canónico, pares en orden lexicográfico."""
    dims = as_dims(dims)
    for bip in enumerate_bipartitions(len(dims)):
        yield from iter_bipartition_operators(bip, dims)


def compress_to_pair(rho: np.ndarray, s: SOperator) -> np.ndarray:
    """
    Bloque 4x4 de ρ sobre el soporte 2⊗2 de S (lado izquierdo ⊗ lado derecho).

    Es la matriz que aparece al proyectar ρ con L_α ⊗ L_β; su positividad bajo
    transposición parcial es la que anula el término correspondiente de τ.
    """
    dims = check_square(rho, s.dims)
    bip = s.bipartition
    d_left, d_right = bip.side_dims(dims)
    order = list(bip.left + bip.right)
    grouped = permute_subsystems(rho, dims, order).reshape(d_left, d_right, d_left, d_right)
    a = list(s.left_gen)
    b = list(s.right_gen)
    block = grouped[np.ix_(a, b, a, b)]
    return block.reshape(4, 4)
