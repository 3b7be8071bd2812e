import inspect

import numpy as np
import pytest

from app.core.errors import InputError
from app.services.generators import (
    Bipartition,
    GeneratorIndex,
    compress_to_pair,
    embed_pair_operator,
    enumerate_bipartitions,
    generator_indices,
    iter_pair_operators,
    pair_count,
    so_generator,
)
from app.services.states import random_mixed


def test_bipartitions_of_three_parties():
    labels = [b.label for b in enumerate_bipartitions(3)]
    assert labels == ["1|23", "12|3", "13|2"]


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_bipartition_count(n):
    bips = enumerate_bipartitions(n)
    assert len(bips) == 2 ** (n - 1) - 1
    assert all(0 in b.left for b in bips)


def test_bipartition_validation():
    with pytest.raises(InputError):
        Bipartition(left=(1,), right=(0, 2))
    with pytest.raises(InputError):
        Bipartition(left=(0, 1), right=(1, 2))
    with pytest.raises(InputError):
        Bipartition(left=(0, 1, 2), right=())
    with pytest.raises(InputError):
        enumerate_bipartitions(1)


def test_generator_indices_are_lexicographic():
    assert generator_indices(3) == [GeneratorIndex(0, 1), GeneratorIndex(0, 2), GeneratorIndex(1, 2)]
    assert len(generator_indices(4)) == 6


def test_so_generator_is_antisymmetric():
    gen = so_generator(3, (0, 2))
    assert gen[0, 2] == 1.0 and gen[2, 0] == -1.0
    assert np.count_nonzero(gen) == 2
    assert np.array_equal(gen, -gen.T)
    with pytest.raises(InputError):
        so_generator(3, (2, 1))
    with pytest.raises(InputError):
        so_generator(2, (0, 2))


@pytest.mark.parametrize("dims, expected", [((2, 2), 1), ((2, 2, 2), 18), ((3, 3, 3), 324), ((2, 3), 3)])
def test_pair_count(dims, expected):
    assert pair_count(dims) == expected


def test_operators_are_lazy_and_complete():
    operators = iter_pair_operators((2, 2, 2))
    assert inspect.isgenerator(operators)
    per_cut = {}
    for s in operators:
        per_cut[s.bipartition.label] = per_cut.get(s.bipartition.label, 0) + 1
    assert per_cut == {"1|23": 6, "12|3": 6, "13|2": 6}


def test_operators_are_real_symmetric_rank_four():
    for s in iter_pair_operators((2, 3)):
        assert np.isrealobj(s.matrix)
        assert np.array_equal(s.matrix, s.matrix.T)
        assert np.linalg.matrix_rank(s.matrix) == 4
        assert not s.matrix.flags.writeable


def test_non_adjacent_bipartition_embedding():
    bip = Bipartition(left=(0, 2), right=(1,))
    dims = (2, 2, 2)
    left, right = (1, 3), (0, 1)
    s = embed_pair_operator(bip, left, right, dims)

    l_a = so_generator(4, left)
    l_b = so_generator(2, right)
    expected = np.zeros((8, 8))
    for i0 in range(2):
        for i1 in range(2):
            for i2 in range(2):
                for j0 in range(2):
                    for j1 in range(2):
                        for j2 in range(2):
                            row = 4 * i0 + 2 * i1 + i2
                            col = 4 * j0 + 2 * j1 + j2
                            expected[row, col] = l_a[2 * i0 + i2, 2 * j0 + j2] * l_b[i1, j1]
    assert np.array_equal(s.matrix, expected)
    assert s.key == "13|2:(1, 3)x(0, 1)"


def test_compress_to_pair_block():
    rho = random_mixed((3, 3), 2).matrix
    s = embed_pair_operator(Bipartition(left=(0,), right=(1,)), (0, 2), (1, 2), (3, 3))
    block = compress_to_pair(rho, s)
    rows = [3 * a + b for a in (0, 2) for b in (1, 2)]
    assert block.shape == (4, 4)
    assert np.allclose(block, rho[np.ix_(rows, rows)])
