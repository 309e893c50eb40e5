import numpy as np
import pytest
from biunimodular.errors import DimensionError, ValidationError
from biunimodular.linalg import (
    ComplexVector,
    TorusVector,
    UnitaryMatrix,
    block_diag_repeat,
    fourier_matrix,
    haar_random_unitary,
    inf_to_1_value,
    polar_decompose,
    sign1_map,
    sign_map,
    unitarity_residual,
)

from .conftest import max_abs

sign_cases = [
    ([3, -2j], [1, -1j]),
    ([0, 5], [0, 1]),
    ([-4, 1 + 1j], [-1, (1 + 1j) / np.sqrt(2)]),
]

sign1_cases = [
    ([0, 0], [1, 1]),
    ([2j, 0, -1], [1j, 1, -1]),
]


def test_fourier_matrix_small_sizes():
    assert max_abs(fourier_matrix(1).entries, [[1]]) == 0
    expected = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    assert max_abs(fourier_matrix(2).entries, expected) <= 1e-15


def test_fourier_matrix_quarter_turns_are_exact():
    scaled = fourier_matrix(4).entries * 2
    expected = np.array(
        [
            [1, 1, 1, 1],
            [1, -1j, -1, 1j],
            [1, -1, 1, -1],
            [1, 1j, -1, -1j],
        ]
    )
    assert np.array_equal(scaled, expected)
    assert np.all(fourier_matrix(2).entries.imag == 0)
    assert np.all(fourier_matrix(8).entries[2].real[[1, 3, 5, 7]] == 0)


def test_fourier_matrix_two_has_exact_zero_image():
    image = fourier_matrix(2).entries @ np.ones(2)
    assert image[1] == 0
    assert np.all(sign_map(image).entries == [1, 0])


def test_fourier_matrix_even_support():
    image = fourier_matrix(4).entries @ np.array([1, 0, 1, 0])
    assert np.all(image[[1, 3]] == 0)
    moduli = np.abs(image)
    assert np.allclose(moduli[[0, 2]], moduli[0], atol=1e-12)


@pytest.mark.parametrize("n", [0, -3])
def test_fourier_matrix_rejects_bad_size(n):
    with pytest.raises(DimensionError):
        fourier_matrix(n)


def test_fourier_matrix_large_n_is_unitary():
    assert fourier_matrix(101).unitarity_residual <= 1e-12


def test_haar_scalar_is_unimodular():
    u = haar_random_unitary(1, 123)
    assert abs(abs(u.entries[0, 0]) - 1) <= 1e-14


def test_haar_is_unitary_and_reproducible():
    first = haar_random_unitary(5, 7)
    second = haar_random_unitary(5, 7)
    assert first.unitarity_residual <= 1e-12
    assert np.array_equal(first.entries, second.entries)
    assert not np.array_equal(first.entries, haar_random_unitary(5, 8).entries)


def test_haar_accepts_seed_sequence():
    seq = np.random.SeedSequence([1, 2, 3])
    assert np.array_equal(
        haar_random_unitary(4, seq).entries,
        haar_random_unitary(4, np.random.SeedSequence([1, 2, 3])).entries,
    )


def test_haar_entry_statistics():
    samples = np.array([np.abs(haar_random_unitary(25, seed).entries) ** 2 for seed in range(200)])
    assert abs(samples.mean() - 1 / 25) <= 0.05 / 25


def test_polar_of_identity():
    factors = polar_decompose(np.eye(3))
    assert max_abs(factors.psd.entries, np.eye(3)) <= 1e-14
    assert max_abs(factors.unitary.entries, np.eye(3)) <= 1e-14


def test_polar_of_singular_diagonal():
    factors = polar_decompose(np.diag([2.0, 0.0]))
    assert max_abs(factors.psd.entries, np.diag([2.0, 0.0])) <= 1e-14
    assert max_abs(factors.unitary.entries, np.eye(2)) <= 1e-14


def test_polar_reconstructs_random_matrix():
    rng = np.random.default_rng(3)
    m = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
    factors = polar_decompose(m)
    psd = factors.psd.entries
    assert max_abs(psd @ factors.unitary.entries, m) <= 1e-9
    assert max_abs(psd, psd.conj().T) <= 1e-12
    assert np.linalg.eigvalsh(psd).min() >= -1e-10


def test_polar_rejects_non_square():
    with pytest.raises(DimensionError):
        polar_decompose(np.ones((2, 3)))


@pytest.mark.parametrize("values,expected", sign_cases)
def test_sign_map(values, expected):
    assert max_abs(sign_map(values).entries, expected) <= 1e-15


@pytest.mark.parametrize("values,expected", sign1_cases)
def test_sign1_map(values, expected):
    result = sign1_map(values)
    assert isinstance(result, TorusVector)
    assert max_abs(result.entries, expected) <= 1e-15


def test_sign_moduli_are_zero_or_one():
    rng = np.random.default_rng(0)
    v = rng.standard_normal(50) + 1j * rng.standard_normal(50)
    v[::7] = 0
    moduli = np.abs(sign_map(v).entries)
    assert np.all((moduli == 0) | (np.abs(moduli - 1) <= 1e-15))


def test_sign1_is_nearest_torus_point():
    rng = np.random.default_rng(1)
    v = rng.standard_normal(20) + 1j * rng.standard_normal(20)
    distance = np.linalg.norm(v - sign1_map(v).entries)
    assert abs(distance - np.linalg.norm(np.abs(v) - 1)) <= 1e-12


def test_inf_to_1_value(f2, f7, bjorck7):
    assert inf_to_1_value(np.eye(4), np.ones(4)) == pytest.approx(4)
    assert inf_to_1_value(f2, [1, 1]) == pytest.approx(np.sqrt(2), abs=1e-15)
    assert abs(inf_to_1_value(f7, bjorck7) - 7) <= 1e-12


def test_inf_to_1_value_dimension_mismatch(f2):
    with pytest.raises(DimensionError):
        inf_to_1_value(f2, np.ones(3))


def test_block_diag_repeat():
    assert max_abs(block_diag_repeat([[1]], 3).entries, np.eye(3)) == 0
    a = block_diag_repeat(fourier_matrix(2), 2)
    assert a.n == 4
    v = np.array([1, 1j, 1, -1j])
    assert abs(inf_to_1_value(a, v) - 4) <= 1e-12


def test_block_diag_value_is_additive():
    # the best value over the torus is attained blockwise
    grid = np.exp(1j * np.linspace(0, 2 * np.pi, 721))
    f2 = fourier_matrix(2).entries
    best_block = max(inf_to_1_value(f2, [1, d]) for d in grid)
    a = block_diag_repeat(f2, 2)
    best_pair = max(inf_to_1_value(a, [1, d, 1, d]) for d in grid)
    assert abs(best_pair - 2 * best_block) <= 1e-9


def test_unitary_matrix_validation():
    with pytest.raises(ValidationError):
        UnitaryMatrix([[1, 1], [0, 1]])
    with pytest.raises(DimensionError):
        UnitaryMatrix(np.ones((2, 3)))
    loose = UnitaryMatrix(np.eye(2) * (1 + 1e-9), tolerance=1e-8)
    assert loose.unitarity_residual == pytest.approx(unitarity_residual(loose.entries))


def test_vectors_are_immutable():
    v = ComplexVector([1, 2])
    with pytest.raises(ValueError):
        v.entries[0] = 3
    with pytest.raises(ValidationError):
        TorusVector([1, 2])
    with pytest.raises(ValidationError):
        ComplexVector([1, np.nan])


def test_torus_vector_normalized():
    v = TorusVector([1j, -1]).normalized()
    assert max_abs(v.entries, [1, 1j]) <= 1e-15
