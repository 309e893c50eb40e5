import numpy as np
import pytest
from biunimodular.errors import DimensionError, ValidationError
from biunimodular.linalg import fourier_matrix, haar_random_unitary
from biunimodular.manifold import (
    EPreset,
    e_presets,
    full_rank_witness,
    grid_axis,
    im_rank,
    jacobian_rank,
    phasing_dim,
    region_grid,
    triple_point_clusters,
)


def _two_by_two(z):
    return 0.5 * np.array([[1 + z, 1 - z], [1 - z, 1 + z]])


@pytest.mark.parametrize("n", [2, 3, 6])
def test_im_rank_identity(n):
    report = im_rank(np.eye(n))
    assert report.im_rank == 0
    assert report.jac_rank == (n - 1) ** 2 + n
    assert not report.full_rank


def test_im_rank_two_by_two():
    report = im_rank(_two_by_two(1j))
    assert report.im_rank == 1
    assert report.jac_rank == 4
    assert report.full_rank
    assert im_rank(_two_by_two(-1)).im_rank == 0


def test_im_rank_rejects_matrices_moving_ones():
    with pytest.raises(ValidationError):
        im_rank(fourier_matrix(3))


def test_jacobian_rank_matches_formula():
    for s in (np.eye(3), _two_by_two(1j), _two_by_two(-1)):
        assert jacobian_rank(s) == im_rank(s).jac_rank


@pytest.mark.parametrize("n", range(2, 11))
def test_full_rank_witness(n):
    witness = full_rank_witness(n)
    report = im_rank(witness)
    assert report.im_rank == n - 1
    assert report.jac_rank == n * n
    assert np.allclose(witness.entries @ np.ones(n), np.ones(n))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_witness_jacobian_computed_directly(n):
    assert jacobian_rank(full_rank_witness(n)) == n * n


def test_full_rank_witness_needs_two():
    with pytest.raises(DimensionError):
        full_rank_witness(1)


@pytest.mark.parametrize("n", [2, 3, 5])
def test_phasing_dim_fourier(n):
    report = phasing_dim(fourier_matrix(n))
    assert report.manifold_dim == 2 * n - 1
    assert report.stabilizer_dim == 0


@pytest.mark.parametrize("n", [2, 4, 7])
def test_phasing_dim_diagonal(n):
    assert phasing_dim(np.eye(n)).manifold_dim == n
    phases = np.exp(1j * np.linspace(0.1, 2.0, n))
    report = phasing_dim(np.diag(phases))
    assert report.manifold_dim == n
    assert report.stabilizer_dim == n - 1


def test_grid_axis():
    axis = grid_axis(16)
    assert axis[0] == -np.pi
    assert axis[-1] < np.pi
    assert np.allclose(np.diff(axis), 2 * np.pi / 16)


def test_region_grid_identity():
    grid = region_grid(np.eye(3), resolution=32)
    assert grid.values[0].all()
    assert grid.covered
    assert triple_point_clusters(grid) == 0


def test_region_grid_haar_is_covered():
    grid = region_grid(haar_random_unitary(3, 1), resolution=64)
    assert len(grid.values) == 3
    assert grid.covered


def test_region_grid_validation():
    with pytest.raises(ValidationError):
        region_grid(np.eye(3), resolution=8)
    with pytest.raises(ValidationError):
        region_grid(np.eye(3), resolution=32, preset="disc")
    with pytest.raises(DimensionError):
        region_grid(np.eye(4), resolution=32)


def test_e_preset_grid():
    preset = EPreset(s=1, t=1)
    grid = region_grid(None, resolution=16, preset=preset)
    assert grid.preset == preset.label
    assert len(grid.values) == 1
    # (x, y) = (-pi, -pi) gives -1 - 1 + 1
    assert not grid.values[0][0, 0]
    assert grid.values[0][8, 8]
    with pytest.raises(ValidationError):
        triple_point_clusters(grid)


def test_e_preset_validation():
    with pytest.raises(ValidationError):
        EPreset(s=0, t=1)


def test_e_presets_of_fourier():
    presets = e_presets(fourier_matrix(3))
    assert len(presets) == 3
    for preset in presets:
        assert preset.s == pytest.approx(1)
        assert preset.t == pytest.approx(1)
    with pytest.raises(ValidationError):
        e_presets(np.eye(3))
