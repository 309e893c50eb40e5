from biunimodular.api import regions
from biunimodular.linalg import fourier_matrix, haar_random_unitary


def test_fourier_three_has_six_triple_points(tmp_path):
    grid, clusters = regions(fourier_matrix(3), resolution=512, out_dir=str(tmp_path))
    assert grid.covered
    assert clusters == 6
    assert (tmp_path / "regions_r3.pgm").exists()


def test_haar_regions_cover_the_torus():
    for seed in range(20):
        grid, _ = regions(haar_random_unitary(3, seed), resolution=256)
        assert grid.covered
