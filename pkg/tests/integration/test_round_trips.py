import numpy as np
import pytest
from biunimodular.blocks import block2n_decompose, block2n_synthesize, u4_entries, u4_from_phases
from biunimodular.factorize import decompose, support_family, synthesize
from biunimodular.linalg import fourier_matrix, haar_random_unitary
from biunimodular.lowdim import euler_factor, euler_matrix, u2_biuni, u3_biuni_construct, u3_canonicalize, u3_matrix
from biunimodular.search import SearchConfig


def _seeds(root, count):
    return np.random.SeedSequence(root).spawn(count)


def _max_error(a, b):
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


@pytest.mark.parametrize("n", [2, 3, 4, 5, 8])
def test_recursive_round_trip(n, workers):
    cfg = SearchConfig(seed=n, workers=workers)
    for seed in _seeds(n, 50):
        a = haar_random_unitary(n, seed)
        assert _max_error(synthesize(decompose(a, cfg)).entries, a.entries) <= 1e-8


@pytest.mark.parametrize("size", [2, 4, 8, 16, 32, 64])
def test_block2n_round_trip(size):
    for seed in _seeds(100 + size, 20):
        u = haar_random_unitary(size, seed)
        parts = block2n_decompose(u)
        rebuilt = block2n_synthesize(parts.A.entries, parts.B.entries, parts.C.entries, parts.Z.entries)
        assert _max_error(rebuilt.entries, u.entries) <= 1e-8


def test_u3_round_trips():
    for seed in _seeds(3, 1_000):
        a = haar_random_unitary(3, seed)
        assert _max_error(u3_matrix(u3_canonicalize(a)).entries, a.entries) <= 1e-9
        factors = euler_factor(a)
        assert _max_error(euler_matrix(factors.x_form).entries, a.entries) <= 1e-9
        assert _max_error(euler_matrix(factors.z_form).entries, a.entries) <= 1e-9


def test_u4_printed_entries():
    rng = np.random.default_rng(4)
    for _ in range(1_000):
        q = {name: np.exp(2j * np.pi * rng.random(4)) for name in "abcz"}
        assert _max_error(u4_from_phases(**q).entries, u4_entries(**q)) <= 1e-12


def test_u2_closed_form():
    for seed in _seeds(2, 10_000):
        a = haar_random_unitary(2, seed)
        for v in u2_biuni(a).vectors:
            assert abs(np.sum(np.abs(a.entries @ v.entries)) - 2) <= 1e-12


def test_u3_construction():
    for seed in _seeds(33, 1_000):
        a = haar_random_unitary(3, seed)
        v = u3_biuni_construct(a)
        assert np.sum(np.abs(a.entries @ v.entries)) >= 3 - 1e-8


def test_fourier_four_family():
    family = support_family([1, 0, 1, 0], [0, 1, 0, -1])
    f4 = fourier_matrix(4).entries
    for z in np.exp(2j * np.pi * np.random.default_rng(44).random(1_000)):
        assert abs(np.sum(np.abs(f4 @ family(z).entries)) - 4) <= 1e-12
