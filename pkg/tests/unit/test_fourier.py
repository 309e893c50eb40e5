import numpy as np
import pytest
from biunimodular.errors import DimensionError, NotBiunimodularError, ValidationError
from biunimodular.fourier import (
    Generator,
    autocorr_residual,
    bjorck_sequence,
    census,
    cyclic_root_residual,
    gauss_sequence,
    gn_action,
    group_order,
    legendre,
    orbit_distance,
    orbit_of,
    reference_orbit_lengths,
)
from biunimodular.linalg import fourier_matrix
from biunimodular.search import SearchConfig

from .conftest import OMEGA3, l1_value, max_abs

OMEGA5 = np.exp(2j * np.pi / 5)

nontrivial_generators = [
    Generator("shift", 3),
    Generator("modulation", 2),
    Generator("dilation", 3),
    Generator("dilation", 6),
    Generator("conjugation"),
    Generator("fourier"),
]

identity_generators = [
    Generator("shift", 0),
    Generator("modulation", 0),
    Generator("dilation", 1),
]


def test_gauss_canonical_three():
    u = gauss_sequence(3, lam=1, mu=1).vector
    assert max_abs(u.entries, [1, OMEGA3**2, 1]) <= 1e-15


def test_gauss_even_branch():
    u = gauss_sequence(4).vector
    assert abs(l1_value(fourier_matrix(4).entries, u.entries) - 4) <= 1e-12


def test_gauss_five():
    expected = [1, OMEGA5, OMEGA5**4, OMEGA5**4, OMEGA5]
    assert max_abs(gauss_sequence(5, lam=1, mu=0).vector.entries, expected) <= 1e-14
    shifted = gauss_sequence(5, lam=1, mu=1).vector
    assert orbit_distance(orbit_of(shifted), orbit_of(expected)) <= 1e-12


@pytest.mark.parametrize("n", range(1, 13))
def test_gauss_is_biunimodular(n):
    assert autocorr_residual(gauss_sequence(n).vector) <= 1e-12


def test_gauss_validation():
    with pytest.raises(ValidationError):
        gauss_sequence(4, lam=2)
    with pytest.raises(ValidationError):
        gauss_sequence(5, mu=7)
    with pytest.raises(ValidationError):
        gauss_sequence(5, c=2)


def test_legendre_symbol():
    assert [legendre(k, 7) for k in range(1, 7)] == [1, 1, -1, 1, -1, -1]
    assert legendre(0, 5) == 0
    residues = {k * k % 23 for k in range(1, 23)}
    expected = [1 if k in residues else -1 for k in range(1, 23)]
    assert [legendre(k, 23) for k in range(1, 23)] == expected
    assert legendre(30, 7) == legendre(2, 7)


def test_bjorck_seven():
    seq = bjorck_sequence(7)
    expected = complex(-3 / 4, np.sqrt(7) / 4)
    pattern = [1, 1, 1, expected, 1, expected, expected]
    assert max_abs(seq.vector.entries, pattern) <= 1e-15
    assert seq.parameters[1] == "3 mod 4"


def test_bjorck_three():
    entries = bjorck_sequence(3).vector.entries
    assert max_abs(entries, [1, 1, OMEGA3]) <= 1e-15


@pytest.mark.parametrize("p", [5, 13])
def test_bjorck_one_mod_four(p):
    seq = bjorck_sequence(p)
    assert seq.parameters[1] == "1 mod 4"
    assert seq.parameters[2] == pytest.approx(np.arccos(1 / (np.sqrt(p) + 1)))
    assert autocorr_residual(seq.vector) <= 1e-12


@pytest.mark.parametrize("p", [1, 2, 9, 15])
def test_bjorck_rejects_non_primes(p):
    with pytest.raises(ValidationError):
        bjorck_sequence(p)


def test_autocorr_residual(bjorck7):
    assert autocorr_residual([1, 1]) == pytest.approx(2)
    assert autocorr_residual([1, 1j]) <= 1e-15
    assert autocorr_residual(bjorck7) <= 1e-12
    assert autocorr_residual([1]) == 0


def test_cyclic_root_residual(bjorck7):
    assert cyclic_root_residual([1, 1]) == pytest.approx(2)
    assert cyclic_root_residual([1, OMEGA3**2, 1]) <= 1e-12
    assert cyclic_root_residual(bjorck7) <= 1e-10


@pytest.mark.parametrize(
    "n,order",
    [
        (1, 4),
        (2, 16),
        (6, 4 * 36 * 2),
        (7, 4 * 49 * 6),
        (12, 4 * 144 * 4),
    ],
)
def test_group_order(n, order):
    assert group_order(n) == order


@pytest.mark.parametrize("g", nontrivial_generators)
def test_generators_keep_bjorck_seven_biunimodular(g, bjorck7):
    image = gn_action(bjorck7, g)
    assert autocorr_residual(image) <= 1e-8
    assert abs(l1_value(fourier_matrix(7).entries, image.entries) - 7) <= 1e-8


@pytest.mark.parametrize("g", identity_generators)
def test_trivial_generators(g):
    u = gauss_sequence(5).vector
    assert max_abs(gn_action(u, g).entries, u.entries) <= 1e-15


def test_conjugation():
    assert max_abs(gn_action([1, 1j], Generator("conjugation")).entries, [1, -1j]) <= 1e-15


def test_fourier_of_gauss_is_gauss():
    image = gn_action(gauss_sequence(5).vector, Generator("fourier")).entries
    candidates = [
        gauss_sequence(5, lam, mu).vector.entries for lam in range(1, 5) for mu in range(5)
    ]
    assert min(max_abs(image, c) for c in candidates) <= 1e-12


def test_gn_action_errors():
    with pytest.raises(ValidationError):
        gn_action(np.ones(4), Generator("dilation", 2))
    with pytest.raises(NotBiunimodularError):
        gn_action([1, 1], Generator("fourier"))


@pytest.mark.parametrize(
    "u,cardinality",
    [
        ([1, 1j], 2),
        ([1, OMEGA3**2, 1], 6),
    ],
)
def test_small_orbits(u, cardinality):
    orbit = orbit_of(u)
    assert orbit.cardinality == cardinality
    assert orbit.members.shape == (cardinality, len(u))
    assert orbit.representative.entries[0] == 1


def test_bjorck_seven_orbit(bjorck7):
    orbit = orbit_of(bjorck7)
    assert orbit.cardinality == 196
    assert group_order(7) % orbit.cardinality == 0


def test_orbit_representative_does_not_depend_on_the_start():
    first = orbit_of([1, 1j])
    second = orbit_of([1, -1j])
    assert first.members_hash == second.members_hash
    assert max_abs(first.representative.entries, second.representative.entries) == 0


def test_orbit_distance(bjorck7):
    gauss = orbit_of(gauss_sequence(7).vector)
    bjorck = orbit_of(bjorck7)
    assert orbit_distance(gauss, gauss) == 0
    assert orbit_distance(gauss, bjorck) > 1e-2
    with pytest.raises(ValidationError):
        orbit_distance(gauss, orbit_of([1, 1j]))


def test_orbit_of_rejects_non_biunimodular():
    with pytest.raises(NotBiunimodularError):
        orbit_of([1, 1])


def test_reference_orbit_lengths():
    reference = reference_orbit_lengths()
    assert reference[7] == {"lengths": [42, 196, 294], "complete": True}
    assert not reference[10]["complete"]
    assert 4 not in reference


@pytest.mark.parametrize("n,lengths", [(2, [2]), (3, [6])])
def test_small_census(n, lengths, workers_unset):
    cfg = SearchConfig(delta=1e-7, max_iters=30_000, max_starts=20, seed=0, workers=2)
    result = census(n, cfg)
    assert result.lengths == lengths
    assert result.matches_reference
    assert result.converged_runs >= 1
    assert result.starts == 20
    assert all(group_order(n) % length == 0 for length in result.lengths)


@pytest.mark.parametrize("n", [0, 1])
def test_census_rejects_small_n(n):
    with pytest.raises(DimensionError):
        census(n)
