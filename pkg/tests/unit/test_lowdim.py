import numpy as np
import pytest
from biunimodular.errors import DimensionError, ValidationError
from biunimodular.fourier import orbit_of
from biunimodular.linalg import haar_random_unitary
from biunimodular.lowdim import (
    euler_factor,
    euler_matrix,
    t_matrix,
    u2_biuni,
    u2_from_phases,
    u2_params,
    u3_biuni_construct,
    u3_canonicalize,
    u3_matrix,
    x_reflection,
    x_rotation,
    y_rotation,
    zero_corner_matrix,
    zero_corner_vectors,
)
from biunimodular.results import U3Params

from .conftest import OMEGA3, l1_value, max_abs


def _real_rotation(seed):
    rng = np.random.default_rng(seed)
    q, r = np.linalg.qr(rng.standard_normal((3, 3)))
    q = q * np.sign(np.diagonal(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def test_u2_biuni_fourier(f2):
    solutions = u2_biuni(f2)
    assert not solutions.continuum
    found = sorted(complex(v.entries[1]).imag for v in solutions.vectors)
    assert found == pytest.approx([-1, 1], abs=1e-15)


def test_u2_biuni_continuum(f2):
    solutions = u2_biuni(np.diag([1, np.exp(0.7j)]))
    assert solutions.continuum
    v = solutions.family(np.exp(1.3j))
    assert abs(l1_value(np.diag([1, np.exp(0.7j)]), v.entries) - 2) <= 1e-15
    with pytest.raises(ValueError):
        u2_biuni(f2).family(1)


def test_u2_biuni_haar():
    for seed in range(50):
        a = haar_random_unitary(2, seed)
        for v in u2_biuni(a).vectors:
            assert abs(l1_value(a.entries, v.entries) - 2) <= 1e-12


def test_u2_biuni_rejects_wrong_size():
    with pytest.raises(DimensionError):
        u2_biuni(np.eye(3))


def test_u2_from_phases_trivial():
    assert max_abs(u2_from_phases(1, 1, 1, 1).entries, np.eye(2)) == 0
    assert max_abs(u2_from_phases(1, 1, 1, -1).entries, [[0, 1], [1, 0]]) == 0
    with pytest.raises(ValidationError):
        u2_from_phases(1, 1, 1, 2)


def test_u2_params_round_trip():
    for seed in range(20):
        a = haar_random_unitary(2, seed)
        params = u2_params(a)
        rebuilt = u2_from_phases(params.a, params.b, params.c, params.z)
        assert max_abs(rebuilt.entries, a.entries) <= 1e-12


def test_t_matrix_special_values():
    assert max_abs(t_matrix(0, 0, 0, 1).entries, np.diag([1, 1, -1])) <= 1e-15
    swap = [[0, 0, 1], [0, 1, 0], [1, 0, 0]]
    assert max_abs(t_matrix(np.pi / 2, 0, 0, 1).entries, swap) <= 1e-15


def test_t_matrix_is_product_of_rotations():
    alpha, beta, gamma, z = 0.4, 1.2, -0.9, np.exp(0.3j)
    product = x_rotation(beta) @ y_rotation(alpha, z) @ x_reflection(gamma)
    assert max_abs(t_matrix(alpha, beta, gamma, z).entries, product) <= 1e-14


def test_u3_canonicalize_identity():
    params = u3_canonicalize(np.eye(3))
    assert params.alpha == pytest.approx(0)
    assert max_abs(u3_matrix(params).entries, np.eye(3)) <= 1e-12


def test_u3_canonicalize_recovers_parameters():
    z = np.exp(0.4j)
    params = u3_canonicalize(t_matrix(0.3, 0.7, 1.1, z))
    assert params.alpha == pytest.approx(0.3, abs=1e-12)
    assert params.beta == pytest.approx(0.7, abs=1e-10)
    assert params.gamma == pytest.approx(1.1, abs=1e-10)
    assert abs(params.z - z) <= 1e-10
    assert max_abs(params.left_phases, [1, 1, 1]) <= 1e-10
    assert params.reconstruction_error <= 1e-12


@pytest.mark.parametrize("seed", [6, 7, 8, 9, 10])
def test_u3_canonicalize_haar(seed):
    a = haar_random_unitary(3, seed)
    params = u3_canonicalize(a)
    assert 0 <= params.alpha <= np.pi / 2
    assert max_abs(u3_matrix(params).entries, a.entries) <= 1e-9


def test_u3_matrix_accepts_hand_built_params():
    params = U3Params(0.5, 0.1, 0.2, 1j, (1, 1j, -1), (1, np.exp(0.2j)))
    lam = np.diag(params.left_phases)
    mu = np.diag([1, *params.right_phases])
    expected = lam @ t_matrix(0.5, 0.1, 0.2, 1j).entries @ mu
    assert max_abs(u3_matrix(params).entries, expected) <= 1e-15


def test_euler_factor_identity():
    factors = euler_factor(np.eye(3))
    for angles in (factors.x_form, factors.z_form):
        assert max_abs(euler_matrix(angles).entries, np.eye(3)) <= 1e-12


def test_euler_factor_real_rotation_has_sign_phases():
    q = _real_rotation(2)
    factors = euler_factor(q)
    for angles in (factors.x_form, factors.z_form):
        phases = np.array([*angles.left_phases, *angles.right_phases, angles.z])
        assert np.all(np.abs(phases.imag) <= 1e-9)
        assert max_abs(euler_matrix(angles).entries, q) <= 1e-9


def test_euler_factor_haar():
    a = haar_random_unitary(3, 12)
    factors = euler_factor(a)
    assert factors.x_form.form == "x"
    assert factors.z_form.form == "z"
    assert max_abs(euler_matrix(factors.x_form).entries, a.entries) <= 1e-9
    assert max_abs(euler_matrix(factors.z_form).entries, a.entries) <= 1e-9


def test_u3_construct_identity():
    v = u3_biuni_construct(np.eye(3))
    assert abs(l1_value(np.eye(3), v.entries) - 3) <= 1e-12


def test_u3_construct_fourier(f3):
    v = u3_biuni_construct(f3)
    gauss = orbit_of([1, OMEGA3**2, 1])
    assert np.min(np.max(np.abs(gauss.members - v.entries), axis=1)) <= 1e-6


def test_u3_construct_zero_corner():
    alpha = np.pi / 5
    a = zero_corner_matrix(alpha, 3 / 5, 4 / 5)
    v = u3_biuni_construct(a)
    known = np.array([u.entries for u in zero_corner_vectors(alpha)])
    assert np.min(np.max(np.abs(known - v.entries), axis=1)) <= 1e-6


def test_zero_corner_vectors_are_biunimodular():
    for alpha in (0.3, np.pi / 5, 1.2):
        for x, y in ((3 / 5, 4 / 5), (1, 0), (-0.6, 0.8)):
            a = zero_corner_matrix(alpha, x, y)
            for v in zero_corner_vectors(alpha):
                assert abs(l1_value(a.entries, v.entries) - 3) <= 1e-12
    with pytest.raises(ValidationError):
        zero_corner_matrix(0.1, 1, 1)


@pytest.mark.parametrize("seed", range(20))
def test_u3_construct_haar(seed):
    a = haar_random_unitary(3, 1000 + seed)
    v = u3_biuni_construct(a)
    assert l1_value(a.entries, v.entries) >= 3 - 1e-8
    assert v.entries[0] == pytest.approx(1)
