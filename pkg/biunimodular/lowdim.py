"""Closed forms for U(2) and U(3).

Every U(2) matrix is ½ diag(a, b) [[1+z, 1−z], [1−z, 1+z]] diag(1, c) and
has either exactly two biunimodular vectors (1, d) or a whole circle of
them. Every U(3) matrix is diag(λ₁, λ₂, λ₃) T(α, β, γ, z) diag(1, λ₄, λ₅),
and that form leads to an explicit biunimodular vector through a
one-dimensional root find.
"""

import logging

import numpy as np
import scipy.optimize
from typing_extensions import Any, Callable, List, Literal, Optional, Tuple

from .errors import ConvergenceError, DimensionError, ValidationError
from .linalg import (
    ComplexArray,
    TorusVector,
    UnitaryMatrix,
    sign1_array,
    square_array,
)
from .results import EulerAngles, EulerFactors, U2Params, U2Solutions, U3Params
from .search import refine

logger = logging.getLogger(__name__)

Form = Literal["t", "x", "z"]
Builder = Callable[[float, float, float, complex], ComplexArray]

TWO_PI = 2 * np.pi
# phases are read off entries of at least this modulus
_PHASE_FLOOR = 1e-9
_EXACT = 1e-12


def _require_unimodular(*values: complex, tol: float = 1e-12) -> None:
    for value in values:
        if abs(abs(value) - 1.0) > tol:
            raise ValidationError(f"{value} is not unimodular")


def _matrix_of_size(matrix: Any, n: int) -> ComplexArray:
    a = square_array(matrix)
    if a.shape[0] != n:
        raise DimensionError(f"expected a {n}x{n} matrix, got {a.shape[0]}x{a.shape[1]}")
    return a


# U(2)


def u2_biuni(matrix: Any) -> U2Solutions:
    """Biunimodular vectors of a 2×2 unitary A = [[x, y], [−zȳ, zx̄]].

    Returns:
        The two vectors (1, ±i·e^{i(arg x − arg y)}), or the continuum flag
        when x·y vanishes.

    Examples:
        ```python
        u2_biuni(fourier_matrix(2)).vectors  # (1, i) and (1, -i)
        ```
    """
    a = _matrix_of_size(matrix, 2)
    x, y = a[0, 0], a[0, 1]
    if abs(x * y) <= 1e-12:
        return U2Solutions((TorusVector(np.ones(2)),), continuum=True)
    d = 1j * np.exp(1j * (np.angle(x) - np.angle(y)))
    return U2Solutions(
        (TorusVector(np.array([1.0, d])), TorusVector(np.array([1.0, -d]))),
        continuum=False,
    )


def u2_from_phases(a: complex, b: complex, c: complex, z: complex) -> UnitaryMatrix:
    """½ [[a(1+z), ac(1−z)], [b(1−z), bc(1+z)]]."""
    _require_unimodular(a, b, c, z)
    return UnitaryMatrix(
        0.5
        * np.array(
            [
                [a * (1 + z), a * c * (1 - z)],
                [b * (1 - z), b * c * (1 + z)],
            ]
        )
    )


def u2_params(matrix: Any) -> U2Params:
    """The phases (a, b, c, z) with u2_from_phases(a, b, c, z) = A."""
    a = _matrix_of_size(matrix, 2)
    v = u2_biuni(a).vectors[0].entries
    w = sign1_array(a @ v)
    # D_w̄ A D_v fixes (1, 1), so its diagonal is (1 + z)/2
    z = sign1_array(np.array([2 * np.conj(w[0]) * a[0, 0] - 1]))[0]
    return U2Params(a=complex(w[0]), b=complex(w[1]), c=complex(np.conj(v[1])), z=complex(z))


# U(3) building blocks


def x_rotation(phi: float) -> ComplexArray:
    c, s = np.cos(phi), np.sin(phi)
    return np.array([[1, 0, 0], [0, c, -s], [0, s, c]], dtype=np.complex128)


def x_reflection(phi: float) -> ComplexArray:
    c, s = np.cos(phi), np.sin(phi)
    return np.array([[1, 0, 0], [0, c, s], [0, s, -c]], dtype=np.complex128)


def y_rotation(phi: float, z: complex = 1.0) -> ComplexArray:
    c, s = np.cos(phi), np.sin(phi)
    return np.array([[c, 0, -s], [0, z, 0], [s, 0, c]], dtype=np.complex128)


def z_rotation(phi: float) -> ComplexArray:
    c, s = np.cos(phi), np.sin(phi)
    return np.array([[c, -s, 0], [s, c, 0], [0, 0, 1]], dtype=np.complex128)


def _t_entries(alpha: float, beta: float, gamma: float, z: complex) -> ComplexArray:
    ca, sa = np.cos(alpha), np.sin(alpha)
    cb, sb = np.cos(beta), np.sin(beta)
    cg, sg = np.cos(gamma), np.sin(gamma)
    return np.array(
        [
            [ca, -sa * sg, sa * cg],
            [-sa * sb, z * cb * cg - ca * sb * sg, z * cb * sg + ca * sb * cg],
            [sa * cb, z * sb * cg + ca * cb * sg, z * sb * sg - ca * cb * cg],
        ],
        dtype=np.complex128,
    )


def t_matrix(alpha: float, beta: float, gamma: float, z: complex) -> UnitaryMatrix:
    """T(α, β, γ, z) = X_β · Y^z_α · X̃_γ, with X̃ the reflected X rotation.

    Examples:
        ```python
        t_matrix(0, 0, 0, 1)  # diag(1, 1, -1)
        ```
    """
    _require_unimodular(z)
    return UnitaryMatrix(_t_entries(alpha, beta, gamma, z))


def _x_form(alpha: float, beta: float, gamma: float, z: complex) -> ComplexArray:
    return x_rotation(beta) @ y_rotation(alpha, z) @ x_rotation(gamma)


def _z_form(alpha: float, beta: float, gamma: float, z: complex) -> ComplexArray:
    return z_rotation(beta) @ y_rotation(alpha, z) @ x_rotation(gamma)


def _angle(opposite: float, adjacent: float) -> float:
    return float(np.arctan2(abs(opposite), abs(adjacent)))


def _xt_angles(a: ComplexArray) -> Tuple[float, float, float]:
    alpha = float(np.arccos(min(1.0, abs(a[0, 0]))))
    if np.sin(alpha) > 1e-12:
        return alpha, _angle(a[1, 0], a[2, 0]), _angle(a[0, 1], a[0, 2])
    # γ is free; with γ = 0 the lower block carries β
    return alpha, _angle(a[1, 2], a[1, 1]), 0.0


def _z_angles(a: ComplexArray) -> Tuple[float, float, float]:
    alpha = float(np.arcsin(min(1.0, abs(a[2, 0]))))
    if np.cos(alpha) > 1e-12:
        return alpha, _angle(a[1, 0], a[0, 0]), _angle(a[2, 1], a[2, 2])
    return alpha, _angle(a[1, 2], a[0, 2]), 0.0


_FORMS: dict[str, Tuple[Builder, Callable[[ComplexArray], Tuple[float, float, float]]]] = {
    "t": (_t_entries, _xt_angles),
    "x": (_x_form, _xt_angles),
    "z": (_z_form, _z_angles),
}


def _branches(theta: float) -> List[float]:
    return [float(np.mod(t, TWO_PI)) for t in (theta, -theta, np.pi - theta, np.pi + theta)]


def _fit_phases(
    a: ComplexArray, p: ComplexArray, q: ComplexArray
) -> Tuple[ComplexArray, ComplexArray]:
    """Diagonal phases λ, μ (μ₀ = 1) with a_jk = λ_j q_jk μ_k on z-free entries.

    Phases propagate along the heaviest available entries first; components
    not reachable from μ₀ get phase 1 at their first node.
    """
    weight = np.where((np.abs(p) <= 1e-14) & (np.abs(q) > _PHASE_FLOOR), np.abs(q), 0.0)
    lam: List[Optional[complex]] = [None] * 3
    mu: List[Optional[complex]] = [1.0, None, None]
    while True:
        best: Optional[Tuple[float, int, int]] = None
        for j in range(3):
            for k in range(3):
                if weight[j, k] > 0 and (lam[j] is None) != (mu[k] is None):
                    if best is None or weight[j, k] > best[0]:
                        best = (weight[j, k], j, k)
        if best is None:
            free = [j for j in range(3) if lam[j] is None]
            if not free:
                free_mu = [k for k in range(3) if mu[k] is None]
                if not free_mu:
                    break
                mu[free_mu[0]] = 1.0
            else:
                lam[free[0]] = 1.0
            continue
        _, j, k = best
        ratio = a[j, k] / q[j, k]
        if lam[j] is None:
            lam[j] = complex(sign1_array(np.array([ratio / mu[k]]))[0])  # type: ignore[operator]
        else:
            mu[k] = complex(sign1_array(np.array([ratio / lam[j]]))[0])
    return np.array(lam, dtype=np.complex128), np.array(mu, dtype=np.complex128)


def _reconstruct(
    build: Builder,
    alpha: float,
    beta: float,
    gamma: float,
    z: complex,
    lam: ComplexArray,
    mu: ComplexArray,
) -> ComplexArray:
    return lam[:, None] * build(alpha, beta, gamma, z) * mu[None, :]


def _polish(
    a: ComplexArray, build: Builder, start: Tuple[float, float, float, complex, ComplexArray, ComplexArray]
) -> Tuple[float, float, float, complex, ComplexArray, ComplexArray]:
    alpha, beta, gamma, z, lam, mu = start
    x0 = np.concatenate(
        [[alpha, beta, gamma, np.angle(z)], np.angle(lam), np.angle(mu[1:])]
    )

    def residual(x: Any) -> Any:
        diff = _reconstruct(
            build, x[0], x[1], x[2], np.exp(1j * x[3]), np.exp(1j * x[4:7]),
            np.exp(1j * np.concatenate([[0.0], x[7:9]])),
        ) - a
        return np.concatenate([diff.real.ravel(), diff.imag.ravel()])

    fit = scipy.optimize.least_squares(residual, x0, xtol=1e-15, ftol=1e-15, gtol=1e-15)
    x = fit.x
    return (
        float(x[0]), float(x[1]), float(x[2]), complex(np.exp(1j * x[3])),
        np.exp(1j * x[4:7]), np.exp(1j * np.concatenate([[0.0], x[7:9]])),
    )


def _canonicalize(a: ComplexArray, form: Form) -> EulerAngles:
    build, angles = _FORMS[form]
    alpha, beta0, gamma0 = angles(a)

    candidates = []
    for beta in _branches(beta0):
        for gamma in _branches(gamma0):
            q = build(alpha, beta, gamma, 0.0)
            p = build(alpha, beta, gamma, 1.0) - q
            lam, mu = _fit_phases(a, p, q)
            core = lam.conj()[:, None] * a * mu.conj()[None, :]
            projection = np.sum(p.conj() * (core - q))
            z = projection / abs(projection) if abs(projection) > 1e-14 else 1.0 + 0j
            error = float(np.max(np.abs(_reconstruct(build, alpha, beta, gamma, z, lam, mu) - a)))
            spread = float(np.sum(np.abs(lam - 1)) + np.sum(np.abs(mu - 1)) + abs(z - 1))
            candidates.append((error > _EXACT, spread, error, (alpha, beta, gamma, z, lam, mu)))

    _, _, error, best = min(candidates, key=lambda c: (c[0], c[1], c[2]))
    if error > _EXACT:
        logger.warning(f"Closed-form {form}-fit left error {error:.3e}, polishing")
        best = _polish(a, build, best)
        error = float(np.max(np.abs(_reconstruct(build, *best) - a)))
        if error > 1e-9:
            raise ConvergenceError(f"could not fit the {form}-form, error {error:.3e}")

    alpha, beta, gamma, z, lam, mu = best
    return EulerAngles(
        form="z" if form == "z" else "x",
        alpha=float(alpha),
        beta=float(np.mod(beta, TWO_PI)),
        gamma=float(np.mod(gamma, TWO_PI)),
        z=complex(z),
        left_phases=(complex(lam[0]), complex(lam[1]), complex(lam[2])),
        right_phases=(complex(mu[1]), complex(mu[2])),
        reconstruction_error=error,
    )


def u3_canonicalize(matrix: Any) -> U3Params:
    """Write A ∈ U(3) as diag(λ₁, λ₂, λ₃) · T(α, β, γ, z) · diag(1, λ₄, λ₅).

    α ∈ [0, π/2] comes from |A₁₁| = cos α, β and γ from ratios of moduli in
    the first column and row, each up to four sign branches; the branch that
    reproduces A is kept, preferring phases closest to 1. When sin α ≈ 0, γ
    is set to 0.

    Raises:
        DimensionError: A is not 3×3.
        ConvergenceError: no parameters reproduce A within 1e−9.
    """
    a = _matrix_of_size(matrix, 3)
    fit = _canonicalize(a, "t")
    return U3Params(
        alpha=fit.alpha,
        beta=fit.beta,
        gamma=fit.gamma,
        z=fit.z,
        left_phases=fit.left_phases,
        right_phases=fit.right_phases,
        reconstruction_error=fit.reconstruction_error,
    )


def u3_matrix(params: U3Params) -> UnitaryMatrix:
    """Rebuild the matrix described by U3Params."""
    lam = np.array(params.left_phases)
    mu = np.array((1.0, *params.right_phases))
    return UnitaryMatrix(
        _reconstruct(_t_entries, params.alpha, params.beta, params.gamma, params.z, lam, mu)
    )


def euler_matrix(angles: EulerAngles) -> UnitaryMatrix:
    build = _FORMS[angles.form][0]
    lam = np.array(angles.left_phases)
    mu = np.array((1.0, *angles.right_phases))
    return UnitaryMatrix(
        _reconstruct(build, angles.alpha, angles.beta, angles.gamma, angles.z, lam, mu)
    )


def euler_factor(matrix: Any) -> EulerFactors:
    """Phased Euler factorizations diag(λ) · G_β · Y^z_α · X_γ · diag(1, λ₄, λ₅).

    Both the X_β and the Z_β variants are returned; for a real rotation all
    phases come out as ±1.
    """
    a = _matrix_of_size(matrix, 3)
    return EulerFactors(x_form=_canonicalize(a, "x"), z_form=_canonicalize(a, "z"))


# U(3) biunimodular vectors


def zero_corner_matrix(alpha: float, x: float, y: float) -> UnitaryMatrix:
    """[[cos α, sin α, 0], [x sin α, −x cos α, y], [y sin α, −y cos α, −x]].

    Requires real x, y with x² + y² = 1.
    """
    if abs(x * x + y * y - 1.0) > 1e-12:
        raise ValidationError(f"x^2 + y^2 must be 1, got {x * x + y * y}")
    ca, sa = np.cos(alpha), np.sin(alpha)
    return UnitaryMatrix(
        np.array([[ca, sa, 0], [x * sa, -x * ca, y], [y * sa, -y * ca, -x]])
    )


def zero_corner_vectors(alpha: float) -> Tuple[TorusVector, ...]:
    """The four vectors (1, si, t·e^{siα}), s, t = ±1, biunimodular for every
    `zero_corner_matrix(alpha, x, y)`.
    """
    return tuple(
        TorusVector(np.array([1.0, s * 1j, t * np.exp(s * 1j * alpha)]))
        for s in (1, -1)
        for t in (1, -1)
    )


def _accept(a: ComplexArray, v: ComplexArray) -> Optional[TorusVector]:
    polished = refine(a, v, max_iters=2_000)
    value = float(np.sum(np.abs(a @ polished.entries)))
    if value >= 3 - 1e-8:
        return polished
    return None


def _sweep_candidates(params: U3Params) -> List[ComplexArray]:
    """Vectors for T(α, β, γ, z) from the crossings of f_j(m) and g(m)."""
    ca, sa = np.cos(params.alpha), np.sin(params.alpha)
    cb, sb = np.cos(params.beta), np.sin(params.beta)
    cg, sg = np.cos(params.gamma), np.sin(params.gamma)
    z = params.z

    def phase(m: float) -> complex:
        em = np.exp(1j * m)
        x = cb * z * cg + sb * em * sg
        y = cb * z * sg - sb * em * cg
        if abs(x * y) <= 1e-14:
            return 1.0 + 0j
        return complex((x / abs(x)) * np.conj(y / abs(y)))

    def w(j: int, m: float) -> complex:
        return -sg + (-1) ** j * 1j * phase(m) * cg

    def h(j: int, m: float) -> float:
        return float(abs(w(j, m)) ** 2 - sa**2 / abs(np.exp(1j * m) + ca) ** 2)

    samples = np.sort(np.append(np.linspace(0, TWO_PI, 720, endpoint=False), np.mod(np.angle(z), TWO_PI)))
    samples = np.append(samples, TWO_PI)

    roots: List[Tuple[float, int, float]] = []
    for j in (1, 2):
        values = np.array([h(j, m) for m in samples])
        for i in range(len(samples) - 1):
            lo, hi = samples[i], samples[i + 1]
            if values[i] == 0:
                roots.append((0.0, j, lo))
            elif values[i] * values[i + 1] < 0:
                m0 = scipy.optimize.brentq(lambda m: h(j, m), lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
                roots.append((abs(h(j, m0)), j, m0))
        if not roots:
            # tangential crossing: minimize |f_j − g| around the best sample
            i = int(np.argmin(np.abs(values)))
            lo, hi = samples[max(i - 1, 0)], samples[min(i + 1, len(samples) - 1)]
            best = scipy.optimize.minimize_scalar(
                lambda m: abs(h(j, m)), bounds=(lo, hi), method="bounded", options={"xatol": 1e-14}
            )
            roots.append((abs(h(j, best.x)), j, float(best.x)))
            logger.warning(f"No sign change for f_{j} - g, using minimizer at m={best.x:.6f}")

    vectors = []
    for _, j, m0 in sorted(roots):
        em = np.exp(1j * m0)
        wj = w(j, m0)
        if abs(wj) <= 1e-300:
            continue
        ex0 = (sa / (em + ca)) / wj
        ex0 = ex0 / abs(ex0)
        d = (-1) ** j * 1j * phase(m0)
        vectors.append(np.array([1.0, ex0, ex0 * d]))
    return vectors


def u3_biuni_construct(matrix: Any) -> TorusVector:
    """A biunimodular vector of a 3×3 unitary, built without searching.

    Canonicalizes A to diag(λ) T(α, β, γ, z) diag(1, λ₄, λ₅). When |cos α|
    is 1 up to 1e−10 the matrix splits off a 1×1 block and the vector comes
    from the remaining U(2) block; otherwise a sweep over m ∈ [0, 2π)
    brackets a crossing of f_j(m) = |w_j(m)|² with
    g(m) = |sin α/(e^{im} + cos α)|², and the vector is back-substituted.
    The result is polished by a few projection steps.

    Returns:
        A TorusVector v with v₁ = 1 and ‖Av‖₁ ≥ 3 − 1e−8.

    Raises:
        ConvergenceError: no crossing yields a biunimodular vector.
    """
    a = _matrix_of_size(matrix, 3)
    params = u3_canonicalize(a)
    mu = np.array((1.0, *params.right_phases))

    if abs(np.cos(params.alpha)) >= 1 - 1e-10:
        block = u2_biuni(UnitaryMatrix(a[1:, 1:], tolerance=1e-4))
        candidates = [np.concatenate([[1.0], vector.entries]) for vector in block.vectors]
    else:
        candidates = [t / mu for t in _sweep_candidates(params)]

    for v in candidates:
        accepted = _accept(a, v)
        if accepted is not None:
            return accepted
    raise ConvergenceError(f"no crossing produced a biunimodular vector ({len(candidates)} tried)")
