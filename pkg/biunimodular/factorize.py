"""The recursive parametrization of matrices with a biunimodular vector.

A unitary A has a biunimodular vector v exactly when it factors as
A = D_w F_n (1 ⊕ B) F_n* D_v̄ with w = Av and B ∈ U(n−1). Unrolling the
factorization down to 1×1 blocks describes every such matrix by n²
unimodular numbers a_jk.
"""

import logging

import numpy as np
import scipy.linalg
from typing_extensions import Any, Callable, Optional

from .errors import (
    AnalysisError,
    DimensionError,
    NotBiunimodularError,
    SearchFailedError,
    ValidationError,
)
from .linalg import (
    ComplexArray,
    TorusVector,
    UnitaryMatrix,
    check_matvec,
    fourier_matrix,
    nearest_unitary,
    sign1_array,
    square_array,
    unitarity_residual,
)
from .lowdim import u2_biuni, u3_biuni_construct
from .results import AnalysisResult, LarDecomposition, PhaseTable
from .search import SearchConfig, multi_start_search, refine

logger = logging.getLogger(__name__)

# B is re-orthonormalized above the first and rejected above the second.
REORTHONORMALIZE_ABOVE = 1e-10
MAX_BLOCK_RESIDUAL = 1e-6


def _fourier(n: int) -> ComplexArray:
    return np.asarray(fourier_matrix(n).entries)


def synthesize(params: PhaseTable) -> UnitaryMatrix:
    """Build the unitary matrix described by a PhaseTable.

    Starts from A₁ = [a₁₁] and sets
    A_l = diag(a_l1, …, a_ll) · F_l · (1 ⊕ A_{l−1}) · F_l* · diag(1, a_1l, …, a_{l−1,l})
    up to l = n. Every A_l has the biunimodular vector (1, ā_1l, …, ā_{l−1,l}).

    Examples:
        ```python
        synthesize(PhaseTable(np.ones((2, 2)))).entries  # the identity
        ```
    """
    a = params.phases
    current = a[:1, :1].copy()
    for size in range(2, params.n + 1):
        f = _fourier(size)
        inner = scipy.linalg.block_diag(np.ones((1, 1)), current)
        left = a[size - 1, :size]
        right = np.concatenate([[1.0], a[: size - 1, size - 1]])
        current = left[:, None] * (f @ inner @ f.conj().T) * right[None, :]
    return UnitaryMatrix(current)


def _prepare(
    matrix: Any, v: Any, delta_check: float, refine_vector: bool
) -> tuple[ComplexArray, ComplexArray]:
    a, vec = check_matvec(matrix, v)
    n = a.shape[0]
    value = float(np.sum(np.abs(a @ vec)))
    if not value > n - delta_check:
        raise NotBiunimodularError("vector is not near-biunimodular for the matrix", n - value)
    if refine_vector:
        vec = np.asarray(refine(a, vec).entries)
    else:
        vec = sign1_array(vec)
        vec = vec / vec[0]
    return a, vec


def analyze(
    matrix: Any,
    v: Any,
    delta_check: float = 1e-6,
    refine_vector: bool = True,
) -> AnalysisResult:
    """Split A = D_w F_n (1 ⊕ B) F_n* D_v̄ around a (near-)biunimodular v.

    The vector is first refined by further projection steps, then rotated so
    that v₁ = 1. B is the lower-right block of F_n* D_w̄ A D_v F_n; when it is
    off the unitary group by more than 1e−10 it is replaced by its polar
    factor and the size of the change is recorded in `correction`.

    Parameters:
        matrix: a unitary matrix of size n ≥ 2.
        v: a vector with ‖Av‖₁ > n − delta_check.
        delta_check: how far from biunimodular the input may be.
        refine_vector: polish v before the split.

    Returns:
        The AnalysisResult with v, w = sign(Av) and B.

    Raises:
        DimensionError: n < 2.
        NotBiunimodularError: ‖Av‖₁ ≤ n − delta_check.
        AnalysisError: B is further than 1e−6 from unitary.
    """
    a, vec = _prepare(matrix, v, delta_check, refine_vector)
    n = a.shape[0]
    if n < 2:
        raise DimensionError("analysis needs n >= 2")

    w = sign1_array(a @ vec)
    f = _fourier(n)
    fixed = w.conj()[:, None] * a * vec[None, :]
    block = (f.conj().T @ fixed @ f)[1:, 1:]

    residual = unitarity_residual(block)
    if residual > MAX_BLOCK_RESIDUAL:
        raise AnalysisError(f"block B has unitarity residual {residual:.3e}")
    correction = 0.0
    if residual > REORTHONORMALIZE_ABOVE:
        projected = nearest_unitary(block)
        correction = float(np.max(np.abs(projected - block)))
        logger.warning(
            f"Re-orthonormalized B (residual {residual:.3e}, correction {correction:.3e})"
        )
        block = projected

    inner = scipy.linalg.block_diag(np.ones((1, 1)), block)
    rebuilt = w[:, None] * (f @ inner @ f.conj().T) * vec.conj()[None, :]
    error = float(np.max(np.abs(rebuilt - a)))
    return AnalysisResult(
        v=TorusVector(vec),
        w=TorusVector(w),
        B=UnitaryMatrix(block, tolerance=1e-9),
        correction=correction,
        reconstruction_error=error,
    )


def lar_decompose(
    matrix: Any,
    v: Any,
    delta_check: float = 1e-6,
    refine_vector: bool = True,
) -> LarDecomposition:
    """A = D_L · S · D_R with S unitary and doubly stochastic (S𝟏 = 𝟏).

    L = sign(Av), R = v̄ with v rotated so that R₁ = 1, S = D_L̄ A D_v.

    Raises:
        NotBiunimodularError: ‖Av‖₁ ≤ n − delta_check.
    """
    a, vec = _prepare(matrix, v, delta_check, refine_vector)
    w = sign1_array(a @ vec)
    s = w.conj()[:, None] * a * vec[None, :]
    error = float(np.max(np.abs(w[:, None] * s * vec.conj()[None, :] - a)))
    return LarDecomposition(
        L=TorusVector(w),
        S=UnitaryMatrix(s, tolerance=1e-9),
        R=TorusVector(vec.conj()),
        reconstruction_error=error,
    )


def find_biunimodular(a: ComplexArray, cfg: SearchConfig) -> ComplexArray:
    """A biunimodular vector of A: closed forms for n = 2, 3, a search above.

    Raises:
        SearchFailedError: the search found nothing within `cfg`.
    """
    n = a.shape[0]
    if n == 2:
        return np.asarray(u2_biuni(a).vectors[0].entries)
    if n == 3:
        return np.asarray(u3_biuni_construct(a).entries)
    result = multi_start_search(a, cfg)
    if not result.converged:
        raise SearchFailedError(f"no biunimodular vector found for n={n}", result.residual)
    return np.asarray(result.vector.entries)


def decompose(matrix: Any, cfg: Optional[SearchConfig] = None) -> PhaseTable:
    """Recover a PhaseTable with `synthesize(decompose(A)) ≈ A`.

    At each size l the biunimodular vector comes from the closed forms for
    l = 2, 3 and from `multi_start_search` otherwise; a_lk = w_k and
    a_kl = v̄_{k+1}, and the recursion continues on B. Matrices with several
    biunimodular vectors have several tables; the first vector found is used.

    Raises:
        SearchFailedError: some B has no biunimodular vector within the
            search budget.
    """
    cfg = cfg or SearchConfig()
    a = square_array(matrix)
    n = a.shape[0]
    table = np.ones((n, n), dtype=np.complex128)

    current = a
    for size in range(n, 1, -1):
        result = analyze(current, find_biunimodular(current, cfg))
        table[size - 1, :size] = result.w.entries
        table[: size - 1, size - 1] = result.v.entries[1:].conj()
        current = np.asarray(result.B.entries)
        logger.debug(f"Peeled size {size}, reconstruction {result.reconstruction_error:.3e}")
    table[0, 0] = sign1_array(current[:1, 0])[0]
    return PhaseTable(table, tolerance=1e-9)


def support_family(
    u: Any, w: Any, matrix: Optional[Any] = None, tol: float = 1e-10
) -> Callable[[complex], TorusVector]:
    """A circle of biunimodular vectors z ↦ u + z·w.

    Needs u, w with complementary supports and u + w unimodular, and the same
    for Au, Aw. Then every u + z·w with |z| = 1 is biunimodular for A.
    The matrix defaults to the Fourier matrix.

    ???+ Example
        ```python
        family = support_family([1, 0, 1, 0], [0, 1, 0, -1])
        family(1j).entries  # (1, i, 1, -i)
        ```

    Raises:
        ValidationError: the supports overlap or do not cover every entry.
    """
    uu = np.asarray(u, dtype=np.complex128)
    ww = np.asarray(w, dtype=np.complex128)
    a = _fourier(uu.shape[0]) if matrix is None else matrix
    a, uu = check_matvec(a, uu)
    a, ww = check_matvec(a, ww)

    def check(first: ComplexArray, second: ComplexArray, label: str) -> None:
        overlap = float(np.max(np.abs(first) * np.abs(second)))
        if overlap > tol:
            raise ValidationError(f"supports of {label} overlap ({overlap:.3e})")
        deviation = float(np.max(np.abs(np.abs(first + second) - 1.0)))
        if deviation > tol:
            raise ValidationError(f"{label} do not sum to a unimodular vector ({deviation:.3e})")

    check(uu, ww, "u and w")
    check(a @ uu, a @ ww, "Au and Aw")

    def member(z: complex) -> TorusVector:
        if abs(abs(z) - 1.0) > 1e-12:
            raise ValidationError(f"{z} is not unimodular")
        return TorusVector(uu + z * ww, unimodularity_tol=1e-9)

    return member
