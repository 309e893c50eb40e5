"""Dense complex linear algebra: value types and the kernels built on them."""

import logging
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt
import scipy.linalg
from typing_extensions import Any, Optional, TypeAlias, Union

from .errors import ConvergenceError, DimensionError, ValidationError

logger = logging.getLogger(__name__)

ComplexArray: TypeAlias = npt.NDArray[np.complex128]
SeedLike: TypeAlias = Union[int, np.random.SeedSequence]

# Moduli below this are treated as exact zeros by the sign maps.
ZERO_MODULUS = 1e-300

# exp(−2πi·q/4) for q = 0, 1, 2, 3
QUARTER_TURNS = np.array([1.0, -1.0j, -1.0, 1.0j], dtype=np.complex128)


def _readonly(values: Any, ndim: int) -> ComplexArray:
    arr = np.array(values, dtype=np.complex128)
    if arr.ndim != ndim or arr.size == 0:
        raise DimensionError(
            f"expected a non-empty {ndim}-d array, got shape {arr.shape}"
        )
    if not np.all(np.isfinite(arr)):
        raise ValidationError("entries must be finite")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ComplexVector:
    """Immutable complex vector of length n ≥ 1."""

    entries: ComplexArray

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", _readonly(self.entries, 1))

    @property
    def n(self) -> int:
        return int(self.entries.shape[0])

    def __len__(self) -> int:
        return self.n

    def __array__(self, dtype: Any = None, copy: Optional[bool] = None) -> Any:
        if dtype is None:
            return self.entries
        return self.entries.astype(dtype)


@dataclass(frozen=True, eq=False)
class TorusVector(ComplexVector):
    """Complex vector whose entries all have modulus one."""

    unimodularity_tol: float = 1e-12

    def __post_init__(self) -> None:
        super().__post_init__()
        deviation = float(np.max(np.abs(np.abs(self.entries) - 1.0)))
        if deviation > self.unimodularity_tol:
            raise ValidationError(
                f"entries must be unimodular within {self.unimodularity_tol:g}, "
                f"max deviation is {deviation:.3e}"
            )

    def normalized(self) -> "TorusVector":
        """The same vector rotated so that its first entry is 1."""
        return TorusVector(self.entries / self.entries[0], self.unimodularity_tol)


@dataclass(frozen=True, eq=False)
class ComplexMatrix:
    """Immutable dense complex matrix, stored row-major."""

    entries: ComplexArray

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", _readonly(self.entries, 2))

    @property
    def rows(self) -> int:
        return int(self.entries.shape[0])

    @property
    def cols(self) -> int:
        return int(self.entries.shape[1])

    def __array__(self, dtype: Any = None, copy: Optional[bool] = None) -> Any:
        if dtype is None:
            return self.entries
        return self.entries.astype(dtype)


def unitarity_residual(matrix: npt.ArrayLike) -> float:
    """Max-entry magnitude of A*A − I."""
    arr = np.asarray(matrix, dtype=np.complex128)
    gram = arr.conj().T @ arr
    return float(np.max(np.abs(gram - np.eye(arr.shape[1]))))


@dataclass(frozen=True, eq=False)
class UnitaryMatrix(ComplexMatrix):
    """Square matrix A with max |A*A − I| at most `tolerance`.

    ???+ Tip
        Pass a larger `tolerance` for deliberately perturbed inputs, e.g.
        matrices read back from text files.
    """

    tolerance: float = 1e-10
    unitarity_residual: float = field(init=False)

    def __post_init__(self) -> None:
        super().__post_init__()
        if self.rows != self.cols:
            raise DimensionError(
                f"a unitary matrix must be square, got {self.rows}x{self.cols}"
            )
        residual = unitarity_residual(self.entries)
        if residual > self.tolerance:
            raise ValidationError(
                f"matrix is not unitary within {self.tolerance:g}: "
                f"residual {residual:.3e}"
            )
        object.__setattr__(self, "unitarity_residual", residual)

    @property
    def n(self) -> int:
        return self.rows


@dataclass(frozen=True, eq=False)
class PolarFactors:
    """M = psd · unitary with psd Hermitian positive semi-definite."""

    psd: ComplexMatrix
    unitary: UnitaryMatrix


def as_array(values: Any) -> ComplexArray:
    """View vectors, matrices or array-likes as a complex numpy array."""
    return np.asarray(values, dtype=np.complex128)


def square_array(values: Any) -> ComplexArray:
    arr = as_array(values)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {arr.shape}")
    return arr


def check_matvec(matrix: Any, vector: Any) -> tuple[ComplexArray, ComplexArray]:
    """Return (A, v) as arrays after checking that A·v is defined and square."""
    a = square_array(matrix)
    v = as_array(vector)
    if v.ndim != 1 or v.shape[0] != a.shape[1]:
        raise DimensionError(
            f"dimension mismatch: matrix is {a.shape[0]}x{a.shape[1]}, "
            f"vector has shape {v.shape}"
        )
    return a, v


def fourier_matrix(n: int) -> UnitaryMatrix:
    """The unitary DFT matrix F_n with entries exp(−2πi·jk/n)/√n.

    Parameters:
        n: the dimension.

    Returns:
        F_n as a UnitaryMatrix.

    Raises:
        DimensionError: n is smaller than 1.

    Examples:
        ```python
        f2 = fourier_matrix(2)
        np.allclose(f2.entries * np.sqrt(2), [[1, 1], [1, -1]])  # True
        ```
    """
    if n < 1:
        raise DimensionError(f"n must be a positive integer, got {n}")
    k = np.arange(n)
    # reduce jk mod n first so large exponents keep full precision
    exponent = np.outer(k, k) % n
    entries = np.exp(-2j * np.pi * exponent / n)
    # quarter turns are exact ±1, ±i; rounding noise there would count as support
    quarter = (4 * exponent) % n == 0
    entries = np.where(quarter, QUARTER_TURNS[(4 * exponent // n) % 4], entries)
    return UnitaryMatrix(entries / np.sqrt(n))


def haar_random_unitary(n: int, seed: SeedLike) -> UnitaryMatrix:
    """Sample a Haar-distributed unitary matrix.

    Draws an n×n matrix of i.i.d. standard complex Gaussians, takes its QR
    factorization and rescales the columns of Q by the phases of R's
    diagonal. The same seed always yields a bit-identical matrix.

    Parameters:
        n: the dimension.
        seed: an integer seed or a `numpy.random.SeedSequence`.

    Returns:
        A random element of U(n).
    """
    if n < 1:
        raise DimensionError(f"n must be a positive integer, got {n}")
    rng = np.random.default_rng(seed)
    ginibre = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(ginibre)
    diagonal = np.diagonal(r)
    q = q * (diagonal / np.abs(diagonal))
    return UnitaryMatrix(q)


def _svd(m: ComplexArray) -> tuple[ComplexArray, npt.NDArray[np.float64], ComplexArray]:
    attempts = 0
    for driver in ("gesdd", "gesvd"):
        attempts += 1
        try:
            return scipy.linalg.svd(m, lapack_driver=driver)
        except np.linalg.LinAlgError as ex:
            logger.warning(f"SVD with driver {driver} did not converge: {ex}")
    raise ConvergenceError("SVD did not converge", iterations=attempts)


def polar_decompose(matrix: Any) -> PolarFactors:
    """Left polar decomposition M = S_M · U_M.

    With the SVD M = W′ΣW*, S_M = W′ΣW′* and U_M = W′W*. On the null space of
    a singular M the unitary factor is completed deterministically, choosing
    the completion closest to the identity, so `diag(2, 0)` gives U_M = I.

    Parameters:
        matrix: a square complex matrix.

    Returns:
        The PolarFactors of the matrix.

    Raises:
        DimensionError: the input is not square.
        ConvergenceError: the SVD did not converge.
    """
    m = square_array(matrix)
    n = m.shape[0]
    left, sigma, right_h = _svd(m)

    scale = float(sigma[0]) if sigma.size else 0.0
    null = sigma <= scale * n * np.finfo(float).eps
    if np.any(null):
        # rotate the left null basis onto the right one as far as possible
        left_null = left[:, null]
        right_null = right_h[null].conj().T
        u, _, vh = _svd(left_null.conj().T @ right_null)
        left = left.copy()
        left[:, null] = left_null @ (u @ vh)

    psd = (left * sigma) @ left.conj().T
    psd = (psd + psd.conj().T) / 2
    unitary = left @ right_h
    return PolarFactors(ComplexMatrix(psd), UnitaryMatrix(unitary, tolerance=1e-9))


def nearest_unitary(matrix: Any) -> ComplexArray:
    """Unitary polar factor of a matrix, i.e. its closest unitary matrix."""
    return np.array(polar_decompose(matrix).unitary.entries)


def sign_array(values: Any) -> ComplexArray:
    arr = as_array(values)
    modulus = np.abs(arr)
    out = np.zeros_like(arr)
    support = modulus > ZERO_MODULUS
    out[support] = arr[support] / modulus[support]
    return out


def sign1_array(values: Any) -> ComplexArray:
    arr = as_array(values)
    modulus = np.abs(arr)
    out = np.ones_like(arr)
    support = modulus > ZERO_MODULUS
    out[support] = arr[support] / modulus[support]
    return out


def sign_map(v: Any) -> ComplexVector:
    """Entry-wise v_k/|v_k| on the support of v and 0 off it."""
    return ComplexVector(sign_array(v))


def sign1_map(v: Any) -> TorusVector:
    """Entry-wise v_k/|v_k| on the support of v and 1 off it.

    This is the nearest-point projection onto the torus.
    """
    return TorusVector(sign1_array(v))


def inf_to_1_value(matrix: Any, v: Any) -> float:
    """The ℓ¹ norm ‖Av‖₁, at most n for unimodular v."""
    a, vec = check_matvec(matrix, v)
    return float(np.sum(np.abs(a @ vec)))


def block_diag_repeat(block: Any, count: int) -> UnitaryMatrix:
    """Block-diagonal matrix with `count` copies of `block` on the diagonal."""
    if count < 1:
        raise DimensionError(f"count must be a positive integer, got {count}")
    b = square_array(block)
    return UnitaryMatrix(scipy.linalg.block_diag(*([b] * count)))
