"""Result records returned by the search, factorization and diagnostic routines.

Every record is an immutable dataclass with a `summary()` giving the scalar
fields most people look at first; `biunimodular.io.to_jsonable` gives the
full JSON form.
"""

from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt
from typing_extensions import Any, Dict, List, Literal, Optional, Tuple

from .errors import ValidationError
from .linalg import (
    ComplexArray,
    SeedLike,
    TorusVector,
    UnitaryMatrix,
)


@dataclass(frozen=True, eq=False)
class SearchResult:
    """Outcome of one or more alternating-projection runs."""

    vector: TorusVector
    residual: float
    iterations: int
    starts_used: int
    converged: bool
    trace: Optional[Tuple[float, ...]] = None

    def summary(self) -> Dict[str, Any]:
        return {
            "converged": self.converged,
            "residual": self.residual,
            "iterations": self.iterations,
            "starts_used": self.starts_used,
        }


@dataclass(frozen=True)
class NearBiuniCertificate:
    """Measured quantities backing a δ-near biunimodular vector.

    The bounds checked when issuing the certificate are
    `two_delta_bound < sqrt(2 delta)`, both minima at least 1/2, and
    `step_gap <= step_gap_bound`.
    """

    delta: float
    two_delta_bound: float
    min_abs_Av: float
    min_abs_Astar_sign: float
    step_gap: float
    step_gap_bound: float

    def summary(self) -> Dict[str, Any]:
        return dict(self.__dict__)


@dataclass(frozen=True)
class PredicateReport:
    """The four equivalent characterizations of a biunimodular vector."""

    fixes_ones: bool
    attains_norm: bool
    product_unimodular: bool
    image_on_torus: bool
    tolerance: float

    @property
    def consistent(self) -> bool:
        """All four predicates agree."""
        flags = {
            self.fixes_ones,
            self.attains_norm,
            self.product_unimodular,
            self.image_on_torus,
        }
        return len(flags) == 1

    @property
    def biunimodular(self) -> bool:
        return self.consistent and self.attains_norm

    def summary(self) -> Dict[str, Any]:
        return {**self.__dict__, "consistent": self.consistent}


@dataclass(frozen=True, eq=False)
class PhaseTable:
    """The n² unimodular parameters a_jk of the recursive synthesis.

    `phases[j - 1, k - 1]` holds a_jk; use `a(j, k)` for 1-based access.
    """

    phases: ComplexArray
    tolerance: float = 1e-12

    def __post_init__(self) -> None:
        arr = np.array(self.phases, dtype=np.complex128)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.size == 0:
            raise ValidationError(f"a phase table must be n x n, got {arr.shape}")
        deviation = float(np.max(np.abs(np.abs(arr) - 1.0)))
        if deviation > self.tolerance:
            raise ValidationError(
                f"phase table entries must be unimodular, max deviation {deviation:.3e}"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "phases", arr)

    @property
    def n(self) -> int:
        return int(self.phases.shape[0])

    def a(self, j: int, k: int) -> complex:
        return complex(self.phases[j - 1, k - 1])

    @classmethod
    def random(cls, n: int, seed: SeedLike) -> "PhaseTable":
        """A table of i.i.d. uniform phases."""
        rng = np.random.default_rng(seed)
        return cls(np.exp(2j * np.pi * rng.random((n, n))))


@dataclass(frozen=True, eq=False)
class AnalysisResult:
    """A = D_w F_n (1 ⊕ B) F_n* D_v̄ for a biunimodular v with w = Av."""

    v: TorusVector
    w: TorusVector
    B: UnitaryMatrix
    correction: float
    reconstruction_error: float

    def summary(self) -> Dict[str, Any]:
        return {
            "n": self.v.n,
            "correction": self.correction,
            "reconstruction_error": self.reconstruction_error,
        }


@dataclass(frozen=True, eq=False)
class LarDecomposition:
    """A = D_L · S · D_R with S fixing the all-ones vector."""

    L: TorusVector
    S: UnitaryMatrix
    R: TorusVector
    reconstruction_error: float

    @property
    def row_sums(self) -> ComplexArray:
        return np.asarray(self.S.entries.sum(axis=1))

    @property
    def col_sums(self) -> ComplexArray:
        return np.asarray(self.S.entries.sum(axis=0))

    def summary(self) -> Dict[str, Any]:
        ones = np.ones(self.S.n)
        return {
            "n": self.S.n,
            "fixed_point_error": float(np.linalg.norm(self.S.entries @ ones - ones)),
            "reconstruction_error": self.reconstruction_error,
        }


@dataclass(frozen=True, eq=False)
class BlockDecomposition:
    """U = ½ diag(A, B) [[I+Z, I−Z], [I−Z, I+Z]] diag(I, C)."""

    A: UnitaryMatrix
    B: UnitaryMatrix
    C: UnitaryMatrix
    Z: UnitaryMatrix
    reconstruction_error: float

    def summary(self) -> Dict[str, Any]:
        return {
            "block_size": self.A.n,
            "reconstruction_error": self.reconstruction_error,
        }


@dataclass(frozen=True)
class U2Solutions:
    """Biunimodular vectors of a 2×2 unitary.

    When `continuum` is set every (1, d) with |d| = 1 is biunimodular and
    `vectors` holds the representative (1, 1).
    """

    vectors: Tuple[TorusVector, ...]
    continuum: bool

    def family(self, d: complex) -> TorusVector:
        if not self.continuum:
            raise ValueError("the solution set is finite")
        return TorusVector(np.array([1.0, d]))


@dataclass(frozen=True)
class U2Params:
    """A = ½ [[a(1+z), ac(1−z)], [b(1−z), bc(1+z)]]."""

    a: complex
    b: complex
    c: complex
    z: complex


@dataclass(frozen=True)
class U3Params:
    """A = diag(λ₁, λ₂, λ₃) · T(α, β, γ, z) · diag(1, λ₄, λ₅)."""

    alpha: float
    beta: float
    gamma: float
    z: complex
    left_phases: Tuple[complex, complex, complex]
    right_phases: Tuple[complex, complex]
    reconstruction_error: float = 0.0

    def summary(self) -> Dict[str, Any]:
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "gamma": self.gamma,
            "reconstruction_error": self.reconstruction_error,
        }


@dataclass(frozen=True)
class EulerAngles:
    """diag(λ₁, λ₂, λ₃) · G_β · Y^z_α · X_γ · diag(1, λ₄, λ₅).

    G is the rotation X (about the first axis) or Z (about the last one)
    depending on `form`.
    """

    form: Literal["x", "z"]
    alpha: float
    beta: float
    gamma: float
    z: complex
    left_phases: Tuple[complex, complex, complex]
    right_phases: Tuple[complex, complex]
    reconstruction_error: float = 0.0


@dataclass(frozen=True)
class EulerFactors:
    x_form: EulerAngles
    z_form: EulerAngles


@dataclass(frozen=True)
class RankReport:
    """Rank of the imaginary part of S and of the factorization Jacobian."""

    n: int
    im_rank: int
    jac_rank: int
    tolerance: float

    @property
    def full_rank(self) -> bool:
        return self.jac_rank == self.n**2

    def summary(self) -> Dict[str, Any]:
        return {**self.__dict__, "full_rank": self.full_rank}


@dataclass(frozen=True)
class PhasingReport:
    n: int
    manifold_dim: int
    tolerance: float

    @property
    def stabilizer_dim(self) -> int:
        return 2 * self.n - 1 - self.manifold_dim

    def summary(self) -> Dict[str, Any]:
        return {**self.__dict__, "stabilizer_dim": self.stabilizer_dim}


@dataclass(frozen=True, eq=False)
class RegionGrid:
    """Boolean region masks over the square [−π, π)² on a periodic grid.

    `values[j][row, col]` refers to the point (x, y) = (axis[col], axis[row]).
    """

    resolution: int
    axis: npt.NDArray[np.float64]
    values: Tuple[npt.NDArray[np.bool_], ...]
    preset: str = "abs"

    @property
    def covered(self) -> bool:
        return bool(np.logical_or.reduce(self.values).all())


@dataclass(frozen=True, eq=False)
class KnownSequence:
    """A closed-form biunimodular vector for the Fourier matrix."""

    kind: Literal["gauss", "bjorck"]
    n: int
    parameters: Tuple[Any, ...]
    vector: TorusVector


@dataclass(frozen=True, eq=False)
class Orbit:
    """A class of Fourier biunimodular vectors under the symmetry group."""

    representative: TorusVector
    cardinality: int
    members_hash: str
    members: ComplexArray = field(repr=False)

    @property
    def n(self) -> int:
        return self.representative.n

    def summary(self) -> Dict[str, Any]:
        return {"n": self.n, "cardinality": self.cardinality}


@dataclass(frozen=True, eq=False)
class OrbitCensus:
    n: int
    delta: float
    tau: float
    orbits: Tuple[Orbit, ...]
    starts: int
    converged_runs: int
    matches_reference: Optional[bool] = None

    @property
    def total_vectors(self) -> int:
        return sum(orbit.cardinality for orbit in self.orbits)

    @property
    def lengths(self) -> List[int]:
        return [orbit.cardinality for orbit in self.orbits]

    def summary(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "orbits": self.lengths,
            "total": self.total_vectors,
            "matches_reference": self.matches_reference,
        }


@dataclass(frozen=True)
class BenchRow:
    dim: int
    matrices: int
    successes: int
    avg_starts: float
    max_starts_used: int
    wall_time: float


@dataclass(frozen=True)
class BenchReport:
    rows: Tuple[BenchRow, ...]

    def summary(self) -> Dict[str, Any]:
        return {
            "dims": [row.dim for row in self.rows],
            "successes": [row.successes for row in self.rows],
            "avg_starts": [row.avg_starts for row in self.rows],
        }


@dataclass(frozen=True, eq=False)
class DyadicTree:
    """Unimodular parameters of a U(2^k) matrix, one block level per node.

    A leaf (size 1) holds a single `phase`; an inner node holds the trees of
    its four blocks in the order A, B, C, Z.
    """

    size: int
    phase: Optional[complex] = None
    children: Tuple["DyadicTree", ...] = ()

    def __post_init__(self) -> None:
        if self.size == 1:
            if self.phase is None or abs(abs(self.phase) - 1.0) > 1e-9 or self.children:
                raise ValidationError("a leaf needs exactly one unimodular phase")
        elif len(self.children) != 4 or any(c.size != self.size // 2 for c in self.children):
            raise ValidationError(f"a node of size {self.size} needs four children of half size")

    def flatten(self) -> ComplexArray:
        """All 4^k leaf phases, depth first in A, B, C, Z order."""
        if self.size == 1:
            return np.array([self.phase], dtype=np.complex128)
        return np.concatenate([child.flatten() for child in self.children])
