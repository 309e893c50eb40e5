"""Rank and dimension diagnostics for the map (D₁, S, D₂) ↦ D₁·S·D₂.

Here D₁ runs over diagonal phase matrices, D₂ over those with first entry 1
and S over the unitaries fixing the all-ones vector. The image is the set of
unitaries with a biunimodular vector. The module also samples the three
regions |(Au)_j| ≥ 1 over u = (1, e^{ix}, e^{iy}) for 3×3 matrices.
"""

import logging
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
import scipy.linalg
import scipy.ndimage
from typing_extensions import Any, List, Optional, Tuple, Union

from .errors import DimensionError, ValidationError
from .linalg import ComplexArray, UnitaryMatrix, fourier_matrix, square_array
from .results import PhasingReport, RankReport, RegionGrid
from .settings import DEFAULT

logger = logging.getLogger(__name__)


def _numerical_rank(columns: npt.NDArray[np.float64], tol: float, scale: float = 0.0) -> int:
    if columns.size == 0:
        return 0
    sigma = scipy.linalg.svdvals(columns)
    cutoff = tol * max(float(sigma[0]) if sigma.size else 0.0, scale)
    return int(np.sum(sigma > cutoff))


def _realify(m: ComplexArray) -> npt.NDArray[np.float64]:
    return np.concatenate([m.real.ravel(), m.imag.ravel()])


def _check_fixes_ones(s: ComplexArray) -> None:
    ones = np.ones(s.shape[0])
    defect = float(np.linalg.norm(s @ ones - ones))
    if defect > 1e-8:
        raise ValidationError(f"S does not fix the all-ones vector (defect {defect:.3e})")


def im_rank(matrix: Any, tol: float = DEFAULT.rank_cutoff) -> RankReport:
    """Rank of Im(S) for S ∈ Fix(𝟏), and the Jacobian rank (n−1)² + n + rank Im(S).

    Singular values of Im(S) count when they exceed `tol` times the larger of
    the top singular value and 1, so rounding noise in a real S is ignored.

    Raises:
        ValidationError: ‖S𝟏 − 𝟏‖₂ > 1e−8.
    """
    s = square_array(matrix)
    _check_fixes_ones(s)
    n = s.shape[0]
    rank = _numerical_rank(s.imag, tol, scale=1.0)
    return RankReport(n=n, im_rank=rank, jac_rank=(n - 1) ** 2 + n + rank, tolerance=tol)


def _fix_ones_algebra(n: int) -> List[ComplexArray]:
    """A real basis of the Lie algebra of Fix(𝟏), F (0 ⊕ u(n−1)) F*."""
    f = np.asarray(fourier_matrix(n).entries)
    basis = []
    for j in range(1, n):
        for k in range(j, n):
            if j == k:
                elements = [1j * np.outer(np.eye(n)[j], np.eye(n)[j])]
            else:
                e = np.zeros((n, n), dtype=np.complex128)
                e[j, k] = 1.0
                elements = [e - e.T, 1j * (e + e.T)]
            basis.extend(f @ x @ f.conj().T for x in elements)
    return basis


def jacobian_rank(matrix: Any, tol: float = DEFAULT.rank_cutoff) -> int:
    """Rank of the derivative (X, Y, Z) ↦ XS + Y + SZ at (I, S, I), computed directly.

    X runs over imaginary diagonal matrices, Z over those with zero first
    entry and Y over the tangent space S·𝔣 of Fix(𝟏) at S.
    """
    s = square_array(matrix)
    _check_fixes_ones(s)
    n = s.shape[0]
    columns = []
    for k in range(n):
        unit = np.zeros((n, n), dtype=np.complex128)
        unit[k, k] = 1j
        columns.append(_realify(unit @ s))
        if k >= 1:
            columns.append(_realify(s @ unit))
    columns.extend(_realify(s @ y) for y in _fix_ones_algebra(n))
    return _numerical_rank(np.array(columns).T, tol)


def full_rank_witness(n: int, tol: float = DEFAULT.rank_cutoff) -> UnitaryMatrix:
    """S = i·P(I − J) + J with P the cyclic shift and J = 𝟏𝟏ᵀ/n.

    S acts as iP on the complement of 𝟏 and fixes 𝟏, so Im(S) = P(I − J)
    has rank n − 1 and the derivative at (I, S, I) has full rank n².

    Raises:
        DimensionError: n < 2.
    """
    if n < 2:
        raise DimensionError(f"the witness needs n >= 2, got {n}")
    shift = np.roll(np.eye(n), 1, axis=0)
    averaging = np.full((n, n), 1.0 / n)
    witness = UnitaryMatrix(1j * shift @ (np.eye(n) - averaging) + averaging)
    report = im_rank(witness, tol)
    if not report.full_rank:
        raise RuntimeError(f"witness for n={n} has Jacobian rank {report.jac_rank}")
    return witness


def phasing_dim(matrix: Any, tol: float = DEFAULT.rank_cutoff) -> PhasingReport:
    """Dimension of the orbit {D₁ A D₂} of A under diagonal phases.

    It is the rank of (X, Z) ↦ XA + AZ on the (2n−1)-dimensional space of
    imaginary diagonal X and imaginary diagonal Z with Z₁₁ = 0.

    Examples:
        ```python
        phasing_dim(np.eye(4)).manifold_dim  # 4
        phasing_dim(fourier_matrix(4)).manifold_dim  # 7
        ```
    """
    a = square_array(matrix)
    n = a.shape[0]
    columns = []
    for k in range(n):
        unit = np.zeros((n, n), dtype=np.complex128)
        unit[k, k] = 1j
        columns.append(_realify(unit @ a))
        if k >= 1:
            columns.append(_realify(a @ unit))
    dim = _numerical_rank(np.array(columns).T, tol)
    return PhasingReport(n=n, manifold_dim=dim, tolerance=tol)


@dataclass(frozen=True)
class EPreset:
    """The model region s·cos x + t·cos y + cos(x − y) ≥ 0, s, t > 0.

    After shifting x and y by the phases of its entries, the region
    |(Au)_j| ≥ 1 of a row (p, q, r) with non-zero entries is this region for
    s = |p|/|r| and t = |p|/|q|.
    """

    s: float
    t: float

    def __post_init__(self) -> None:
        if not (self.s > 0 and self.t > 0):
            raise ValidationError(f"s and t must be positive, got {self.s}, {self.t}")

    def mask(self, x: npt.NDArray[np.float64], y: npt.NDArray[np.float64]) -> npt.NDArray[np.bool_]:
        return self.s * np.cos(x) + self.t * np.cos(y) + np.cos(x - y) >= 0

    @property
    def label(self) -> str:
        return f"E(s={self.s:g},t={self.t:g})"


def e_presets(matrix: Any) -> Tuple[EPreset, ...]:
    """The EPreset of every row of a 3×3 matrix without zero entries."""
    a = _three_by_three(matrix)
    moduli = np.abs(a)
    if np.any(moduli <= 1e-12):
        raise ValidationError("rows with a zero entry have no model region")
    return tuple(EPreset(s=row[0] / row[2], t=row[0] / row[1]) for row in moduli)


def _three_by_three(matrix: Any) -> ComplexArray:
    a = square_array(matrix)
    if a.shape[0] != 3:
        raise DimensionError(f"region grids need a 3x3 matrix, got {a.shape[0]}x{a.shape[1]}")
    return a


def grid_axis(resolution: int) -> npt.NDArray[np.float64]:
    """x_i = −π + 2πi/resolution, i = 0, …, resolution − 1."""
    return -np.pi + 2 * np.pi * np.arange(resolution) / resolution


def region_grid(
    matrix: Optional[Any],
    resolution: int = 512,
    preset: Union[str, EPreset] = "abs",
) -> RegionGrid:
    """Sample the regions R_j = {(x, y) : |(Au)_j| ≥ 1}, u = (1, e^{ix}, e^{iy}).

    The grid is periodic: the points −π + 2πi/resolution in each direction.
    With an EPreset the single model region is sampled and the matrix is
    not used.

    Parameters:
        matrix: a 3×3 unitary (ignored for an EPreset).
        resolution: points per axis, at least 16.
        preset: "abs" or an EPreset.

    Returns:
        A RegionGrid with three masks ("abs") or one (EPreset).
    """
    if resolution < 16:
        raise ValidationError(f"resolution must be at least 16, got {resolution}")
    axis = grid_axis(resolution)
    x, y = np.meshgrid(axis, axis)

    if isinstance(preset, EPreset):
        return RegionGrid(resolution, axis, (preset.mask(x, y),), preset=preset.label)
    if preset != "abs":
        raise ValidationError(f"unknown preset {preset!r}")

    a = _three_by_three(matrix)
    ex, ey = np.exp(1j * x), np.exp(1j * y)
    masks = tuple(
        np.abs(a[j, 0] + a[j, 1] * ex + a[j, 2] * ey) >= 1.0 - 1e-12 for j in range(3)
    )
    grid = RegionGrid(resolution, axis, masks, preset="abs")
    if not grid.covered:
        logger.warning(f"Regions leave {np.sum(~np.logical_or.reduce(masks))} grid points uncovered")
    return grid


def triple_point_clusters(grid: RegionGrid) -> int:
    """Count the clusters of grid cells where all three region boundaries meet.

    A cell (the square spanned by four neighbouring grid points, wrapping
    around the edges) is marked when every mask changes value among its
    corners. Marked cells are grouped with 8-connectivity, again across the
    periodic edges.
    """
    if len(grid.values) != 3:
        raise ValidationError("triple points need three regions")
    marked = np.ones((grid.resolution, grid.resolution), dtype=bool)
    for mask in grid.values:
        corners = np.stack(
            [mask, np.roll(mask, -1, 0), np.roll(mask, -1, 1), np.roll(np.roll(mask, -1, 0), -1, 1)]
        )
        marked &= corners.any(axis=0) & ~corners.all(axis=0)

    labels, count = scipy.ndimage.label(marked, structure=np.ones((3, 3), dtype=int))
    if count == 0:
        return 0

    parent = list(range(count + 1))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    last = grid.resolution - 1
    for i in range(grid.resolution):
        for di in (-1, 0, 1):
            j = (i + di) % grid.resolution
            for first, second in ((labels[0, i], labels[last, j]), (labels[i, 0], labels[j, last])):
                if first and second:
                    parent[find(first)] = find(second)

    clusters = len({find(label) for label in range(1, count + 1)})
    logger.debug(f"{count} raw clusters, {clusters} after wrapping the edges")
    return clusters
