"""High-level entry points used by the command line and notebooks."""

import logging
from dataclasses import dataclass

import numpy as np
from typing_extensions import Any, Literal, Optional, Tuple, Union

from .blocks import block2n_decompose, block2n_synthesize, u4_from_phases, u4_params
from .errors import DimensionError
from .factorize import decompose, find_biunimodular, lar_decompose, synthesize
from .formatters import ensure_dir, pgm_bytes, region_grid_csv, write_bytes, write_text
from .io import load_matrix
from .linalg import ComplexArray, UnitaryMatrix, fourier_matrix, haar_random_unitary, square_array
from .lowdim import u3_canonicalize, u3_matrix
from .manifold import (
    EPreset,
    full_rank_witness,
    im_rank,
    jacobian_rank,
    phasing_dim,
    region_grid,
    triple_point_clusters,
)
from .results import RankReport, RegionGrid, SearchResult
from .search import SearchConfig, multi_start_search, run_from
from .settings import RELAXED

logger = logging.getLogger(__name__)

FactorMode = Literal["lar", "recursive", "block2n", "u3", "u4"]
DiagMode = Literal["rank", "phasing", "jacobian"]

FACTOR_MODES: Tuple[FactorMode, ...] = ("lar", "recursive", "block2n", "u3", "u4")
DIAG_MODES: Tuple[DiagMode, ...] = ("rank", "phasing", "jacobian")


@dataclass(frozen=True, eq=False)
class Factorization:
    """A decomposition record together with how well it rebuilds the input."""

    mode: FactorMode
    record: Any
    reconstruction_error: float


def load_source(
    path: Optional[str] = None,
    fourier: Optional[int] = None,
    haar: Optional[int] = None,
    seed: int = 0,
    **storage_options: Any,
) -> UnitaryMatrix:
    """Resolve exactly one matrix source: a JSON file, F_n or a Haar sample.

    Parameters:
        path: matrix file in the JSON matrix schema (any fsspec URL).
        fourier: build the Fourier matrix of this size.
        haar: draw a Haar random unitary of this size with `seed`.
        seed: seed for `haar`.

    Raises:
        ValueError: none or more than one source was given.
    """
    given = [name for name, value in (("path", path), ("fourier", fourier), ("haar", haar)) if value is not None]
    if len(given) != 1:
        raise ValueError(f"exactly one matrix source is required, got {given or 'none'}")
    if path is not None:
        logger.debug(f"Loading matrix from {path}")
        return load_matrix(path, RELAXED.unitarity, **storage_options)
    if fourier is not None:
        return fourier_matrix(fourier)
    assert haar is not None
    return haar_random_unitary(haar, seed)


def search_vector(
    matrix: Any,
    cfg: Optional[SearchConfig] = None,
    start_vector: Optional[Any] = None,
) -> SearchResult:
    """Multi-start search, or a single run from `start_vector` when given.

    ???+ Tip
        Starting F_2 from the all-ones vector hits a fixed point with a
        zero image entry, so that run never converges.
    """
    cfg = cfg or SearchConfig()
    if start_vector is None:
        result = multi_start_search(matrix, cfg)
    else:
        result = run_from(matrix, start_vector, cfg)
    logger.info(
        f"Search {'converged' if result.converged else 'did not converge'}: "
        f"residual {result.residual:.3e} after {result.starts_used} start(s)"
    )
    return result


def _max_error(rebuilt: Any, original: ComplexArray) -> float:
    return float(np.max(np.abs(np.asarray(rebuilt) - original)))


def factor(matrix: Any, mode: FactorMode, cfg: Optional[SearchConfig] = None) -> Factorization:
    """Decompose `matrix` with one of the factorizations and measure the round trip.

    Modes:
        * **lar**: A = D_L S D_R with S fixing the all-ones vector.
        * **recursive**: the n² phases a_jk of the recursive synthesis.
        * **block2n**: the A, B, C, Z blocks of an even-size matrix.
        * **u3**: T-form parameters and phases of a U(3) matrix.
        * **u4**: the sixteen phases of a U(4) matrix.

    Raises:
        DimensionError: the size does not suit the mode.
        SearchFailedError: no biunimodular vector was found (lar, recursive).
    """
    a = square_array(matrix)
    cfg = cfg or SearchConfig()
    record: Any
    if mode == "lar":
        record = lar_decompose(a, find_biunimodular(a, cfg))
        error = record.reconstruction_error
    elif mode == "recursive":
        record = decompose(a, cfg)
        error = _max_error(synthesize(record).entries, a)
    elif mode == "block2n":
        record = block2n_decompose(a)
        error = _max_error(
            block2n_synthesize(record.A.entries, record.B.entries, record.C.entries, record.Z.entries).entries,
            a,
        )
    elif mode == "u3":
        if a.shape[0] != 3:
            raise DimensionError(f"mode u3 needs a 3x3 matrix, got {a.shape[0]}x{a.shape[1]}")
        record = u3_canonicalize(a)
        error = _max_error(u3_matrix(record).entries, a)
    elif mode == "u4":
        record = u4_params(a)
        error = _max_error(u4_from_phases(**record).entries, a)
    else:
        raise ValueError(f"unknown factorization mode {mode!r}, expected one of {FACTOR_MODES}")
    logger.info(f"Factorization {mode} of size {a.shape[0]}: reconstruction {error:.3e}")
    return Factorization(mode=mode, record=record, reconstruction_error=error)


def diagnose(
    mode: DiagMode,
    matrix: Optional[Any] = None,
    n: Optional[int] = None,
    tol: float = 1e-9,
) -> Any:
    """Manifold diagnostics.

    Modes:
        * **rank**: rank report of `matrix` (or of the full-rank witness of
          size `n` when no matrix is given), which must fix the all-ones vector.
        * **jacobian**: like rank, with the Jacobian rank computed directly.
        * **phasing**: dimension of the diagonal-phase orbit of `matrix`.

    Returns:
        A RankReport or PhasingReport.
    """
    if matrix is None:
        if n is None:
            raise ValueError("either a matrix or a size n is required")
        if mode == "phasing":
            matrix = fourier_matrix(n)
        else:
            matrix = full_rank_witness(n, tol)
    if mode == "rank":
        report: Any = im_rank(matrix, tol)
    elif mode == "jacobian":
        base: RankReport = im_rank(matrix, tol)
        report = RankReport(
            n=base.n, im_rank=base.im_rank, jac_rank=jacobian_rank(matrix, tol), tolerance=tol
        )
    elif mode == "phasing":
        report = phasing_dim(matrix, tol)
    else:
        raise ValueError(f"unknown diagnostic mode {mode!r}, expected one of {DIAG_MODES}")
    logger.info(f"Diagnostic {mode}: {report.summary()}")
    return report


def regions(
    matrix: Any,
    resolution: int = 512,
    preset: Union[str, EPreset] = "abs",
    out_dir: Optional[str] = None,
    prefix: str = "regions",
) -> Tuple[RegionGrid, Optional[int]]:
    """Compute the region grid of a 3×3 matrix and optionally write its artifacts.

    With `out_dir` set, writes `<prefix>.csv` and one `<prefix>_r<j>.pgm`
    bitmap per region.

    Returns:
        The grid and its number of triple-boundary clusters (None for a
        single-region preset).
    """
    grid = region_grid(matrix, resolution, preset)
    clusters = triple_point_clusters(grid) if len(grid.values) == 3 else None
    if out_dir is not None:
        base = ensure_dir(out_dir)
        write_text(region_grid_csv(grid), f"{base}/{prefix}.csv")
        for j, mask in enumerate(grid.values):
            write_bytes(pgm_bytes(mask), f"{base}/{prefix}_r{j + 1}.pgm")
        logger.info(f"Wrote region artifacts to {base}")
    return grid, clusters
