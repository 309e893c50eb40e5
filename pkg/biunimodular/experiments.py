"""Effectiveness benchmark: how many random starts a search needs on Haar matrices."""

import logging
import time
from dataclasses import dataclass

import numpy as np
from typing_extensions import Optional, Tuple

from .linalg import haar_random_unitary
from .results import BenchReport, BenchRow, SearchResult
from .search import SearchConfig, multi_start_search
from .settings import worker_count
from .utils._parallel import parallel_map

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BenchConfig:
    """Parameters of the benchmark.

    Parameters:
        dims: matrix dimensions to test.
        matrices_per_dim: Haar matrices drawn per dimension.
        delta: search precision, in (0, 1/8].
        max_starts: starts allowed per matrix.
        max_iters: iterations allowed per start.
        seed: root seed; matrix i of dimension d uses the stream (seed, d, i).
        workers: threads across matrices (capped by BIUNI_WORKERS).
    """

    dims: Tuple[int, ...] = (3, 5, 10, 25)
    matrices_per_dim: int = 100
    delta: float = 1e-10
    max_starts: int = 1_000
    max_iters: int = 10_000
    seed: int = 0
    workers: Optional[int] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "dims", tuple(self.dims))
        if not self.dims or any(d < 1 for d in self.dims):
            raise ValueError(f"dims must be positive integers, got {self.dims}")
        if min(self.matrices_per_dim, self.max_starts, self.max_iters) < 1:
            raise ValueError("matrices_per_dim, max_starts and max_iters must be positive")
        if not 0 < self.delta <= 0.125:
            raise ValueError(f"delta must lie in (0, 1/8], got {self.delta}")
        if self.seed < 0:
            raise ValueError(f"seed must be non-negative, got {self.seed}")


def _one_matrix(cfg: BenchConfig, dim: int, index: int) -> SearchResult:
    stream = np.random.SeedSequence([cfg.seed, dim, index])
    matrix_seed, search_seed = stream.spawn(2)
    matrix = haar_random_unitary(dim, matrix_seed)
    search = SearchConfig(
        delta=cfg.delta,
        max_iters=cfg.max_iters,
        max_starts=cfg.max_starts,
        seed=int(search_seed.generate_state(1)[0]),
        workers=1,
    )
    return multi_start_search(matrix, search)


def run_bench(cfg: BenchConfig) -> BenchReport:
    """Search every Haar matrix and aggregate starts per dimension.

    The report does not depend on the number of workers, except for the
    wall times.

    ???+ Example
        ```python
        report = run_bench(BenchConfig(dims=(3,), matrices_per_dim=10))
        report.rows[0].successes  # 10
        ```
    """
    workers = worker_count(cfg.workers)
    rows = []
    for dim in cfg.dims:
        started = time.perf_counter()
        results = parallel_map(
            lambda index: _one_matrix(cfg, dim, index),
            list(range(cfg.matrices_per_dim)),
            workers,
        )
        elapsed = time.perf_counter() - started
        starts = [result.starts_used for result in results]
        row = BenchRow(
            dim=dim,
            matrices=cfg.matrices_per_dim,
            successes=sum(result.converged for result in results),
            avg_starts=float(np.mean(starts)),
            max_starts_used=max(starts),
            wall_time=elapsed,
        )
        logger.info(
            f"dim={dim}: {row.successes}/{row.matrices} converged, "
            f"avg starts {row.avg_starts:.4f}, max {row.max_starts_used}, {elapsed:.1f}s"
        )
        rows.append(row)
    return BenchReport(rows=tuple(rows))
