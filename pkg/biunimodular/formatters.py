"""Plot-ready CSV tables and PGM bitmaps."""

import csv
import io
import logging

import fsspec
import numpy as np
import numpy.typing as npt
from typing_extensions import List, Sequence

from .results import BenchReport, OrbitCensus, RegionGrid

logger = logging.getLogger(__name__)


def _to_csv(header: Sequence[str], rows: List[Sequence[object]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def region_grid_csv(grid: RegionGrid) -> str:
    """One row per grid point: x, y and a 0/1 column per region."""
    header = ["x", "y", *(f"r{j + 1}" for j in range(len(grid.values)))]
    rows: List[Sequence[object]] = []
    for row, y in enumerate(grid.axis):
        for col, x in enumerate(grid.axis):
            rows.append([f"{x:.9f}", f"{y:.9f}", *(int(mask[row, col]) for mask in grid.values)])
    return _to_csv(header, rows)


def census_csv(census: OrbitCensus) -> str:
    """Orbit representatives, one row per entry."""
    rows: List[Sequence[object]] = []
    for index, orbit in enumerate(census.orbits):
        for k, value in enumerate(orbit.representative.entries):
            rows.append([census.n, index, orbit.cardinality, k, repr(float(value.real)), repr(float(value.imag))])
    return _to_csv(["n", "orbit", "cardinality", "k", "re", "im"], rows)


def bench_csv(report: BenchReport) -> str:
    rows: List[Sequence[object]] = [
        [row.dim, row.matrices, row.successes, f"{row.avg_starts:.4f}", row.max_starts_used, f"{row.wall_time:.3f}"]
        for row in report.rows
    ]
    return _to_csv(
        ["dim", "matrices", "successes", "avg_starts", "max_starts_used", "wall_time"], rows
    )


def pgm_bytes(mask: npt.NDArray[np.bool_]) -> bytes:
    """Binary PGM (P5) with white for true, black for false; row 0 is the top row.

    The grid's first row is y = −π, so the array is flipped to put y = π on top.
    """
    pixels = np.where(np.flipud(mask), 255, 0).astype(np.uint8)
    height, width = pixels.shape
    return f"P5\n{width} {height}\n255\n".encode("ascii") + pixels.tobytes()


def write_text(text: str, path: str) -> None:
    with fsspec.open(path, "w") as f:
        f.write(text)
    logger.debug(f"Wrote {path}")


def write_bytes(data: bytes, path: str) -> None:
    with fsspec.open(path, "wb") as f:
        f.write(data)
    logger.debug(f"Wrote {path}")


def ensure_dir(url: str) -> str:
    """Create the directory `url` if needed and return it without a trailing slash."""
    fs, root = fsspec.core.url_to_fs(url)
    fs.makedirs(root, exist_ok=True)
    return url.rstrip("/")
