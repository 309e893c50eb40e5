"""Numerical tolerance presets and runtime knobs."""

import logging
import os
from dataclasses import dataclass

from typing_extensions import Optional

logger = logging.getLogger(__name__)

WORKERS_ENV_VAR = "BIUNI_WORKERS"


@dataclass(frozen=True)
class Tolerances:
    """Tolerances used when validating inputs and checking invariants."""

    unitarity: float = 1e-10
    unimodularity: float = 1e-12
    rank_cutoff: float = 1e-9
    reconstruction: float = 1e-9


DEFAULT = Tolerances()
# Matrices read from files are usually printed with limited precision.
RELAXED = Tolerances(unitarity=1e-8, unimodularity=1e-10, reconstruction=1e-8)


def worker_count(requested: Optional[int] = None) -> int:
    """Resolve the number of threads used by the worker pool.

    The `BIUNI_WORKERS` environment variable acts as a cap on whatever the
    caller asks for; without a request the cap itself is used, and without
    either a single worker.

    Parameters:
        requested: number of workers asked for by the caller, if any.

    Returns:
        A positive number of workers.

    Raises:
        ValueError: `requested` or `BIUNI_WORKERS` is not a positive integer.
    """
    cap: Optional[int] = None
    raw = os.environ.get(WORKERS_ENV_VAR)
    if raw:
        try:
            cap = int(raw)
        except ValueError as ex:
            raise ValueError(
                f"{WORKERS_ENV_VAR} must be a positive integer, got {raw!r}"
            ) from ex
        if cap < 1:
            raise ValueError(f"{WORKERS_ENV_VAR} must be a positive integer, got {cap}")

    if requested is not None and requested < 1:
        raise ValueError(f"workers must be a positive integer, got {requested}")

    if requested is None:
        workers = cap or 1
    elif cap is not None:
        workers = min(requested, cap)
    else:
        workers = requested
    logger.debug(f"Using {workers} worker(s)")
    return workers
