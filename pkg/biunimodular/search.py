"""Alternating-projection search for near-biunimodular vectors.

The iteration V ↦ sign(A*(sign(AV))) never decreases ‖AV‖₁, which is at
most n, with equality exactly at the biunimodular vectors of A. A run stops
once ‖AV‖₁ > n − δ.
"""

import dataclasses
import logging
from collections import deque
from dataclasses import dataclass

import numpy as np
from typing_extensions import Any, List, Literal, Optional, Self

from .errors import CertificateError, NotBiunimodularError
from .linalg import (
    ZERO_MODULUS,
    ComplexArray,
    ComplexVector,
    TorusVector,
    check_matvec,
    sign1_array,
    sign_array,
    square_array,
)
from .results import NearBiuniCertificate, PredicateReport, SearchResult
from .settings import worker_count
from .utils._parallel import first_in_batches

logger = logging.getLogger(__name__)

Projection = Literal["sign", "sign1"]


@dataclass(frozen=True)
class SearchConfig:
    """Parameters of an alternating-projection search.

    Parameters:
        delta: stopping precision; a run converges once ‖AV‖₁ > n − delta.
        max_iters: iteration budget per start.
        max_starts: number of random starting vectors.
        seed: seed of the starting-vector stream.
        record_trace: keep the sequence of ‖AV_j‖₁ values.
        projection: "sign" (zero off the support, a zero entry aborts the run)
            or "sign1" (one off the support).
        stagnation_window: a run is abandoned when ‖AV‖₁ improves by less
            than `stagnation_tol` over this many iterations.
        stagnation_tol: see `stagnation_window`.
        workers: threads used by `multi_start_search`; capped by the
            `BIUNI_WORKERS` environment variable.
    """

    delta: float = 1e-10
    max_iters: int = 10_000
    max_starts: int = 1_000
    seed: int = 0
    record_trace: bool = False
    projection: Projection = "sign"
    stagnation_window: int = 50
    stagnation_tol: float = 1e-15
    workers: Optional[int] = None

    def __post_init__(self) -> None:
        if not self.delta > 0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if self.max_iters < 1 or self.max_starts < 1:
            raise ValueError("max_iters and max_starts must be at least 1")
        if self.seed < 0:
            raise ValueError(f"seed must be non-negative, got {self.seed}")
        if self.projection not in ("sign", "sign1"):
            raise ValueError(f"unknown projection {self.projection!r}")
        if self.stagnation_window < 1:
            raise ValueError("stagnation_window must be at least 1")
        if not self.stagnation_tol >= 0:
            raise ValueError(f"stagnation_tol must be non-negative, got {self.stagnation_tol}")

    @property
    def certified(self) -> bool:
        """Whether delta is small enough for the runtime certificate bounds."""
        return self.delta <= 0.125

    def parameters(self, **kwargs: Any) -> Self:
        """Return a copy with some fields replaced.

        ???+ Example
            ```python
            cfg = SearchConfig().parameters(delta=1e-7, max_iters=30_000)
            ```

        Raises:
            ValueError: A keyword is not a field name or a value is invalid.
        """
        names = {f.name for f in dataclasses.fields(self)}
        for key in kwargs:
            if key not in names:
                raise ValueError(f"Unknown key {key}")
        return dataclasses.replace(self, **kwargs)


def random_start(n: int, seed: int, index: int) -> ComplexArray:
    """The `index`-th starting vector of the stream `seed`: i.i.d. uniform phases."""
    rng = np.random.default_rng(np.random.SeedSequence([seed, index]))
    return np.exp(2j * np.pi * rng.random(n))


def project_step(matrix: Any, v: Any) -> ComplexVector:
    """One alternating-projection step sign(A*(sign(Av))).

    Returns:
        A TorusVector, or a plain ComplexVector with zero entries when
        A*(sign(Av)) vanishes somewhere; callers check with `isinstance`.
    """
    a, vec = check_matvec(matrix, v)
    stepped = sign_array(a.conj().T @ sign_array(a @ vec))
    if np.any(stepped == 0):
        return ComplexVector(stepped)
    return TorusVector(stepped)


def _run(a: ComplexArray, a_h: ComplexArray, v: ComplexArray, cfg: SearchConfig) -> SearchResult:
    n = a.shape[0]
    sign = sign1_array if cfg.projection == "sign1" else sign_array
    w = a @ v
    value = float(np.sum(np.abs(w)))
    trace: Optional[List[float]] = [value] if cfg.record_trace else None
    recent = deque([value], maxlen=cfg.stagnation_window + 1)

    iterations = 0
    while value <= n - cfg.delta and iterations < cfg.max_iters:
        u = a_h @ sign(w)
        if cfg.projection == "sign" and np.any(np.abs(u) <= ZERO_MODULUS):
            logger.debug(f"Zero entry after {iterations} iterations, abandoning run")
            break
        v = sign(u)
        w = a @ v
        value = float(np.sum(np.abs(w)))
        iterations += 1
        recent.append(value)
        if trace is not None:
            trace.append(value)
        if len(recent) == recent.maxlen and value - recent[0] < cfg.stagnation_tol:
            logger.debug(f"Stagnated at residual {n - value:.3e} after {iterations} iterations")
            break

    return SearchResult(
        vector=TorusVector(v),
        residual=n - value,
        iterations=iterations,
        starts_used=1,
        converged=value > n - cfg.delta,
        trace=tuple(trace) if trace is not None else None,
    )


def run_from(matrix: Any, v0: Any, cfg: SearchConfig) -> SearchResult:
    """Iterate the projection from `v0` until convergence or the budget ends.

    Non-convergence is reported through `SearchResult.converged`, never raised.
    """
    a, v = check_matvec(matrix, v0)
    return _run(a, a.conj().T, sign1_array(v), cfg)


def multi_start_search(matrix: Any, cfg: Optional[SearchConfig] = None) -> SearchResult:
    """Run from random starting vectors until one converges.

    Starts are evaluated in batches of `cfg.workers` threads; the converged
    run with the lowest start index is returned, so the result depends only
    on the seed. Without a converged run the best-residual run is returned
    with `converged=False` and `starts_used = cfg.max_starts`.

    Parameters:
        matrix: a unitary matrix.
        cfg: search parameters, `SearchConfig()` by default.

    Returns:
        A SearchResult with `starts_used` counting the starts consumed.

    Examples:
        ```python
        result = multi_start_search(fourier_matrix(7), SearchConfig(seed=1))
        result.converged  # True
        ```
    """
    cfg = cfg or SearchConfig()
    a = square_array(matrix)
    a_h = a.conj().T
    n = a.shape[0]

    def attempt(index: int) -> SearchResult:
        return _run(a, a_h, random_start(n, cfg.seed, index), cfg)

    index, results = first_in_batches(
        attempt,
        cfg.max_starts,
        lambda result: result.converged,
        worker_count(cfg.workers),
    )
    if index is not None:
        best = results[index]
        starts_used = index + 1
    else:
        best = min(results, key=lambda result: result.residual)
        starts_used = cfg.max_starts
        logger.info(
            f"No start converged out of {cfg.max_starts}, best residual {best.residual:.3e}"
        )
    logger.debug(f"Search on n={n} used {starts_used} start(s)")
    return dataclasses.replace(best, starts_used=starts_used)


def refine(
    matrix: Any,
    v: Any,
    step_tol: float = 1e-14,
    max_iters: int = 100_000,
    patience: int = 200,
) -> TorusVector:
    """Keep iterating past the δ-stop until the iterates settle.

    Stops when ‖V_{j+1} − V_j‖_∞ ≤ `step_tol`, or when the step has not
    shrunk for `patience` iterations (rounding noise floor).

    Returns:
        The refined vector, rotated so that its first entry is 1.

    Raises:
        ValueError: max_iters or patience is smaller than 1.
    """
    if max_iters < 1 or patience < 1:
        raise ValueError("max_iters and patience must be at least 1")
    a, vec = check_matvec(matrix, v)
    a_h = a.conj().T
    current = sign1_array(vec)
    best_step = np.inf
    stale = 0
    for iteration in range(max_iters):
        stepped = sign1_array(a_h @ sign1_array(a @ current))
        step = float(np.max(np.abs(stepped - current)))
        current = stepped
        if step <= step_tol:
            break
        if step < best_step:
            best_step, stale = step, 0
        else:
            stale += 1
            if stale >= patience:
                break
    else:
        logger.warning(f"refine did not settle within {max_iters} iterations")
    logger.debug(f"refine stopped after {iteration + 1} iterations")
    return TorusVector(current / current[0])


def certify_near(matrix: Any, v: Any, delta: float) -> NearBiuniCertificate:
    """Measure and check the guaranteed bounds for a δ-near vector.

    For ‖Av‖₁ > n − δ with δ ≤ 1/8 the following hold: ‖1 − |Av|‖₂ < √(2δ);
    |Av| ≥ ½ and |A* sign(Av)| ≥ ½ entry-wise; and the next projection step
    moves v by at most 2√n·(‖A P_A v‖₁ − ‖Av‖₁)^½ in the max norm. The last
    bound is evaluated with the rounding error of the two ℓ¹ norms added
    under the root.

    Raises:
        ValueError: delta is not in (0, 1/8].
        NotBiunimodularError: ‖Av‖₁ ≤ n − delta.
        CertificateError: one of the bounds fails numerically.
    """
    if not 0 < delta <= 0.125:
        raise ValueError(f"certified bounds need 0 < delta <= 1/8, got {delta}")
    a, vec = check_matvec(matrix, v)
    n = a.shape[0]
    w = a @ vec
    value = float(np.sum(np.abs(w)))
    if value <= n - delta:
        raise NotBiunimodularError("vector is not delta-near biunimodular", n - value)

    back = a.conj().T @ sign_array(w)
    stepped = sign_array(back)
    gap = float(np.sum(np.abs(a @ stepped))) - value
    floor = 4 * n * np.finfo(float).eps * max(value, 1.0)
    certificate = NearBiuniCertificate(
        delta=delta,
        two_delta_bound=float(np.linalg.norm(1.0 - np.abs(w))),
        min_abs_Av=float(np.min(np.abs(w))),
        min_abs_Astar_sign=float(np.min(np.abs(back))),
        step_gap=float(np.max(np.abs(stepped - vec))),
        step_gap_bound=float(2 * np.sqrt(n) * np.sqrt(max(gap, 0.0) + floor)),
    )

    if not certificate.two_delta_bound < np.sqrt(2 * delta):
        raise CertificateError(
            f"|Av| deviates by {certificate.two_delta_bound:.3e} >= sqrt(2 delta)"
        )
    if min(certificate.min_abs_Av, certificate.min_abs_Astar_sign) < 0.5:
        raise CertificateError("modulus lower bound 1/2 violated")
    if certificate.step_gap > certificate.step_gap_bound:
        raise CertificateError(
            f"step {certificate.step_gap:.3e} exceeds bound {certificate.step_gap_bound:.3e}"
        )
    return certificate


def pi_value(matrix: Any, v: Any) -> complex:
    """The product of the entries of Av; unimodular iff v is biunimodular."""
    a, vec = check_matvec(matrix, v)
    return complex(np.prod(a @ vec))


def predicate_report(matrix: Any, v: Any, tol: float = 1e-8) -> PredicateReport:
    """Evaluate the four equivalent characterizations of biunimodularity.

    The defects of ‖Av‖₁ = n and |π_A(v)| = 1 are quadratic in the deviation
    of |Av| from 1 while the other two are linear, so the linear ones are
    compared against √(2·tol).
    """
    a, vec = check_matvec(matrix, v)
    n = a.shape[0]
    w = a @ vec
    linear_tol = np.sqrt(2 * tol)

    doubly_stochastic = (sign1_array(w).conj()[:, None] * a * vec[None, :]) @ np.ones(n)
    modulus = np.abs(w)
    return PredicateReport(
        fixes_ones=bool(np.max(np.abs(doubly_stochastic - 1.0)) <= linear_tol),
        attains_norm=bool(n - float(np.sum(modulus)) <= tol),
        product_unimodular=bool(abs(1.0 - float(np.prod(modulus))) <= 2 * tol),
        image_on_torus=bool(np.max(np.abs(modulus - 1.0)) <= linear_tol),
        tolerance=tol,
    )
