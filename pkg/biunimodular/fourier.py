"""Biunimodular vectors of the Fourier matrix F_n.

Closed-form Gauss and Björck sequences, residuals of the equivalent
zero-autocorrelation and cyclic n-roots systems, the finite symmetry group
generated by shifts, modulations, dilations, conjugation and the Fourier
transform, and an orbit census driven by the alternating projection.
"""

import hashlib
import json
import logging
import math
from dataclasses import dataclass

import importlib_resources
import numpy as np
import scipy.spatial.distance
import sympy
from typing_extensions import Any, Dict, List, Literal, Optional, Tuple

from .errors import DimensionError, NotBiunimodularError, QuantizationError, ValidationError
from .linalg import ComplexArray, TorusVector, as_array, fourier_matrix, sign1_array
from .results import KnownSequence, Orbit, OrbitCensus
from .search import SearchConfig, random_start, refine, run_from
from .settings import worker_count
from .utils._parallel import parallel_map

logger = logging.getLogger(__name__)

GeneratorKind = Literal["shift", "modulation", "dilation", "conjugation", "fourier"]

# images of the Fourier generator further than this from the torus are rejected
FOURIER_TORUS_TOL = 1e-6


def _gauge(u: ComplexArray) -> ComplexArray:
    return u / u[0]


def gauss_sequence(n: int, lam: int = 1, mu: int = 0, c: complex = 1.0) -> KnownSequence:
    """u_k = c·exp(2πi(λk² + μk)/n) for odd n, c·exp(2πi(λk²/2 + μk)/n) for even n.

    Raises:
        ValidationError: λ is not coprime to n, λ or μ is out of range, or
            c is not unimodular.
    """
    if n < 1:
        raise ValidationError(f"n must be positive, got {n}")
    if not (0 <= lam < n and 0 <= mu < n) and n > 1:
        raise ValidationError(f"lambda and mu must lie in [0, {n}), got {lam}, {mu}")
    if math.gcd(lam, n) != 1:
        raise ValidationError(f"lambda={lam} is not coprime to n={n}")
    if abs(abs(c) - 1.0) > 1e-12:
        raise ValidationError(f"c={c} is not unimodular")

    k = np.arange(n)
    if n % 2:
        exponent = (lam * k * k + mu * k) % n
        u = c * np.exp(2j * np.pi * exponent / n)
    else:
        # keep the integer part exact: πi(λk² + 2μk)/n, reduced mod 2n
        exponent = (lam * k * k + 2 * mu * k) % (2 * n)
        u = c * np.exp(1j * np.pi * exponent / n)
    return KnownSequence(kind="gauss", n=n, parameters=(lam, mu, complex(c)), vector=TorusVector(u))


def legendre(k: int, p: int) -> int:
    """The Legendre symbol (k/p) for an odd prime p, 0 when p divides k."""
    return int(sympy.legendre_symbol(k % p, p))


def bjorck_sequence(p: int) -> KnownSequence:
    """The Björck sequence of an odd prime length p.

    For p ≡ 3 (mod 4) the entries are 1 at quadratic residues and at 0, and
    e^{iθ}, θ = arccos((1 − p)/(1 + p)), at the non-residues. For p ≡ 1
    (mod 4) entry k is e^{iη·(k/p)} with η = arccos(1/(√p + 1)).

    Raises:
        ValidationError: p is not an odd prime.
        RuntimeError: the generated vector is not biunimodular.
    """
    if p < 3 or not sympy.isprime(p):
        raise ValidationError(f"p must be an odd prime, got {p}")
    symbols = np.array([legendre(k, p) for k in range(p)])
    if p % 4 == 3:
        angle = float(np.arccos((1 - p) / (1 + p)))
        u = np.where(symbols == -1, np.exp(1j * angle), 1.0 + 0j)
        branch = "3 mod 4"
    else:
        angle = float(np.arccos(1 / (np.sqrt(p) + 1)))
        u = np.exp(1j * angle * symbols)
        branch = "1 mod 4"
    residual = autocorr_residual(u)
    if residual > 1e-10:
        raise RuntimeError(f"Björck sequence for p={p} has autocorrelation {residual:.3e}")
    return KnownSequence(kind="bjorck", n=p, parameters=(p, branch, angle), vector=TorusVector(u))


def autocorr_residual(u: Any) -> float:
    """max_{i ≠ 0} |Σ_k u_k·conj(u_{k+i})|, zero iff u is biunimodular for F_n."""
    vec = as_array(u)
    n = vec.shape[0]
    if n == 1:
        return 0.0
    return max(abs(np.vdot(np.roll(vec, -i), vec)) for i in range(1, n))


def cyclic_root_residual(u: Any) -> float:
    """Residual of the cyclic n-roots system at x_k = u_{k+1}/u_k.

    The equations are Σ_k x_k x_{k+1}⋯x_{k+m−1} = 0 for m = 1, …, n−1 and
    x₀x₁⋯x_{n−1} = 1, indices mod n.
    """
    vec = as_array(u)
    n = vec.shape[0]
    x = np.roll(vec, -1) / vec
    residuals = []
    window = np.ones(n, dtype=np.complex128)
    for m in range(1, n):
        window = window * np.roll(x, -(m - 1))
        residuals.append(abs(np.sum(window)))
    residuals.append(abs(np.prod(x) - 1.0))
    return float(max(residuals))


def group_order(n: int) -> int:
    """4n²φ(n), the size of the symmetry group of the Fourier biunimodular set."""
    return 4 * n * n * int(sympy.totient(n))


@dataclass(frozen=True)
class Generator:
    """One symmetry of the biunimodular set of F_n.

    `k` is the shift, modulation or dilation parameter; it is ignored by
    conjugation and the Fourier transform.
    """

    kind: GeneratorKind
    k: int = 1


def _apply(u: ComplexArray, g: Generator) -> ComplexArray:
    n = u.shape[0]
    if g.kind == "shift":
        return np.roll(u, -g.k)
    if g.kind == "modulation":
        return u * np.exp(2j * np.pi * ((g.k * np.arange(n)) % n) / n)
    if g.kind == "dilation":
        if math.gcd(g.k, n) != 1:
            raise ValidationError(f"dilation by {g.k} needs k coprime to n={n}")
        return u[(np.arange(n) * g.k) % n]
    if g.kind == "conjugation":
        return u.conj()
    if g.kind == "fourier":
        image = np.asarray(fourier_matrix(n).entries) @ u
        deviation = float(np.max(np.abs(np.abs(image) - 1.0)))
        if deviation > FOURIER_TORUS_TOL:
            raise NotBiunimodularError("Fourier image is off the torus", deviation)
        return sign1_array(image)
    raise ValidationError(f"unknown generator {g.kind!r}")


def gn_action(u: Any, g: Generator) -> TorusVector:
    """Apply a generator and re-gauge the result to first entry 1.

    Examples:
        ```python
        gn_action([1, 1j], Generator("conjugation")).entries  # (1, -i)
        ```

    Raises:
        ValidationError: a dilation parameter is not coprime to n.
        NotBiunimodularError: the Fourier image is more than 1e−6 off the torus.
    """
    vec = as_array(u)
    return TorusVector(_gauge(_apply(vec, g)), unimodularity_tol=1e-9)


def _generators(n: int) -> List[Generator]:
    dilations = [Generator("dilation", k) for k in range(2, n) if math.gcd(k, n) == 1]
    return [
        Generator("shift", 1),
        Generator("modulation", 1),
        *dilations,
        Generator("conjugation"),
        Generator("fourier"),
    ]


def _phase_keys(members: ComplexArray, quantize_tol: float) -> List[Tuple[int, ...]]:
    steps = int(round(2 * np.pi / quantize_tol))
    angles = np.mod(np.angle(members), 2 * np.pi)
    counts = np.rint(angles / quantize_tol).astype(np.int64) % steps
    return [tuple(int(c) for c in row) for row in counts]


def orbit_of(u: Any, quantize_tol: float = 1e-9) -> Orbit:
    """Close u under the symmetry generators by breadth-first expansion.

    Images within `quantize_tol` (max-entry distance) of a known member are
    identified. The representative is the member whose phases, rounded to
    multiples of `quantize_tol` in [0, 2π), are lexicographically smallest;
    `members_hash` digests the sorted rounded phases.

    Raises:
        NotBiunimodularError: n − ‖F_n u‖₁ exceeds 1e−6.
        QuantizationError: more than 4n²φ(n) distinct members appear.
    """
    vec = _gauge(as_array(u))
    n = vec.shape[0]
    residual = n - float(np.sum(np.abs(np.asarray(fourier_matrix(n).entries) @ vec)))
    if residual > 1e-6:
        raise NotBiunimodularError("orbit needs a near-biunimodular vector", residual)

    limit = group_order(n)
    generators = _generators(n)
    members = [vec]
    stacked = vec[None, :]
    frontier = [vec]
    while frontier:
        next_frontier = []
        for current in frontier:
            for g in generators:
                image = _gauge(_apply(current, g))
                if np.min(np.max(np.abs(stacked - image), axis=1)) <= quantize_tol:
                    continue
                members.append(image)
                stacked = np.vstack([stacked, image])
                next_frontier.append(image)
                if len(members) > limit:
                    raise QuantizationError(
                        f"orbit exceeds the group order {limit}; quantize_tol={quantize_tol:g} "
                        "is too fine for this vector"
                    )
        frontier = next_frontier

    keys = _phase_keys(stacked, quantize_tol)
    first = min(range(len(keys)), key=lambda i: keys[i])
    digest = hashlib.sha256(repr(sorted(keys)).encode("utf8")).hexdigest()
    logger.debug(f"Closed an orbit of {len(members)} member(s) for n={n}")
    return Orbit(
        representative=TorusVector(stacked[first], unimodularity_tol=1e-9),
        cardinality=len(members),
        members_hash=digest,
        members=stacked,
    )


def _realified(members: ComplexArray) -> Any:
    return np.hstack([members.real, members.imag])


def _distance_to(members: ComplexArray, v: ComplexArray) -> float:
    return float(scipy.spatial.distance.cdist(_realified(members), _realified(v[None, :])).min())


def orbit_distance(first: Orbit, second: Orbit) -> float:
    """Smallest ℓ² distance between a member of one orbit and one of the other."""
    if first.n != second.n:
        raise ValidationError(f"orbits of different lengths {first.n} and {second.n}")
    return float(
        scipy.spatial.distance.cdist(_realified(first.members), _realified(second.members)).min()
    )


def reference_orbit_lengths() -> Dict[int, Dict[str, Any]]:
    """Published orbit lengths per n, with whether the list is known to be complete."""
    raw = importlib_resources.files("biunimodular.data").joinpath("orbit_lengths.json").read_text("utf8")
    return {int(n): entry for n, entry in json.loads(raw).items()}


def census(
    n: int,
    cfg: Optional[SearchConfig] = None,
    tau: float = 1e-5,
    quantize_tol: float = 1e-9,
) -> OrbitCensus:
    """Collect orbits of Fourier biunimodular vectors from random searches.

    Runs `cfg.max_starts` searches on F_n (in parallel over `cfg.workers`
    threads); converged vectors are refined and, in start order, closed into
    a new orbit unless they lie within `tau` of a listed one. Orbits are
    sorted by cardinality, then representative.

    Parameters:
        n: the dimension.
        cfg: search parameters; `SearchConfig(delta=1e-7, max_iters=30_000)`
            by default.
        tau: ℓ² distance below which a vector belongs to a listed orbit.
        quantize_tol: identification threshold inside an orbit.

    Returns:
        The OrbitCensus. `matches_reference` compares the orbit lengths with
        the packaged table when n appears in it.

    Raises:
        DimensionError: n is smaller than 2.
    """
    if n < 2:
        raise DimensionError(f"census needs n >= 2, got {n}")
    cfg = cfg or SearchConfig(delta=1e-7, max_iters=30_000)
    a = fourier_matrix(n)

    def attempt(index: int) -> Optional[ComplexArray]:
        result = run_from(a, random_start(n, cfg.seed, index), cfg)
        if not result.converged:
            return None
        return np.asarray(refine(a, result.vector).entries)

    found = parallel_map(attempt, list(range(cfg.max_starts)), worker_count(cfg.workers))

    orbits: List[Orbit] = []
    converged = 0
    for v in found:
        if v is None:
            continue
        converged += 1
        if any(_distance_to(orbit.members, v) <= tau for orbit in orbits):
            continue
        orbit = orbit_of(v, quantize_tol)
        orbits.append(orbit)
        logger.info(f"n={n}: new orbit of length {orbit.cardinality} ({len(orbits)} so far)")

    orbits.sort(key=lambda o: (o.cardinality, _phase_keys(o.representative.entries[None, :], quantize_tol)[0]))

    matches: Optional[bool] = None
    reference = reference_orbit_lengths().get(n)
    if reference is not None:
        matches = sorted(o.cardinality for o in orbits) == sorted(reference["lengths"])
    logger.info(
        f"Census n={n}: {len(orbits)} orbit(s), {sum(o.cardinality for o in orbits)} vectors "
        f"from {converged}/{cfg.max_starts} converged starts"
    )
    return OrbitCensus(
        n=n,
        delta=cfg.delta,
        tau=tau,
        orbits=tuple(orbits),
        starts=cfg.max_starts,
        converged_runs=converged,
        matches_reference=matches,
    )
