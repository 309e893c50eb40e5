"""JSON artifacts: matrix, vector and phase-table schemas, and result records.

Matrices are stored as `{"n": rows, "m": cols, "re": [[...]], "im": [[...]]}`,
vectors as `{"re": [...], "im": [...]}` and phase tables as
`{"n": n, "phases": [{"j": j, "k": k, "re": ..., "im": ...}, ...]}` with
1-based j, k. Every path is opened through fsspec, so `memory://` or remote
URLs work as well as local files.
"""

import dataclasses
import json
import logging

import fsspec
import numpy as np
from multimethod import multimethod
from typing_extensions import Any, Dict, List, Mapping

from .errors import ValidationError
from .linalg import ComplexMatrix, ComplexVector, TorusVector, UnitaryMatrix
from .results import (
    Orbit,
    OrbitCensus,
    PhaseTable,
    PhasingReport,
    PredicateReport,
    RankReport,
)
from .settings import RELAXED

logger = logging.getLogger(__name__)


def _rectangular(rows: Any, name: str) -> List[List[float]]:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise ValidationError(f"'{name}' must be a non-empty list of rows")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValidationError(f"'{name}' is not rectangular")
    return rows


def _require(data: Mapping[str, Any], *keys: str) -> None:
    missing = [key for key in keys if key not in data]
    if missing:
        raise ValidationError(f"missing key(s) {', '.join(missing)}")


def matrix_to_json(matrix: Any) -> Dict[str, Any]:
    arr = np.asarray(matrix, dtype=np.complex128)
    return {
        "n": int(arr.shape[0]),
        "m": int(arr.shape[1]),
        "re": arr.real.tolist(),
        "im": arr.imag.tolist(),
    }


def matrix_from_json(data: Mapping[str, Any], tolerance: float = RELAXED.unitarity) -> UnitaryMatrix:
    """Parse the matrix schema into a UnitaryMatrix.

    Raises:
        ValidationError: keys are missing, the arrays are ragged or disagree
            with n and m, or the matrix is not unitary within `tolerance`.
    """
    _require(data, "n", "m", "re", "im")
    re = np.array(_rectangular(data["re"], "re"), dtype=float)
    im = np.array(_rectangular(data["im"], "im"), dtype=float)
    shape = (int(data["n"]), int(data["m"]))
    if re.shape != shape or im.shape != shape:
        raise ValidationError(f"declared shape {shape} does not match {re.shape} / {im.shape}")
    return UnitaryMatrix(re + 1j * im, tolerance=tolerance)


def vector_to_json(vector: Any) -> Dict[str, Any]:
    arr = np.asarray(vector, dtype=np.complex128)
    return {"re": arr.real.tolist(), "im": arr.imag.tolist()}


def vector_from_json(data: Mapping[str, Any]) -> ComplexVector:
    _require(data, "re", "im")
    re, im = data["re"], data["im"]
    if not isinstance(re, list) or not isinstance(im, list) or len(re) != len(im):
        raise ValidationError("'re' and 'im' must be lists of equal length")
    return ComplexVector(np.array(re, dtype=float) + 1j * np.array(im, dtype=float))


def phase_table_to_json(table: PhaseTable) -> Dict[str, Any]:
    return {
        "n": table.n,
        "phases": [
            {"j": j + 1, "k": k + 1, "re": float(value.real), "im": float(value.imag)}
            for (j, k), value in np.ndenumerate(table.phases)
        ],
    }


def phase_table_from_json(data: Mapping[str, Any]) -> PhaseTable:
    _require(data, "n", "phases")
    n = int(data["n"])
    phases = np.full((n, n), np.nan, dtype=np.complex128)
    for entry in data["phases"]:
        _require(entry, "j", "k", "re", "im")
        j, k = int(entry["j"]), int(entry["k"])
        if not (1 <= j <= n and 1 <= k <= n):
            raise ValidationError(f"index ({j}, {k}) out of range for n={n}")
        phases[j - 1, k - 1] = complex(entry["re"], entry["im"])
    if np.isnan(phases).any():
        raise ValidationError("phase table is incomplete")
    return PhaseTable(phases, tolerance=1e-9)


@multimethod
def to_jsonable(obj: object) -> Any:
    """Convert a result record (or anything inside one) to plain JSON types."""
    if obj is None:
        return None
    if isinstance(obj, np.generic):
        return to_jsonable(obj.item())
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj) if f.repr}
    raise TypeError(f"cannot serialize {type(obj).__name__}")


@to_jsonable.register
def _(obj: str) -> Any:
    return obj


@to_jsonable.register
def _(obj: bool) -> Any:
    return obj


@to_jsonable.register
def _(obj: int) -> Any:
    return obj


@to_jsonable.register
def _(obj: float) -> Any:
    return float(obj)


@to_jsonable.register
def _(obj: complex) -> Any:
    return {"re": float(obj.real), "im": float(obj.imag)}


@to_jsonable.register
def _(obj: np.ndarray) -> Any:
    if np.iscomplexobj(obj):
        return matrix_to_json(obj) if obj.ndim == 2 else vector_to_json(obj)
    return obj.tolist()


@to_jsonable.register
def _(obj: tuple) -> Any:
    return [to_jsonable(item) for item in obj]


@to_jsonable.register
def _(obj: list) -> Any:
    return [to_jsonable(item) for item in obj]


@to_jsonable.register
def _(obj: dict) -> Any:
    return {str(key): to_jsonable(value) for key, value in obj.items()}


@to_jsonable.register
def _(obj: ComplexVector) -> Any:
    return vector_to_json(obj.entries)


@to_jsonable.register
def _(obj: ComplexMatrix) -> Any:
    return matrix_to_json(obj.entries)


@to_jsonable.register
def _(obj: PhaseTable) -> Any:
    return phase_table_to_json(obj)


@to_jsonable.register
def _(obj: Orbit) -> Any:
    return {
        "cardinality": obj.cardinality,
        "representative": vector_to_json(obj.representative.entries),
        "members_hash": obj.members_hash,
    }


@to_jsonable.register
def _(obj: OrbitCensus) -> Any:
    return {
        "n": obj.n,
        "delta": obj.delta,
        "tau": obj.tau,
        "orbits": [to_jsonable(orbit) for orbit in obj.orbits],
        "total": obj.total_vectors,
        "starts": obj.starts,
        "converged_runs": obj.converged_runs,
        "matches_reference": obj.matches_reference,
    }


@to_jsonable.register
def _(obj: RankReport) -> Any:
    return obj.summary()


@to_jsonable.register
def _(obj: PhasingReport) -> Any:
    return obj.summary()


@to_jsonable.register
def _(obj: PredicateReport) -> Any:
    return {**obj.summary(), "biunimodular": obj.biunimodular}


def write_json(obj: Any, path: str, **storage_options: Any) -> None:
    """Serialize `obj` with `to_jsonable` and write it to `path`."""
    with fsspec.open(path, "w", **storage_options) as f:
        json.dump(to_jsonable(obj), f, indent=2)
    logger.debug(f"Wrote {type(obj).__name__} to {path}")


def read_json(path: str, **storage_options: Any) -> Any:
    with fsspec.open(path, "r", **storage_options) as f:
        return json.load(f)


def load_matrix(path: str, tolerance: float = RELAXED.unitarity, **storage_options: Any) -> UnitaryMatrix:
    """Read a matrix file; entries printed with limited precision are accepted up to `tolerance`."""
    return matrix_from_json(read_json(path, **storage_options), tolerance)


def load_vector(path: str, **storage_options: Any) -> TorusVector:
    vector = vector_from_json(read_json(path, **storage_options))
    return TorusVector(vector.entries, unimodularity_tol=RELAXED.unimodularity)


def load_phase_table(path: str, **storage_options: Any) -> PhaseTable:
    return phase_table_from_json(read_json(path, **storage_options))
