"""JSON encodings.

Matrices are ``{"rows": r, "cols": c, "data": [[re, im], ...]}`` in row-major
order.  Python's ``json`` writes floats with the shortest representation that
round-trips, so encode/decode is bit-exact.
"""
from __future__ import annotations

import json
from typing import Any

import numpy as np

from .continuous_l2 import FiniteMeasureSpace, L2Function, SubspaceProjector
from .group_integral import FiniteGroupSpace, GroupFunction
from .module_space import ModuleVector


class InputError(ValueError):
    """Malformed input document."""

    def __init__(self, message, byte_offset=None):
        if byte_offset is not None:
            message = f"{message} (at byte offset {byte_offset})"
        super().__init__(message)
        self.byte_offset = byte_offset


def _pairs_to_complex(data, what) -> np.ndarray:
    try:
        arr = np.array(data, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{what}: entries must be [re, im] number pairs") from exc
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise InputError(f"{what}: entries must be [re, im] number pairs")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{what}: entries must be finite")
    # assign parts directly: re + 1j * im would lose the sign of a zero
    out = np.empty(arr.shape[0], dtype=np.complex128)
    out.real, out.imag = arr[:, 0], arr[:, 1]
    return out


def _complex_to_pairs(values) -> list:
    values = np.asarray(values, dtype=np.complex128).ravel()
    return [[float(v.real), float(v.imag)] for v in values]


def _require(obj, key, what):
    if not isinstance(obj, dict) or key not in obj:
        raise InputError(f"{what}: missing field {key!r}")
    return obj[key]


def _positive_int(value, what) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise InputError(f"{what} must be a positive integer")
    return value


def matrix_to_json(a) -> dict:
    a = np.asarray(a, dtype=np.complex128)
    return {"rows": int(a.shape[0]), "cols": int(a.shape[1]), "data": _complex_to_pairs(a)}


def matrix_from_json(obj) -> np.ndarray:
    rows = _positive_int(_require(obj, "rows", "matrix"), "matrix rows")
    cols = _positive_int(_require(obj, "cols", "matrix"), "matrix cols")
    flat = _pairs_to_complex(_require(obj, "data", "matrix"), "matrix data")
    if flat.size != rows * cols:
        raise InputError(f"matrix data has {flat.size} entries, expected {rows * cols}")
    return flat.reshape(rows, cols)


def module_vector_to_json(x: ModuleVector) -> dict:
    return {"n": x.n, "k": x.k, "entries": [matrix_to_json(a) for a in x.entries]}


def module_vector_from_json(obj) -> ModuleVector:
    n = _positive_int(_require(obj, "n", "module vector"), "n")
    k = _positive_int(_require(obj, "k", "module vector"), "k")
    entries = _require(obj, "entries", "module vector")
    if not isinstance(entries, list) or len(entries) != n:
        raise InputError(f"module vector declares n={n} but has {len(entries) if isinstance(entries, list) else 'no'} entries")
    mats = [matrix_from_json(e) for e in entries]
    for i, m in enumerate(mats):
        if m.shape != (k, k):
            raise InputError(f"entry {i} has shape {m.shape}, expected {(k, k)}")
    return ModuleVector(np.stack(mats))


def measure_space_to_json(space: FiniteMeasureSpace) -> dict:
    return {"weights": [float(w) for w in space.weights]}


def measure_space_from_json(obj) -> FiniteMeasureSpace:
    weights = _require(obj, "weights", "measure space")
    try:
        w = np.array(weights, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise InputError("measure space weights must be numbers") from exc
    if w.ndim != 1:
        raise InputError("measure space weights must be a flat list")
    try:
        return FiniteMeasureSpace(w)
    except ValueError as exc:
        raise InputError(f"measure space: {exc}") from exc


def l2_function_to_json(f: L2Function) -> dict:
    return {"values": _complex_to_pairs(f.values)}


def l2_function_from_json(obj, space: FiniteMeasureSpace) -> L2Function:
    values = _pairs_to_complex(_require(obj, "values", "function"), "function values")
    if values.size != space.m:
        raise InputError(f"function has {values.size} values for {space.m} atoms")
    return L2Function(space, values)


def projector_from_json(basis, space: FiniteMeasureSpace) -> SubspaceProjector:
    """Build a projector from a list of L2Function documents spanning W."""
    if not isinstance(basis, list) or not basis:
        raise InputError("basis must be a nonempty list of functions")
    vectors = [l2_function_from_json(b, space).values for b in basis]
    return SubspaceProjector.from_spanning(space, np.stack(vectors))


def projector_to_json(proj: SubspaceProjector) -> list:
    return [l2_function_to_json(v) for v in proj.vectors()]


def group_function_to_json(f: GroupFunction) -> dict:
    return {"order": f.space.order, "k": f.k, "values": [matrix_to_json(a) for a in f.values]}


def group_function_from_json(obj) -> GroupFunction:
    order = _positive_int(_require(obj, "order", "group function"), "order")
    k = _positive_int(_require(obj, "k", "group function"), "k")
    values = _require(obj, "values", "group function")
    if not isinstance(values, list) or len(values) != order:
        raise InputError(f"group function declares order={order} but has a different number of values")
    mats = [matrix_from_json(v) for v in values]
    for i, m in enumerate(mats):
        if m.shape != (k, k):
            raise InputError(f"value {i} has shape {m.shape}, expected {(k, k)}")
    return GroupFunction(FiniteGroupSpace(order), np.stack(mats))


def loads(raw: bytes) -> Any:
    """Parse a JSON document, reporting failures with a byte offset."""
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise InputError(f"invalid UTF-8: {exc.reason}", byte_offset=exc.start) from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        offset = len(text[: exc.pos].encode("utf-8"))
        raise InputError(f"invalid JSON: {exc.msg}", byte_offset=offset) from exc


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False)
