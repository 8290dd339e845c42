"""JSON formats for sequences, finite grids, Gabor configs and reports.

Output is canonical: keys sorted, floats printed with 17 significant
digits, so identical results serialise to identical bytes.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .gabor import GaborConfig
from .inversion import InversionReport
from .sequences import Sequence, TwistParams


class FormatError(ValueError):
    """Input JSON does not follow the expected schema."""


def _require(obj, key, kind=None):
    if not isinstance(obj, dict) or key not in obj:
        raise FormatError(f"missing field {key!r}")
    value = obj[key]
    if kind is not None and (not isinstance(value, kind) or isinstance(value, bool)):
        raise FormatError(f"field {key!r} has wrong type {type(value).__name__}")
    return value


def _number(x):
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise FormatError(f"expected a number, got {x!r}")
    if not math.isfinite(x):
        raise FormatError(f"non-finite number {x!r}")
    return float(x)


def _int_vector(x, d, what):
    if not isinstance(x, list) or len(x) != d or not all(
        isinstance(v, int) and not isinstance(v, bool) for v in x
    ):
        raise FormatError(f"{what} must be a list of {d} integers, got {x!r}")
    return tuple(x)


def _complex_pair(x):
    if not isinstance(x, list) or len(x) != 2:
        raise FormatError(f"expected [re, im], got {x!r}")
    return complex(_number(x[0]), _number(x[1]))


# -- encoding --------------------------------------------------------------


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialise non-finite value {x}")
    text = format(x, ".17g")
    if "e" not in text and "." not in text:
        text += ".0"
    return text


def dumps(obj) -> str:
    """Canonical JSON text (sorted keys, 17 significant digits)."""
    if isinstance(obj, dict):
        items = (f"{json.dumps(str(k))}:{dumps(obj[k])}" for k in sorted(obj))
        return "{" + ",".join(items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(dumps(v) for v in obj) + "]"
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def sequence_to_json(a: Sequence) -> dict:
    d = a.dim
    entries = [
        {"k": [int(v) for v in row[:d]], "l": [int(v) for v in row[d:]],
         "re": float(val.real), "im": float(val.imag)}
        for row, val in zip(a.indices, a.values)
    ]
    return {"d": d, "entries": entries}


def grid_to_json(g, q: int) -> dict:
    g = np.asarray(g)
    data = [[[float(v.real), float(v.imag)] for v in row] for row in g]
    return {"p": int(g.shape[0]), "q": int(q), "data": data}


def twist_to_json(tp: TwistParams) -> dict:
    return {"p": tp.p, "q": tp.q, "d": tp.dim}


def report_to_json(r: InversionReport) -> dict:
    return {
        "input": sequence_to_json(r.input),
        "tp": twist_to_json(r.tp),
        "inverse": sequence_to_json(r.inverse),
        "residual_right": r.residual_right,
        "residual_left": r.residual_left,
        "det_symbol_min": r.det_symbol_min,
        "grid_size_used": r.grid_size_used,
        "refinements": r.refinements,
    }


def vector_to_json(v) -> list:
    return [[float(x.real), float(x.imag)] for x in np.asarray(v, dtype=np.complex128)]


# -- decoding --------------------------------------------------------------


def sequence_from_json(obj) -> Sequence:
    d = _require(obj, "d", int)
    if d < 1:
        raise FormatError("d must be positive")
    entries = {}
    for item in _require(obj, "entries", list):
        k = _int_vector(_require(item, "k"), d, "k")
        l = _int_vector(_require(item, "l"), d, "l")
        if (k, l) in entries:
            raise FormatError(f"duplicate index k={list(k)}, l={list(l)}")
        entries[k, l] = complex(_number(_require(item, "re")), _number(_require(item, "im")))
    return Sequence(d, entries)


def grid_from_json(obj) -> tuple[np.ndarray, int | None]:
    p = _require(obj, "p", int)
    q = obj.get("q") if isinstance(obj, dict) else None
    if q is not None and (isinstance(q, bool) or not isinstance(q, int)):
        raise FormatError("q must be an integer")
    data = _require(obj, "data", list)
    if p < 1 or len(data) != p or any(not isinstance(r, list) or len(r) != p for r in data):
        raise FormatError(f"data must be a {p} x {p} array of [re, im] pairs")
    return np.array([[_complex_pair(v) for v in row] for row in data]), q


def gabor_from_json(obj) -> GaborConfig:
    window = np.array([_complex_pair(v) for v in _require(obj, "window", list)])
    try:
        return GaborConfig(
            _require(obj, "L", int), _require(obj, "a_step", int), _require(obj, "b_step", int),
            window,
        )
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def load(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from exc
