"""JSON and CSV serialization with the ``weyl-jacobi/1`` schemas.

Complex numbers are ``[re, im]`` pairs.  Spectral atoms are written in
ascending ``s``.  Output is deterministic: keys keep insertion order and
floats use the shortest round-tripping representation.  Non-finite
numbers become the sentinel strings ``"inf"``, ``"-inf"`` and ``"nan"``.
"""
from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .direct import SpectralData
from .errors import InputError, ParseError, SchemaError
from .jacobi import JacobiCoefficients
from .measure import DiscreteMatrixMeasure

FORMAT = "weyl-jacobi/1"


def _real(v, what: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise SchemaError(f"{what}: expected a number, got {v!r}")
    return float(v)


def _complex(v, what: str) -> complex:
    if not isinstance(v, list) or len(v) != 2:
        raise SchemaError(f"{what}: expected [re, im], got {v!r}")
    return complex(_real(v[0], what), _real(v[1], what))


def _list(v, what: str) -> list:
    if not isinstance(v, list):
        raise SchemaError(f"{what}: expected a list")
    return v


def _check_format(doc: dict) -> None:
    if not isinstance(doc, dict):
        raise SchemaError("top level must be a JSON object")
    if "format" in doc and doc["format"] != FORMAT:
        raise SchemaError(f"unsupported format {doc['format']!r}, expected {FORMAT!r}")


def encode_real(x) -> float | str:
    x = float(x)
    if math.isfinite(x):
        return x + 0.0  # drops the sign of zero
    return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")


def encode_complex(z) -> list:
    z = complex(z)
    return [encode_real(z.real), encode_real(z.imag)]


def plain(obj):
    """Recursively convert numpy scalars, arrays and tuples to JSON-ready values."""
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [plain(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return encode_real(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return encode_complex(obj)
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(doc: dict) -> str:
    return json.dumps(plain(doc), indent=2, allow_nan=False) + "\n"


def loads(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}") from None
    _check_format(doc)
    return doc


def read_json(path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    return loads(text)


def coefficients_to_dict(c: JacobiCoefficients) -> dict:
    return {"format": FORMAT, "a": [float(x) for x in c.a], "b": [encode_complex(x) for x in c.b]}


def coefficients_from_dict(doc: dict) -> JacobiCoefficients:
    _check_format(doc)
    if "a" not in doc or "b" not in doc:
        raise SchemaError("coefficients need keys 'a' and 'b'")
    a = [_real(v, "a") for v in _list(doc["a"], "a")]
    b = [_complex(v, "b") for v in _list(doc["b"], "b")]
    try:
        return JacobiCoefficients(np.array(a, dtype=float), np.array(b, dtype=complex))
    except InputError as exc:
        raise SchemaError(str(exc)) from None


def spectral_to_dict(sd: SpectralData) -> dict:
    order = np.argsort(sd.s, kind="stable")
    atoms = [{"s": float(sd.s[j]), "weight": float(sd.weight[j]), "psi": encode_complex(sd.psi[j])}
             for j in order]
    return {"format": FORMAT, "atoms": atoms}


def spectral_from_dict(doc: dict) -> SpectralData:
    _check_format(doc)
    atoms = _list(doc.get("atoms"), "atoms")
    s, w, psi = [], [], []
    for j, atom in enumerate(atoms):
        if not isinstance(atom, dict) or not {"s", "weight", "psi"} <= atom.keys():
            raise SchemaError(f"atom {j} needs keys 's', 'weight' and 'psi'")
        s.append(_real(atom["s"], "s"))
        w.append(_real(atom["weight"], "weight"))
        psi.append(_complex(atom["psi"], "psi"))
    order = np.argsort(s, kind="stable")
    try:
        return SpectralData(np.array(s)[order], np.array(w)[order], np.array(psi, dtype=complex)[order])
    except InputError as exc:
        raise SchemaError(str(exc)) from None


def measure_to_dict(m: DiscreteMatrixMeasure) -> dict:
    atoms = [{"x": float(x), "W": [[encode_complex(W[i, k]) for k in range(2)] for i in range(2)]}
             for x, W in zip(m.x, m.W)]
    return {"format": FORMAT, "atoms": atoms}


def measure_from_dict(doc: dict) -> DiscreteMatrixMeasure:
    _check_format(doc)
    atoms = _list(doc.get("atoms"), "atoms")
    xs, Ws = [], []
    for j, atom in enumerate(atoms):
        if not isinstance(atom, dict) or not {"x", "W"} <= atom.keys():
            raise SchemaError(f"atom {j} needs keys 'x' and 'W'")
        rows = _list(atom["W"], "W")
        if len(rows) != 2 or any(not isinstance(r, list) or len(r) != 2 for r in rows):
            raise SchemaError(f"atom {j}: W must be 2x2")
        xs.append(_real(atom["x"], "x"))
        Ws.append([[_complex(v, "W") for v in r] for r in rows])
    try:
        return DiscreteMatrixMeasure(np.array(xs, dtype=float), np.array(Ws, dtype=complex).reshape(-1, 2, 2))
    except InputError as exc:
        raise SchemaError(str(exc)) from None


def format_float(x) -> str:
    """``%.17g`` for finite values, sentinel strings otherwise."""
    x = float(x)
    return "%.17g" % x if math.isfinite(x) else str(encode_real(x))


def csv_text(header: list[str], rows: list[list]) -> str:
    """RFC-4180 CSV with CRLF line ends; floats as ``%.17g``."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_float(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()
