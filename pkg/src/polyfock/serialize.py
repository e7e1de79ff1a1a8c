"""Deterministic JSON and CSV output: fixed key order, floats with 17 significant digits."""

import json
import math

import numpy as np

from .cpoly import CPolynomial, DiffOp


def _float(x):
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        return "null"
    text = format(x, ".17g")
    if all(ch not in text for ch in ".en"):
        text += ".0"
    return text


def to_plain(obj):
    """Convert library values into JSON-ready builtins (complex -> [re, im])."""
    from .expr import format_diffop, format_poly

    if isinstance(obj, CPolynomial):
        return format_poly(obj)
    if isinstance(obj, DiffOp):
        return format_diffop(obj)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [to_plain(v) for v in obj]
    if hasattr(obj, "to_dict"):
        return to_plain(obj.to_dict())
    return obj


def dumps(obj, indent=2, _level=0):
    obj = to_plain(obj) if _level == 0 else obj
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        return _float(obj)
    if isinstance(obj, (int, str)):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj) and len(obj) <= 4:
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def matrix_csv(data):
    lines = ["row,col,re,im"]
    for r in range(data.shape[0]):
        for c in range(data.shape[1]):
            v = data[r, c]
            lines.append(f"{r},{c},{_float(v.real)},{_float(v.imag)}")
    return "\n".join(lines)


def reports_csv(reports):
    lines = ["identity,max_abs_error,tolerance,pass"]
    for r in reports:
        lines.append(f"{r.identity},{_float(r.max_abs_error)},{_float(r.tolerance)},{str(r.passed).lower()}")
    return "\n".join(lines)
