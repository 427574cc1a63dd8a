"""Deterministic report serialization.

JSON is the single machine format; the text rendering is derived from the
JSON-able structure.  Keys are sorted and floats use their shortest exact
repr, so identical inputs produce byte-identical output.  Complex numbers
serialize as [re, im] pairs.
"""

from __future__ import annotations

import json
from fractions import Fraction

import numpy as np

from .gaussian import GaussianRational


def jsonable(obj):
    """Recursively convert report values into JSON-serializable ones."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, (np.complexfloating,)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (GaussianRational, Fraction)):
        return str(obj)
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    to_dict = getattr(obj, "to_dict", None)
    if callable(to_dict):
        return jsonable(to_dict())
    to_text = getattr(obj, "to_text", None)
    if callable(to_text):
        return to_text()
    raise TypeError(f"cannot serialize {type(obj).__name__} into a report")


def dumps(report) -> str:
    """Canonical JSON text: sorted keys, compact separators, trailing newline."""
    return json.dumps(jsonable(report), sort_keys=True, separators=(",", ": "), indent=1) + "\n"


def render_text(report, indent: int = 0) -> str:
    """Human-readable rendering derived from the JSON-able structure."""
    pad = "  " * indent
    data = jsonable(report)
    lines: list[str] = []
    if isinstance(data, dict):
        for key in sorted(data):
            value = data[key]
            if isinstance(value, (dict, list)) and value:
                lines.append(f"{pad}{key}:")
                lines.append(render_text(value, indent + 1))
            else:
                lines.append(f"{pad}{key}: {_scalar_text(value)}")
        return "\n".join(lines)
    if isinstance(data, list):
        if len(data) > 12 and all(isinstance(v, (int, float)) for v in data):
            head = ", ".join(_scalar_text(v) for v in data[:4])
            lines.append(f"{pad}[{head}, ... {len(data)} values]")
            return "\n".join(lines)
        for value in data:
            if isinstance(value, (dict, list)) and value:
                lines.append(f"{pad}-")
                lines.append(render_text(value, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar_text(value)}")
        return "\n".join(lines)
    return f"{pad}{_scalar_text(data)}"


def _scalar_text(value) -> str:
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (dict, list)) and not value:
        return "{}" if isinstance(value, dict) else "[]"
    return str(value)
