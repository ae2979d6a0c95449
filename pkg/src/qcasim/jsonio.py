"""Deterministic JSON output.

Floats are printed with 17 significant digits so that emitted traces
round-trip exactly and two runs of the same command produce identical bytes.
"""

from __future__ import annotations

import json
import math


def _fmt_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise ValueError("non-finite float in JSON output")
    if x == int(x) and abs(x) < 1e16:
        return f"{x:.1f}"
    return f"{x:.17g}"


def dumps(obj, indent: int = 0) -> str:
    """Serialize with stable float formatting and insertion-order keys."""
    out: list[str] = []
    _emit(obj, out, indent, 0)
    return "".join(out)


def _emit(obj, out: list[str], indent: int, level: int) -> None:
    pad = "\n" + " " * (indent * (level + 1)) if indent else ""
    endpad = "\n" + " " * (indent * level) if indent else ""
    if obj is None or isinstance(obj, (bool, int, str)):
        out.append(json.dumps(obj))
    elif isinstance(obj, float):
        out.append(_fmt_float(obj))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.append("," if not indent else ",")
            out.append(pad)
            out.append(json.dumps(str(k)))
            out.append(": " if indent else ":")
            _emit(v, out, indent, level + 1)
        out.append(endpad)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        if not len(obj):
            out.append("[]")
            return
        out.append("[")
        for i, v in enumerate(obj):
            if i:
                out.append(",")
            out.append(pad)
            _emit(v, out, indent, level + 1)
        out.append(endpad)
        out.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dump_path(obj, path: str, indent: int = 2) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(obj, indent=indent))
        fh.write("\n")
