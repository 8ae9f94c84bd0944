"""Deterministic JSON output: 17-significant-digit floats, sorted keys.

Reports must be byte-identical across runs on one platform, so floats are
formatted explicitly instead of relying on repr.
"""

from __future__ import annotations

import math


def format_float(x: float) -> str:
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    if math.isnan(x):
        return "NaN"
    return format(x, ".17g")


def dumps(obj, indent: int | None = None) -> str:
    pieces = []
    _write(obj, pieces, indent, 0)
    return "".join(pieces)


def _write(obj, out, indent, level):
    pad = "" if indent is None else "\n" + " " * (indent * (level + 1))
    end_pad = "" if indent is None else "\n" + " " * (indent * level)
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, str):
        out.append('"' + obj.replace("\\", "\\\\").replace('"', '\\"') + '"')
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(format_float(obj))
    elif isinstance(obj, dict):
        out.append("{")
        first = True
        for k in sorted(obj):
            if not first:
                out.append(",")
            first = False
            out.append(pad)
            out.append('"' + str(k) + '":' + ("" if indent is None else " "))
            _write(obj[k], out, indent, level + 1)
        out.append(end_pad + "}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        first = True
        for v in obj:
            if not first:
                out.append(",")
            first = False
            out.append(pad)
            _write(v, out, indent, level + 1)
        out.append(end_pad + "]")
    else:
        raise TypeError(f"cannot serialize {type(obj)!r}")
