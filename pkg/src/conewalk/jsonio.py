"""Deterministic JSON serialization: floats carry 17 significant digits.

The stdlib encoder prints shortest-round-trip floats, which is lossless but
not a fixed textual width; reports and traces are diffed byte-for-byte, so
every float is rendered with an explicit 17-digit format instead.
"""
from __future__ import annotations

import json
import math


def _render(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"cannot serialize non-finite float {value!r}")
        return format(value, ".17g")
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, dict):
        items = (f"{json.dumps(str(k))}: {_render(v)}" for k, v in value.items())
        return "{" + ", ".join(items) + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_render(v) for v in value) + "]"
    # numpy scalars and arrays
    if hasattr(value, "tolist"):
        return _render(value.tolist())
    raise TypeError(f"cannot serialize {type(value).__name__}")


def dumps(obj) -> str:
    """Serialize to a single-line JSON string with 17-digit floats."""
    return _render(obj)


def json_line(obj) -> str:
    """One newline-terminated JSON record (for line-delimited streams)."""
    return _render(obj) + "\n"
