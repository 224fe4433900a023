"""Deterministic text formatting for exports.

All floating-point output across CSV, JSON, and stdout uses 17 significant
digits, enough to round-trip any double exactly, and a fixed "\n" line
terminator, so repeated runs produce byte-identical files on every
platform and thread count.
"""

from __future__ import annotations

import math


def g17(x):
    """A float (or the real part of a real-valued complex) as %.17g text."""
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        raise ValueError(f"non-finite value {x!r} in output")
    return "%.17g" % x


def json_g17(obj):
    """Single-line JSON text with every float rendered by g17.

    Supports the plain data model used by the exporters: dict, list, str,
    bool, None, int, float. Dict keys keep insertion order, which the
    exporters fix explicitly.
    """
    if hasattr(obj, "item") and not isinstance(obj, (str, bytes, dict)):
        obj = obj.item()        # numpy scalars come out as Python natives
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, str):
        import json as _json
        return _json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return g17(obj)
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(json_g17(v) for v in obj) + "]"
    if isinstance(obj, dict):
        items = ", ".join(
            f"{json_g17(str(k))}: {json_g17(v)}" for k, v in obj.items())
        return "{" + items + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")
