"""JSON and CSV rendering of results.

Keys are sorted, big integers become decimal strings, fractions become
``"p/q"`` strings, and signatures carry float renditions next to the
exact entries.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence

import mpmath

from .counting import VRTable
from .signature import Signature

SAFE_INT = 2 ** 53  # larger ints are emitted as strings


def to_plain(obj):
    """Recursively turn a result into JSON-ready builtins."""
    if isinstance(obj, Signature):
        return obj.to_dict()
    if isinstance(obj, VRTable):
        return obj.to_dict()
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj if abs(obj) < SAFE_INT else str(obj)
    if isinstance(obj, float):
        return obj
    if isinstance(obj, mpmath.mpf):
        return float(obj)
    if hasattr(obj, "to_dict"):
        return to_plain(obj.to_dict())
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return to_plain(dataclasses.asdict(obj))
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    raise TypeError(f"cannot render {type(obj).__name__}")


def render_json(result) -> str:
    return json.dumps(to_plain(result), sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def render_csv(rows: Iterable[dict], columns: Optional[Sequence[str]] = None) -> str:
    rows = [to_plain(r) for r in rows]
    if columns is None:
        columns = sorted({k for r in rows for k in r})
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: r.get(k, "") for k in columns})
    return buf.getvalue()


def render_report(result, fmt: str = "json", columns: Optional[List[str]] = None) -> str:
    if fmt == "json":
        return render_json(result)
    if fmt == "csv":
        if isinstance(result, VRTable):
            return render_csv(result.to_rows(), ["type", "count"])
        if isinstance(result, dict):
            result = result.get("rows", [result])
        return render_csv(result, columns)
    raise ValueError(f"unknown format {fmt!r}")
