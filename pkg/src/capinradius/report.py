"""Deterministic JSON and CSV emission.

Floats are written with 17 significant digits so that parsing the output
gives back the same doubles. Keys are sorted and no timestamps are written,
so identical inputs give byte-identical files.
"""

from __future__ import annotations

import csv
import dataclasses
import enum
import io
import json
import math
from pathlib import Path
from typing import Iterable, Sequence

SCHEMA_VERSION = "capinradius/1"


def fmt_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(x, ".17g")


def to_plain(obj):
    """Dataclasses, enums, tuples and numpy scalars to plain JSON-ready values."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        if hasattr(obj, "to_dict"):
            return to_plain(obj.to_dict())
        return {f.name: to_plain(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if hasattr(obj, "item") and callable(obj.item):      # numpy scalar
        return obj.item()
    return obj


def _dump(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        return fmt_float(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_dump(obj[k], indent, level + 1)}" for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        items = [pad + _dump(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(results, kind: str = "result") -> str:
    """Schema-versioned JSON text for ``results``."""
    doc = {"schema": SCHEMA_VERSION, "kind": kind, "results": to_plain(results)}
    return _dump(doc, 2, 0) + "\n"


def loads(text: str):
    return json.loads(text)


def tagged(value: float, method: str, tol: float, **extra) -> dict:
    """A number with its method tag and tolerance."""
    out = {"value": float(value), "method": str(method), "tol": float(tol)}
    out.update(extra)
    return out


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"# schema={SCHEMA_VERSION}"])
    w.writerow(list(header))
    for row in rows:
        w.writerow([fmt_float(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def write_text(path, text: str) -> Path:
    """Write ``text``; raises ``OSError`` when the path is not writable."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return path


def emit_report(results, fmt: str, path=None, header: Sequence[str] = (), kind: str = "result") -> str:
    """Render ``results`` as ``json`` or ``csv`` (rows) and optionally write them to ``path``."""
    if fmt == "json":
        text = dumps(results, kind)
    elif fmt == "csv":
        text = csv_text(header, results)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if path is not None:
        write_text(path, text)
    return text
