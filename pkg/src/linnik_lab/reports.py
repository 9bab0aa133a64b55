"""CSV and JSON emission with stable headers and fixed 12-significant-digit numbers."""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Any, Iterable, Mapping, Sequence

SIG_DIGITS = 12


def format_scalar(value: Any) -> str:
    """Text form of one cell: 12 significant digits for reals, lower-case booleans, empty for None."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, complex):
        return f"{value.real:.{SIG_DIGITS}g}{value.imag:+.{SIG_DIGITS}g}j"
    if isinstance(value, float):
        return f"{value:.{SIG_DIGITS}g}"
    if hasattr(value, "item"):  # numpy scalar
        return format_scalar(value.item())
    return str(value)


def _json_value(value: Any) -> Any:
    if hasattr(value, "item") and not isinstance(value, (list, dict)):
        value = value.item()
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        if not math.isfinite(value):
            return str(value)
        return float(f"{value:.{SIG_DIGITS}g}")
    if isinstance(value, complex):
        return {"re": _json_value(value.real), "im": _json_value(value.imag)}
    if isinstance(value, Mapping):
        return {str(k): _json_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_value(v) for v in value]
    return str(value)


def stable_columns(rows: Sequence[Mapping[str, Any]], preferred: Sequence[str] = ()) -> list[str]:
    """Preferred columns first, then any others in order of first appearance."""
    cols = [c for c in preferred]
    seen = set(cols)
    for row in rows:
        for key in row:
            if key not in seen:
                seen.add(key)
                cols.append(key)
    return cols


def to_csv(rows: Iterable[Mapping[str, Any]], columns: Sequence[str] = ()) -> str:
    rows = list(rows)
    cols = stable_columns(rows, columns)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(cols)
    for row in rows:
        writer.writerow([format_scalar(row.get(c)) for c in cols])
    return buf.getvalue()


def to_json(rows: Iterable[Mapping[str, Any]], meta: Mapping[str, Any]) -> str:
    doc = {"meta": _json_value(dict(meta)), "rows": [_json_value(dict(r)) for r in rows]}
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def render(rows: Iterable[Mapping[str, Any]], fmt: str, meta: Mapping[str, Any], columns: Sequence[str] = ()) -> str:
    if fmt == "csv":
        return to_csv(rows, columns)
    if fmt == "json":
        return to_json(rows, meta)
    raise ValueError(f"unknown format {fmt!r}")


def write_report(text: str, path: str | None, stream=None) -> None:
    """Write to ``path`` as UTF-8 with LF endings, or to ``stream`` when no path is given."""
    if path is None or path == "-":
        stream.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
