"""Report serialization: JSON with stable field order and 17-significant-
digit floats, and CSV tables for per-frequency rows.

The JSON emitter is deliberately hand-rolled: the stdlib encoder prints
floats with the shortest round-trip repr, while reports here pin the
format to %.17g so byte-identical reruns stay byte-identical across
writer versions.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import IO, Any

SCHEMA_VERSION = 1


def _fmt_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        return '"%s"' % repr(x)
    return format(float(x), ".17g")


def _escape(s: str) -> str:
    out = []
    for ch in s:
        if ch == '"':
            out.append('\\"')
        elif ch == "\\":
            out.append("\\\\")
        elif ch == "\n":
            out.append("\\n")
        elif ord(ch) < 0x20:
            out.append("\\u%04x" % ord(ch))
        else:
            out.append(ch)
    return "".join(out)


def _emit(value: Any, parts: list[str]) -> None:
    if value is None:
        parts.append("null")
    elif isinstance(value, bool):
        parts.append("true" if value else "false")
    elif isinstance(value, int):
        parts.append(str(value))
    elif isinstance(value, float):
        parts.append(_fmt_float(value))
    elif isinstance(value, Fraction):
        parts.append(f'"{value.numerator}/{value.denominator}"')
    elif isinstance(value, complex):
        _emit({"re": value.real, "im": value.imag}, parts)
    elif isinstance(value, str):
        parts.append(f'"{_escape(value)}"')
    elif isinstance(value, dict):
        parts.append("{")
        for i, (k, v) in enumerate(value.items()):
            if i:
                parts.append(",")
            parts.append(f'"{_escape(str(k))}":')
            _emit(v, parts)
        parts.append("}")
    elif isinstance(value, (list, tuple)):
        parts.append("[")
        for i, v in enumerate(value):
            if i:
                parts.append(",")
            _emit(v, parts)
        parts.append("]")
    elif hasattr(value, "tolist"):
        _emit(value.tolist(), parts)
    else:
        parts.append(f'"{_escape(str(value))}"')


def to_json(report: dict, kind: str | None = None) -> str:
    payload = {"schema_version": SCHEMA_VERSION}
    if kind is not None:
        payload["kind"] = kind
    payload.update(report)
    parts: list[str] = []
    _emit(payload, parts)
    return "".join(parts)


def rows_to_csv(rows: list[dict], columns: list[str]) -> str:
    lines = [",".join(columns)]
    for row in rows:
        cells = []
        for c in columns:
            v = row.get(c, "")
            if isinstance(v, float):
                cells.append(format(v, ".17g"))
            elif isinstance(v, (list, tuple)):
                cells.append(";".join(str(x) for x in v))
            else:
                cells.append(str(v))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def csv_table(report: dict) -> str:
    """CSV for the table-like reports: one row per k, h or d."""
    if "rows" in report:  # weyl table
        return rows_to_csv(report["rows"], ["k", "re", "im", "modulus"])
    if "entries" in report and report["entries"] and "d" in report["entries"][0]:
        return rows_to_csv(report["entries"], ["d", "re", "im", "modulus"])
    if "coefficients" in report:
        return rows_to_csv(report["coefficients"], ["d", "re", "im", "modulus"])
    if "terms" in report and report["terms"] and "gamma_re" in report["terms"][0]:
        return rows_to_csv(report["terms"], ["h", "gamma_re", "gamma_im", "weight"])
    raise ValueError("report has no tabular section")


def write_report(report: dict, fmt: str, target: str | IO[str], kind: str | None = None) -> None:
    """Write a module report as json or csv to a path or stream."""
    if fmt == "json":
        text = to_json(report, kind=kind) + "\n"
    elif fmt == "csv":
        text = csv_table(report)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if isinstance(target, str):
        with open(target, "w") as fh:
            fh.write(text)
    else:
        target.write(text)
