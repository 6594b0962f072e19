"""Method reports and their three renderings: table, csv and json.

Tables round to a per-column digit count and group fractional digits in
blocks of five.  The csv and json forms write every high-precision value
with enough decimal digits to reproduce it exactly at its recorded
precision, so :func:`load_reports` round-trips a json report bit for bit.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Decimal

import mpmath
from mpmath.libmp import repr_dps

FORMATS = ("table", "csv", "json")
FLOAT_PRECISION = 53


@dataclass
class MethodReport:
    """Rows of one method's output.

    Cells are ints, strings, ``None``, Python floats (53-bit) or ``mpf``
    values computed at ``precision`` bits.  ``digits`` gives the number of
    decimal places shown per column in tables, or ``"eK"`` for scientific
    notation with ``K`` fractional digits.
    """

    method: str
    parameters: dict
    columns: list
    rows: list
    precision: int = FLOAT_PRECISION
    digits: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)
    disclaimers: list = field(default_factory=list)


def cell_precision(value, report_precision: int) -> int | None:
    if isinstance(value, mpmath.mpf):
        return report_precision
    if isinstance(value, float):
        return FLOAT_PRECISION
    return None


def full_decimal(value, prec: int) -> str:
    """Shortest fixed digit count that always round-trips at ``prec`` bits."""
    if isinstance(value, float):
        return repr(value)
    with mpmath.workprec(prec):
        return mpmath.nstr(value, repr_dps(prec), strip_zeros=False, min_fixed=-math.inf,
                           max_fixed=math.inf) if value != 0 else "0"


def grouped(value, places: int, prec: int) -> str:
    """Round to ``places`` decimals and split the fraction into blocks of five."""
    exact = Decimal(full_decimal(value, prec))
    text = str(exact.quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_EVEN))
    if "." not in text:
        return text
    whole, frac = text.split(".")
    return whole + "." + " ".join(frac[i:i + 5] for i in range(0, len(frac), 5))


def _plain(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "yes" if value else "no"
    return str(value)


def _table_cell(report: MethodReport, col: str, value) -> str:
    prec = cell_precision(value, report.precision)
    if prec is None:
        return _plain(value)
    places = report.digits.get(col, 10)
    if isinstance(places, str):
        # "e3": scientific notation with three digits after the point
        return f"{Decimal(full_decimal(value, prec)):.{int(places[1:])}e}"
    return grouped(value, places, prec)


def _format_table(reports, validation) -> str:
    out = []
    if validation is not None:
        out.append(f"validation: {validation['verdict']}")
        for key, val in validation.items():
            if key not in ("verdict", "notes"):
                out.append(f"  {key}: {_plain(val)}")
        for note in validation.get("notes", ()):
            out.append(f"  note: {note}")
    if not reports:
        out.append("method  n  estimate")
    for report in reports:
        params = ", ".join(f"{k}={v}" for k, v in report.parameters.items())
        out.append("")
        out.append(f"[{report.method}] {params}".rstrip())
        body = [[_table_cell(report, c, v) for c, v in zip(report.columns, row)] for row in report.rows]
        widths = [max([len(c)] + [len(r[i]) for r in body]) for i, c in enumerate(report.columns)]
        out.append("  ".join(c.ljust(w) for c, w in zip(report.columns, widths)).rstrip())
        for r in body:
            out.append("  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip())
        for key, val in report.metadata.items():
            out.append(f"  {key}: {_plain(val)}")
        for text in report.disclaimers:
            out.append(f"  note: {text}")
    return "\n".join(out) + "\n"


def _record_cell(value, report_precision: int):
    prec = cell_precision(value, report_precision)
    if prec is None:
        return value
    return {"value": full_decimal(value, prec), "precision": prec}


def report_record(report: MethodReport) -> dict:
    return {
        "method": report.method,
        "parameters": report.parameters,
        "precision": report.precision,
        "columns": list(report.columns),
        "digits": report.digits,
        "rows": [[_record_cell(v, report.precision) for v in row] for row in report.rows],
        "metadata": report.metadata,
        "disclaimers": list(report.disclaimers),
    }


def _format_csv(reports, validation) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["method", "row", "column", "value", "precision"])
    if validation is not None:
        for key, val in validation.items():
            if key != "notes":
                w.writerow(["validation", "", key, _plain(val), ""])
    for report in reports:
        for i, row in enumerate(report.rows, 1):
            for col, val in zip(report.columns, row):
                prec = cell_precision(val, report.precision)
                text = _plain(val) if prec is None else full_decimal(val, prec)
                w.writerow([report.method, i, col, text, prec or ""])
    return buf.getvalue()


def _format_json(reports, validation) -> str:
    doc = {"validation": validation, "reports": [report_record(r) for r in reports]}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def emit(reports, fmt: str = "table", validation: dict | None = None) -> str:
    """Render reports (and an optional validation summary) as text."""
    if fmt == "table":
        return _format_table(reports, validation)
    if fmt == "csv":
        return _format_csv(reports, validation)
    if fmt == "json":
        return _format_json(reports, validation)
    raise ValueError(f"unknown format {fmt!r}; choose from {', '.join(FORMATS)}")


def _parse_cell(cell):
    if isinstance(cell, dict) and set(cell) == {"value", "precision"}:
        prec = cell["precision"]
        if prec == FLOAT_PRECISION:
            return float(cell["value"])
        with mpmath.workprec(prec):
            return mpmath.mpf(cell["value"])
    return cell


def load_reports(text: str) -> tuple:
    """Parse json output back into ``(reports, validation)``."""
    doc = json.loads(text)
    reports = [
        MethodReport(r["method"], r["parameters"], r["columns"],
                     [[_parse_cell(c) for c in row] for row in r["rows"]],
                     r["precision"], r["digits"], r["metadata"], r["disclaimers"])
        for r in doc["reports"]
    ]
    return reports, doc["validation"]
