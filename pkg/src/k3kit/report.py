"""Rendering of report rows as JSON lines, CSV or markdown.

Rationals print as ``p/q`` (integers stay integers), floats with 12
significant digits.  Output is a pure function of the rows, so identical runs
produce identical bytes; the optional timestamp header is the only exception.
"""

from __future__ import annotations

import csv
import datetime as _dt
import io
import json
from fractions import Fraction

import mpmath

FORMATS = ("json", "csv", "markdown")


def plain(x):
    """Recursively convert a value to JSON-compatible primitives."""
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        return float(f"{x:.12g}")
    if isinstance(x, (mpmath.mpf, mpmath.mpc)):
        return mpmath.nstr(x, 12, strip_zeros=False)
    if isinstance(x, dict):
        return {str(k): plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        return [plain(v) for v in x]
    raise TypeError(f"cannot render {type(x).__name__}")


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (list, dict)):
        return json.dumps(v, separators=(",", ":"))
    return "" if v is None else str(v)


def timestamp() -> str:
    return _dt.datetime.now(_dt.timezone.utc).replace(microsecond=0).isoformat()


def render(rows, fmt: str = "markdown", stamp: str | None = None, title: str | None = None) -> str:
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}")
    rows = [plain(r) for r in rows]
    cols = []
    for r in rows:
        cols += [k for k in r if k not in cols]
    out = io.StringIO()
    if fmt == "json":
        if stamp:
            out.write(json.dumps({"generated": stamp}) + "\n")
        for r in rows:
            out.write(json.dumps(r, sort_keys=False) + "\n")
        return out.getvalue()
    if fmt == "csv":
        if stamp:
            out.write(f"# generated {stamp}\n")
        w = csv.writer(out, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow([_cell(r.get(c)) for c in cols])
        return out.getvalue()
    if stamp:
        out.write(f"_generated {stamp}_\n\n")
    if title:
        out.write(f"### {title}\n\n")
    out.write("| " + " | ".join(cols) + " |\n")
    out.write("|" + "---|" * len(cols) + "\n")
    for r in rows:
        out.write("| " + " | ".join(_cell(r.get(c)).replace("|", "\\|") for c in cols) + " |\n")
    return out.getvalue()
