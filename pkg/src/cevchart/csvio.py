"""Wide-format CSV for subgroup data: one subgroup per row.

A field may hold a number or the token ``<`` (censored at the threshold).
Numbers at or below the threshold are also treated as censored.
"""

from __future__ import annotations

import csv
import io
import math
from pathlib import Path

import numpy as np

from cevchart.chart import SubgroupMatrix
from cevchart.errors import ParseError

CENSORED_TOKEN = "<"


def _is_number(field: str) -> bool:
    try:
        float(field)
    except ValueError:
        return False
    return True


def parse_csv(text: str, threshold: float, subgroup_size: int) -> SubgroupMatrix:
    rows = [r for r in csv.reader(io.StringIO(text)) if any(f.strip() for f in r)]
    if not rows:
        raise ParseError("empty file")
    first = 1
    head = [f.strip() for f in rows[0]]
    # header: a first row in which no field is a number or the censor token
    if not any(_is_number(f) or f == CENSORED_TOKEN for f in head):
        rows = rows[1:]
        first = 2
        if not rows:
            raise ParseError("file has a header but no data rows")
    data = np.empty((len(rows), subgroup_size))
    for i, row in enumerate(rows):
        lineno = i + first
        if len(row) != subgroup_size:
            raise ParseError(f"expected {subgroup_size} fields, found {len(row)}", row=lineno)
        for j, raw in enumerate(row):
            field = raw.strip()
            if field == CENSORED_TOKEN:
                data[i, j] = threshold
                continue
            try:
                value = float(field)
            except ValueError:
                raise ParseError(f"non-numeric field {field!r}", row=lineno, column=j + 1) from None
            if not math.isfinite(value):
                raise ParseError(f"non-finite field {field!r}", row=lineno, column=j + 1)
            data[i, j] = value
    return SubgroupMatrix.from_readings(data, threshold)


def ingest_csv(path, threshold: float, subgroup_size: int) -> SubgroupMatrix:
    """Read a wide CSV file and normalize censored cells to the threshold."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    return parse_csv(text, threshold, subgroup_size)


def format_csv(matrix: SubgroupMatrix) -> str:
    # repr() round-trips floats exactly
    out = io.StringIO()
    for row in matrix.data:
        out.write(",".join(repr(float(v)) for v in row))
        out.write("\n")
    return out.getvalue()
