"""CSV emission for sweep records and frontier curves."""

from __future__ import annotations

import csv
from pathlib import Path

from .frontier import FrontierCurve
from .sweep import CSV_FIELDS, SweepRecord

FRONTIER_FIELDS = ("name", "epsilon", "eta")


def render(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _rows(items):
    items = list(items)
    if items and isinstance(items[0], FrontierCurve):
        header = FRONTIER_FIELDS
        rows = [(c.name, eps, eta) for c in items for eps, eta in c.points]
    elif all(isinstance(r, SweepRecord) for r in items):
        header = CSV_FIELDS
        rows = [tuple(getattr(r, name) for name in CSV_FIELDS) for r in items]
    else:
        raise TypeError("emit_csv expects SweepRecords or FrontierCurves")
    return header, rows


def emit_csv(items, path) -> None:
    """Write records or curves with a header row; floats use 12 significant digits."""
    header, rows = _rows(items)
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([render(v) for v in row])
