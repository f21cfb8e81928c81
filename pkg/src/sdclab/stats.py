"""Distribution summaries used for utility diagnostics and the API."""

from __future__ import annotations

from typing import Any

from sdclab.errors import ConfigError
from sdclab.table import Dataset
from sdclab.values import (
    ORDERED_KINDS,
    DayTime,
    ValueKind,
    is_missing,
    ordinal_of,
    render_value,
)


def category_frequencies(ds: Dataset, name: str) -> dict[str, Any]:
    col = ds.schema.col(name)
    counts: dict[str, int] = {}
    missing = 0
    for v in ds.column(name):
        if is_missing(v):
            missing += 1
            continue
        label = render_value(v, col.kind)
        counts[label] = counts.get(label, 0) + 1
    return {
        "column": name,
        "kind": "categorical",
        "missing": missing,
        "categories": [
            {"value": k, "count": counts[k]} for k in sorted(counts)
        ],
    }


def column_histogram(ds: Dataset, name: str, bins: int = 10) -> dict[str, Any]:
    """Equal-width count histogram for ordered columns; falls back to a
    category frequency table otherwise."""
    col = ds.schema.col(name)
    if col.kind not in ORDERED_KINDS:
        return category_frequencies(ds, name)
    if bins < 1:
        raise ConfigError(f"bins must be >= 1, got {bins}")
    values = [v for v in ds.column(name) if not is_missing(v)]
    missing = ds.n - len(values)
    if not values:
        return {"column": name, "kind": "numeric", "missing": missing, "bins": []}
    ords = [ordinal_of(v, col.kind) for v in values]
    lo, hi = min(ords), max(ords)
    if lo == hi:
        return {
            "column": name,
            "kind": "numeric",
            "missing": missing,
            "bins": [
                {
                    "lo": _render_ord(lo, col.kind),
                    "hi": _render_ord(hi, col.kind),
                    "count": len(values),
                }
            ],
        }
    width = (hi - lo) / bins
    counts = [0] * bins
    for o in ords:
        idx = min(int((o - lo) / width), bins - 1)
        counts[idx] += 1
    out = []
    for i in range(bins):
        out.append(
            {
                "lo": _render_ord(lo + i * width, col.kind),
                "hi": _render_ord(lo + (i + 1) * width, col.kind),
                "count": counts[i],
            }
        )
    return {"column": name, "kind": "numeric", "missing": missing, "bins": out}


def _render_ord(o: float, kind: ValueKind) -> str:
    if kind is ValueKind.NUMERIC:
        return f"{o:g}"
    if kind is ValueKind.DATE:
        return render_value(int(round(o)), kind)
    # DateTime ordinals are seconds
    day, sec = divmod(int(round(o)), 86400)
    return render_value(DayTime(day, sec), kind)
