"""Privacy-preserving transformations.

Non-perturbative (truthful) steps: cell/row suppression, category re-coding,
hour truncation, date-period generalisation, fixed/quantile/custom binning.
Perturbative: bounded uniform integer noise. Every function returns a new
dataset whose provenance records the step, its resolved parameters, the seed
(noise only), and affected cell/row counts.
"""

from __future__ import annotations

import math
import random
from bisect import bisect_right

from sdclab.errors import ConfigError, KindError
from sdclab.schema import Column
from sdclab.steps import ProvenanceEntry, TransformStep, register_variant
from sdclab.table import Dataset, Predicate
from sdclab.values import (
    Suppressed,
    ValueKind,
    is_missing,
    parse_date_token,
    render_date,
    render_number,
)

#: Variants whose output cell always contains the input value.
TRUTHFUL_VARIANTS = frozenset({
    "SuppressCells",
    "SuppressDuplicateRows",
    "RecodeCategories",
    "TruncateDateTime",
    "GeneralizeDatePeriod",
    "BinFixedWidth",
    "BinQuantiles",
    "BinCustomRanges",
})


def _replace_column(
    ds: Dataset, name: str, values: tuple, column: Column, entry: ProvenanceEntry
) -> Dataset:
    idx = ds.schema.index_of(name)
    cols = list(ds.columns)
    cols[idx] = values
    return Dataset(
        schema=ds.schema.with_column_replaced(name, column),
        columns=tuple(cols),
        provenance=ds.provenance + (entry,),
    )


# ---------------------------------------------------------------------------
# Suppression
# ---------------------------------------------------------------------------

def suppress_cells(
    ds: Dataset, column: str, predicate: Predicate, symbol: str = "*"
) -> Dataset:
    """Replace the column's cells with ``symbol`` on rows matching the
    predicate; the cells are missing from then on and ``symbol`` joins the
    column's missing tokens so exports round-trip."""
    col = ds.schema.col(column)
    mask = predicate.mask(ds)
    marker = Suppressed(symbol)
    values = tuple(
        marker if hit else v for v, hit in zip(ds.column(column), mask)
    )
    hits = sum(mask)
    new_col = (
        Column(col.name, col.kind, col.klass, col.missing_tokens | {symbol})
        if hits
        else col
    )
    step = TransformStep(
        "SuppressCells",
        {"column": column, "where": predicate.to_string(), "symbol": symbol},
    )
    entry = ProvenanceEntry(step, {"cells_suppressed": hits})
    return _replace_column(ds, column, values, new_col, entry)


def suppress_duplicate_rows(
    ds: Dataset, key_columns: list[str], order_column: str
) -> Dataset:
    """Group rows on the key columns and keep only the row minimal in
    ``order_column`` per group (stable first-in-file tie-break)."""
    order_col = ds.schema.col(order_column)
    if order_col.kind not in (ValueKind.NUMERIC, ValueKind.DATE, ValueKind.DATETIME):
        raise KindError(
            f"order column {order_column!r} is {order_col.kind.value}, "
            "expected an ordered kind"
        )
    key_cols = [ds.column(n) for n in key_columns]
    order_values = ds.column(order_column)
    groups: dict[tuple, int] = {}

    def rank(i: int):
        v = order_values[i]
        return (1, 0, i) if is_missing(v) else (0, v, i)

    for i in range(ds.n):
        key = tuple(
            "<missing>" if is_missing(c[i]) else c[i] for c in key_cols
        )
        best = groups.get(key)
        if best is None or rank(i) < rank(best):
            groups[key] = i
    keep = sorted(groups.values())
    columns = tuple(tuple(col[i] for i in keep) for col in ds.columns)
    step = TransformStep(
        "SuppressDuplicateRows",
        {"key_columns": list(key_columns), "order_column": order_column},
    )
    entry = ProvenanceEntry(
        step, {"rows_kept": len(keep), "rows_removed": ds.n - len(keep)}
    )
    return Dataset(
        schema=ds.schema, columns=columns, provenance=ds.provenance + (entry,)
    )


# ---------------------------------------------------------------------------
# Global re-coding / generalisation
# ---------------------------------------------------------------------------

def truncate_datetime(ds: Dataset, column: str) -> Dataset:
    """Drop the time of day: the column becomes a plain Date."""
    col = ds.schema.col(column)
    if col.kind is not ValueKind.DATETIME:
        raise KindError(f"column {column!r} is {col.kind.value}, expected DateTime")
    values = tuple(v if is_missing(v) else v.day for v in ds.column(column))
    new_col = Column(col.name, ValueKind.DATE, col.klass, col.missing_tokens)
    step = TransformStep("TruncateDateTime", {"column": column})
    changed = sum(1 for v in values if not is_missing(v))
    entry = ProvenanceEntry(step, {"cells_truncated": changed})
    return _replace_column(ds, column, values, new_col, entry)


def generalize_date_period(
    ds: Dataset, column: str, period_days: int, anchor: str | int = "dataset-min"
) -> Dataset:
    """Map each date into the half-open ``period_days``-wide bucket starting
    at the anchor grid; labels render as ``first day–last day``."""
    col = ds.schema.col(column)
    if col.kind is not ValueKind.DATE:
        raise KindError(f"column {column!r} is {col.kind.value}, expected Date")
    if period_days < 1:
        raise ConfigError(f"period_days must be >= 1, got {period_days}")
    raw = ds.column(column)
    present = [v for v in raw if not is_missing(v)]
    if isinstance(anchor, str) and anchor != "dataset-min":
        anchor_day = parse_date_token(anchor)
    elif anchor == "dataset-min":
        anchor_day = min(present) if present else 0
    else:
        anchor_day = int(anchor)

    def bucket(day: int) -> str:
        i = (day - anchor_day) // period_days
        lo = anchor_day + i * period_days
        return f"{render_date(lo)}–{render_date(lo + period_days - 1)}"

    values = tuple(v if is_missing(v) else bucket(v) for v in raw)
    new_col = Column(col.name, ValueKind.CATEGORICAL, col.klass, col.missing_tokens)
    step = TransformStep(
        "GeneralizeDatePeriod",
        {
            "column": column,
            "period_days": period_days,
            "anchor": anchor if isinstance(anchor, str) else render_date(anchor),
            "resolved_anchor": render_date(anchor_day),
        },
    )
    entry = ProvenanceEntry(step, {"cells_generalized": len(present)})
    return _replace_column(ds, column, values, new_col, entry)


def recode_categories(ds: Dataset, column: str, mapping: dict[str, str]) -> Dataset:
    """Merge/rename categories; unmapped values pass through unchanged."""
    col = ds.schema.col(column)
    if col.kind not in (ValueKind.CATEGORICAL, ValueKind.IDENTIFIER):
        raise KindError(f"column {column!r} is {col.kind.value}, expected Categorical")
    raw = ds.column(column)
    values = tuple(v if is_missing(v) else mapping.get(v, v) for v in raw)
    changed = sum(
        1 for v in raw if not is_missing(v) and v in mapping and mapping[v] != v
    )
    step = TransformStep("RecodeCategories", {"column": column, "mapping": dict(mapping)})
    entry = ProvenanceEntry(step, {"cells_recoded": changed})
    return _replace_column(ds, column, values, col, entry)


def _interval_labels(edges: list, close_last: bool) -> list[str]:
    labels = []
    for i in range(len(edges) - 1):
        last = i == len(edges) - 2
        closer = "]" if (close_last and last) else ")"
        labels.append(
            f"[{render_number(edges[i])}, {render_number(edges[i + 1])}{closer}"
        )
    return labels


def _assign_bins(values, edges: list, labels: list[str], column: str):
    out = []
    lo, hi = edges[0], edges[-1]
    for v in values:
        if is_missing(v):
            out.append(v)
            continue
        if v < lo or v > hi:
            raise ConfigError(
                f"value {v!r} in column {column!r} falls outside "
                f"[{render_number(lo)}, {render_number(hi)}]"
            )
        idx = min(bisect_right(edges, v) - 1, len(labels) - 1)
        out.append(labels[idx])
    return tuple(out)


def bin_fixed_width(
    ds: Dataset, column: str, width: int | float, origin: int | float = 0
) -> Dataset:
    """Replace numeric values by fixed-width, left-closed intervals aligned
    to ``origin``."""
    col = ds.schema.col(column)
    if col.kind is not ValueKind.NUMERIC:
        raise KindError(f"column {column!r} is {col.kind.value}, expected Numeric")
    if width <= 0:
        raise ConfigError(f"width must be positive, got {width}")
    raw = ds.column(column)

    def label(v) -> str:
        if isinstance(v, int) and isinstance(width, int) and isinstance(origin, int):
            i = (v - origin) // width
        else:
            i = math.floor((v - origin) / width)
        lo = origin + i * width
        return f"[{render_number(lo)}, {render_number(lo + width)})"

    values = tuple(v if is_missing(v) else label(v) for v in raw)
    new_col = Column(col.name, ValueKind.CATEGORICAL, col.klass, col.missing_tokens)
    step = TransformStep(
        "BinFixedWidth", {"column": column, "width": width, "origin": origin}
    )
    binned = sum(1 for v in raw if not is_missing(v))
    entry = ProvenanceEntry(step, {"cells_binned": binned})
    return _replace_column(ds, column, values, new_col, entry)


def nearest_rank_quantiles(sorted_values: list, q: int) -> list:
    """Interior cut points at the j/q empirical quantiles, nearest-rank
    convention: the value at 1-based rank ceil(j·n/q)."""
    n = len(sorted_values)
    return [sorted_values[math.ceil(j * n / q) - 1] for j in range(1, q)]


def bin_quantiles(ds: Dataset, column: str, q: int) -> Dataset:
    """Replace numeric values by ``q`` empirical quantile bins; bins are
    left-closed right-open except the last, which is closed."""
    col = ds.schema.col(column)
    if col.kind is not ValueKind.NUMERIC:
        raise KindError(f"column {column!r} is {col.kind.value}, expected Numeric")
    if q < 2:
        raise ConfigError(f"q must be >= 2, got {q}")
    present = sorted(v for v in ds.column(column) if not is_missing(v))
    if len(set(present)) < q:
        raise ConfigError(
            f"column {column!r} has {len(set(present))} distinct values, "
            f"needs at least {q} for {q}-quantile binning"
        )
    lo, hi = present[0], present[-1]
    cuts = []
    for c in nearest_rank_quantiles(present, q):
        if lo < c < hi and (not cuts or c > cuts[-1]):
            cuts.append(c)
    edges = [lo] + cuts + [hi]
    labels = _interval_labels(edges, close_last=True)
    values = _assign_bins(ds.column(column), edges, labels, column)
    new_col = Column(col.name, ValueKind.CATEGORICAL, col.klass, col.missing_tokens)
    step = TransformStep(
        "BinQuantiles", {"column": column, "q": q, "resolved_edges": edges}
    )
    entry = ProvenanceEntry(step, {"cells_binned": len(present)})
    return _replace_column(ds, column, values, new_col, entry)


def bin_custom_ranges(ds: Dataset, column: str, edges: list[int | float]) -> Dataset:
    """Replace numeric values by caller-chosen intervals (e.g. dynamic age
    ranges); edges must be strictly increasing and cover the observed data."""
    col = ds.schema.col(column)
    if col.kind is not ValueKind.NUMERIC:
        raise KindError(f"column {column!r} is {col.kind.value}, expected Numeric")
    if len(edges) < 2 or any(a >= b for a, b in zip(edges, edges[1:])):
        raise ConfigError(f"edges must be strictly increasing, got {edges}")
    labels = _interval_labels(list(edges), close_last=True)
    values = _assign_bins(ds.column(column), list(edges), labels, column)
    new_col = Column(col.name, ValueKind.CATEGORICAL, col.klass, col.missing_tokens)
    step = TransformStep("BinCustomRanges", {"column": column, "edges": list(edges)})
    binned = sum(1 for v in ds.column(column) if not is_missing(v))
    entry = ProvenanceEntry(step, {"cells_binned": binned})
    return _replace_column(ds, column, values, new_col, entry)


def equal_frequency_edges(
    ds: Dataset, column: str, bins: int, min_width: int | float = 0
) -> list:
    """Suggest custom-range edges holding roughly equal counts, merging any
    interval narrower than ``min_width`` into its successor."""
    present = sorted(v for v in ds.column(column) if not is_missing(v))
    if not present:
        raise ConfigError(f"column {column!r} has no non-missing values")
    lo, hi = present[0], present[-1]
    if hi <= lo:
        raise ConfigError(f"column {column!r} is constant, no ranges to suggest")
    out = [lo]
    for c in nearest_rank_quantiles(present, max(bins, 1)):
        if c - out[-1] >= min_width and lo < c < hi:
            out.append(c)
    if hi - out[-1] < min_width and len(out) > 1:
        out.pop()
    out.append(hi)
    return out


# ---------------------------------------------------------------------------
# Perturbation
# ---------------------------------------------------------------------------

def add_uniform_integer_noise(
    ds: Dataset,
    column: str,
    lo: int,
    hi: int,
    seed: int | None = None,
) -> Dataset:
    """Add an independent integer draw from {lo, …, hi} to every non-missing
    cell (days for Date columns). Draws are sequential in row order and
    deterministic given the seed; when no seed is supplied one is drawn and
    recorded in provenance so replay stays exact."""
    col = ds.schema.col(column)
    if col.kind not in (ValueKind.NUMERIC, ValueKind.DATE):
        raise KindError(
            f"column {column!r} is {col.kind.value}, expected Numeric or Date"
        )
    if lo > hi:
        raise ConfigError(f"noise interval is empty: [{lo}, {hi}]")
    if seed is None:
        seed = random.SystemRandom().getrandbits(32)
    rng = random.Random(seed)
    values = tuple(
        v if is_missing(v) else v + rng.randint(lo, hi) for v in ds.column(column)
    )
    step = TransformStep(
        "AddUniformIntegerNoise", {"column": column, "lo": lo, "hi": hi}, seed=seed
    )
    noised = sum(1 for v in ds.column(column) if not is_missing(v))
    entry = ProvenanceEntry(step, {"cells_noised": noised})
    return _replace_column(ds, column, values, col, entry)


# ---------------------------------------------------------------------------
# Registry wiring
# ---------------------------------------------------------------------------

def _apply_suppress_cells(ds: Dataset, step: TransformStep) -> Dataset:
    p = step.params
    return suppress_cells(
        ds, p["column"], Predicate.parse(p.get("where", "")), p.get("symbol", "*")
    )


def _apply_suppress_dupes(ds: Dataset, step: TransformStep) -> Dataset:
    return suppress_duplicate_rows(
        ds, step.params["key_columns"], step.params["order_column"]
    )


def _apply_truncate(ds: Dataset, step: TransformStep) -> Dataset:
    return truncate_datetime(ds, step.params["column"])


def _apply_generalize_period(ds: Dataset, step: TransformStep) -> Dataset:
    p = step.params
    return generalize_date_period(
        ds, p["column"], p["period_days"], p.get("anchor", "dataset-min")
    )


def _apply_recode(ds: Dataset, step: TransformStep) -> Dataset:
    return recode_categories(ds, step.params["column"], step.params["mapping"])


def _apply_bin_fixed(ds: Dataset, step: TransformStep) -> Dataset:
    p = step.params
    return bin_fixed_width(ds, p["column"], p["width"], p.get("origin", 0))


def _apply_bin_quantiles(ds: Dataset, step: TransformStep) -> Dataset:
    return bin_quantiles(ds, step.params["column"], step.params["q"])


def _apply_bin_custom(ds: Dataset, step: TransformStep) -> Dataset:
    return bin_custom_ranges(ds, step.params["column"], step.params["edges"])


def _apply_noise(ds: Dataset, step: TransformStep) -> Dataset:
    p = step.params
    return add_uniform_integer_noise(ds, p["column"], p["lo"], p["hi"], step.seed)


register_variant("SuppressCells", _apply_suppress_cells)
register_variant("SuppressDuplicateRows", _apply_suppress_dupes)
register_variant("TruncateDateTime", _apply_truncate)
register_variant("GeneralizeDatePeriod", _apply_generalize_period)
register_variant("RecodeCategories", _apply_recode)
register_variant("BinFixedWidth", _apply_bin_fixed)
register_variant("BinQuantiles", _apply_bin_quantiles)
register_variant("BinCustomRanges", _apply_bin_custom)
register_variant("AddUniformIntegerNoise", _apply_noise, perturbative=True)
