"""Immutable columnar dataset, filter predicates, and structural operations.

Every operation returns a brand-new :class:`Dataset`; the input is never
touched. Each result carries a provenance entry so the transformed dataset
can be reproduced from the original by replay.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Iterator

from sdclab.errors import KindError, PredicateError
from sdclab.schema import AttributeClass, Column, Schema
from sdclab.steps import ProvenanceEntry, TransformStep, register_variant
from sdclab.values import (
    ORDERED_KINDS,
    DayTime,
    ValueKind,
    is_missing,
    parse_token,
)


@dataclass(frozen=True)
class Dataset:
    """Columnar table: ``columns[i]`` is the value tuple for ``schema.columns[i]``.

    Equality compares schema and cell values with all missing representations
    collapsed; provenance is carried along but never part of equality.
    """

    schema: Schema
    columns: tuple[tuple, ...]
    provenance: tuple[ProvenanceEntry, ...] = ()

    def __post_init__(self):
        if len(self.columns) != len(self.schema.columns):
            raise ValueError("column count does not match schema")
        lengths = {len(c) for c in self.columns}
        if len(lengths) > 1:
            raise ValueError(f"ragged columns: lengths {sorted(lengths)}")

    @property
    def n(self) -> int:
        return len(self.columns[0]) if self.columns else 0

    row_count = n

    def column(self, name: str) -> tuple:
        return self.columns[self.schema.index_of(name)]

    def cell(self, row: int, name: str) -> Any:
        return self.columns[self.schema.index_of(name)][row]

    def rows(self, names: tuple[str, ...] | None = None) -> Iterator[tuple]:
        cols = (
            self.columns
            if names is None
            else tuple(self.column(n) for n in names)
        )
        return zip(*cols) if cols else iter(())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        if self.schema != other.schema:
            return False
        for a, b in zip(self.columns, other.columns):
            if len(a) != len(b):
                return False
            for x, y in zip(a, b):
                if is_missing(x) and is_missing(y):
                    continue
                if x != y:
                    return False
        return True

    __hash__ = None  # type: ignore[assignment]

    def _evolved(
        self,
        *,
        schema: Schema | None = None,
        columns: tuple[tuple, ...] | None = None,
        entry: ProvenanceEntry | None = None,
    ) -> "Dataset":
        return Dataset(
            schema=schema if schema is not None else self.schema,
            columns=columns if columns is not None else self.columns,
            provenance=self.provenance + ((entry,) if entry else ()),
        )


# ---------------------------------------------------------------------------
# Predicates
# ---------------------------------------------------------------------------

_OPS: dict[str, Callable[[Any, Any], bool]] = {
    "=": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
}

_OP_ALIASES = {
    "eq": "=", "ne": "!=", "lt": "<", "le": "<=", "gt": ">", "ge": ">=",
    "==": "=", "≠": "!=", "≤": "<=", "≥": ">=",
}

_ORDER_OPS = frozenset({"<", "<=", ">", ">="})


@dataclass(frozen=True)
class Condition:
    attribute: str
    op: str
    literal: Any

    def __post_init__(self):
        canon = _OP_ALIASES.get(self.op, self.op)
        if canon not in _OPS:
            raise PredicateError(f"unknown comparator {self.op!r}")
        object.__setattr__(self, "op", canon)

    def to_token(self) -> str:
        op_name = {v: k for k, v in _OP_ALIASES.items() if k.isalpha()}[self.op]
        return f"{self.attribute}:{op_name}:{self.literal}"


@dataclass(frozen=True)
class Predicate:
    """Conjunction of comparisons; the empty conjunction is a tautology."""

    conditions: tuple[Condition, ...] = ()

    @staticmethod
    def always() -> "Predicate":
        return Predicate(())

    @staticmethod
    def of(*conds: tuple[str, str, Any]) -> "Predicate":
        return Predicate(tuple(Condition(*c) for c in conds))

    @staticmethod
    def parse(text: str) -> "Predicate":
        """Parse the wire form ``col:op:value,col:op:value``."""
        text = text.strip()
        if not text:
            return Predicate.always()
        conds = []
        for part in text.split(","):
            pieces = part.split(":", 2)
            if len(pieces) != 3:
                raise PredicateError(f"bad predicate term {part!r}")
            conds.append(Condition(pieces[0].strip(), pieces[1].strip(), pieces[2]))
        return Predicate(tuple(conds))

    def to_string(self) -> str:
        return ",".join(c.to_token() for c in self.conditions)

    def mask(self, ds: Dataset) -> list[bool]:
        """Row mask; a missing cell never satisfies a condition."""
        out = [True] * ds.n
        for cond in self.conditions:
            col = ds.schema.col(cond.attribute)
            values = ds.column(cond.attribute)
            literal = _bind_literal(cond.literal, col)
            if cond.op in _ORDER_OPS and col.kind not in ORDERED_KINDS:
                raise PredicateError(
                    f"comparator {cond.op!r} needs an ordered column, "
                    f"{cond.attribute!r} is {col.kind.value}"
                )
            fn = _OPS[cond.op]
            for i, v in enumerate(values):
                if out[i] and (is_missing(v) or not fn(v, literal)):
                    out[i] = False
        return out


def _bind_literal(literal: Any, col: Column) -> Any:
    if isinstance(literal, str) and col.kind in (
        ValueKind.NUMERIC,
        ValueKind.DATE,
        ValueKind.DATETIME,
    ):
        try:
            return parse_token(literal.strip(), col.kind)
        except ValueError as exc:
            raise PredicateError(
                f"literal {literal!r} is not comparable with "
                f"{col.kind.value} column {col.name!r}"
            ) from exc
    if col.kind is ValueKind.NUMERIC and isinstance(literal, (int, float)):
        return literal
    if col.kind is ValueKind.DATE and isinstance(literal, int):
        return literal
    if col.kind is ValueKind.DATETIME and isinstance(literal, DayTime):
        return literal
    if isinstance(literal, str):
        return literal
    raise PredicateError(
        f"literal {literal!r} is not comparable with {col.kind.value} "
        f"column {col.name!r}"
    )


# ---------------------------------------------------------------------------
# Structural operations
# ---------------------------------------------------------------------------

def classify(ds: Dataset, assignments: dict[str, AttributeClass | str]) -> Dataset:
    """Set the privacy class of named attributes; everything else unchanged."""
    resolved = {
        name: klass if isinstance(klass, AttributeClass) else AttributeClass(klass)
        for name, klass in assignments.items()
    }
    schema = ds.schema.with_classes(resolved)
    step = TransformStep(
        "Classify", {"assignments": {k: v.value for k, v in resolved.items()}}
    )
    entry = ProvenanceEntry(step, {"columns": len(resolved)})
    return ds._evolved(schema=schema, entry=entry)


def drop_columns(
    ds: Dataset, names: list[str], reasons: dict[str, str] | None = None
) -> Dataset:
    for n in names:
        ds.schema.index_of(n)
    drop = set(names)
    schema = ds.schema.without(names)
    columns = tuple(
        col
        for col, sc in zip(ds.columns, ds.schema.columns)
        if sc.name not in drop
    )
    step = TransformStep(
        "DropColumns", {"names": list(names), "reasons": dict(reasons or {})}
    )
    entry = ProvenanceEntry(step, {"columns_removed": len(drop)})
    return ds._evolved(schema=schema, columns=columns, entry=entry)


def derive_duration(
    ds: Dataset, start: str, end: str, new_name: str, drop_sources: bool = False
) -> Dataset:
    """Append a Numeric column holding calendar days from ``start`` to ``end``."""
    for name in (start, end):
        kind = ds.schema.col(name).kind
        if kind not in (ValueKind.DATE, ValueKind.DATETIME):
            raise KindError(f"column {name!r} is {kind.value}, expected Date/DateTime")
    if new_name in ds.schema:
        raise PredicateError(f"column {new_name!r} already exists")

    def day_of(v: Any) -> int:
        return v.day if isinstance(v, tuple) else v

    start_col = ds.column(start)
    end_col = ds.column(end)
    derived = tuple(
        None
        if is_missing(s) or is_missing(e)
        else day_of(e) - day_of(s)
        for s, e in zip(start_col, end_col)
    )
    schema = ds.schema.appended(Column(new_name, ValueKind.NUMERIC))
    columns = ds.columns + (derived,)
    step = TransformStep(
        "DeriveDuration",
        {"start": start, "end": end, "new_name": new_name, "drop_sources": drop_sources},
    )
    computed = sum(1 for v in derived if v is not None)
    out = ds._evolved(
        schema=schema,
        columns=columns,
        entry=ProvenanceEntry(step, {"rows_computed": computed}),
    )
    if drop_sources:
        # folded into the same logical step: drop without its own entry
        keep = [c.name for c in out.schema.columns if c.name not in (start, end)]
        schema2 = out.schema.without([start, end])
        cols2 = tuple(out.column(n) for n in keep)
        out = Dataset(schema=schema2, columns=cols2, provenance=out.provenance)
    return out


def filter_subset(ds: Dataset, predicate: Predicate) -> Dataset:
    """Rows satisfying every conjunct; schema unchanged."""
    mask = predicate.mask(ds)
    columns = tuple(
        tuple(v for v, keep in zip(col, mask) if keep) for col in ds.columns
    )
    kept = sum(mask)
    step = TransformStep("FilterRows", {"where": predicate.to_string()})
    entry = ProvenanceEntry(step, {"rows_kept": kept, "rows_removed": ds.n - kept})
    return ds._evolved(columns=columns, entry=entry)


def _apply_classify(ds: Dataset, step: TransformStep) -> Dataset:
    return classify(ds, step.params["assignments"])


def _apply_drop(ds: Dataset, step: TransformStep) -> Dataset:
    return drop_columns(ds, step.params["names"], step.params.get("reasons"))


def _apply_derive(ds: Dataset, step: TransformStep) -> Dataset:
    p = step.params
    return derive_duration(
        ds, p["start"], p["end"], p["new_name"], p.get("drop_sources", False)
    )


def _apply_filter(ds: Dataset, step: TransformStep) -> Dataset:
    return filter_subset(ds, Predicate.parse(step.params["where"]))


register_variant("Classify", _apply_classify, structural=True)
register_variant("DropColumns", _apply_drop, structural=True)
register_variant("DeriveDuration", _apply_derive, structural=True)
register_variant("FilterRows", _apply_filter, structural=True)
