"""Schema: per-attribute kind, privacy classification, and missing tokens."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable

from sdclab.errors import ConfigError, UnknownColumnError
from sdclab.values import ValueKind

DEFAULT_MISSING_TOKENS = frozenset({"", "NA", "Unknown"})


class AttributeClass(str, Enum):
    DIRECT_IDENTIFIER = "DirectIdentifier"
    QUASI_IDENTIFIER = "QuasiIdentifier"
    SENSITIVE = "Sensitive"
    INSENSITIVE = "Insensitive"


@dataclass(frozen=True)
class Column:
    name: str
    kind: ValueKind
    klass: AttributeClass = AttributeClass.INSENSITIVE
    missing_tokens: frozenset[str] = DEFAULT_MISSING_TOKENS

    def missing_render_token(self) -> str:
        """Canonical token used to render a plain missing cell."""
        if "Unknown" in self.missing_tokens:
            return "Unknown"
        if "NA" in self.missing_tokens:
            return "NA"
        for tok in sorted(self.missing_tokens):
            if tok:
                return tok
        return ""


@dataclass(frozen=True)
class Schema:
    columns: tuple[Column, ...]
    _index: dict[str, int] = field(
        default_factory=dict, repr=False, compare=False, hash=False
    )

    def __post_init__(self):
        names = [c.name for c in self.columns]
        if len(names) != len(set(names)):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise ConfigError(f"duplicate column names: {dupes}")
        object.__setattr__(self, "_index", {c.name: i for i, c in enumerate(self.columns)})

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.columns)

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def index_of(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownColumnError(name) from None

    def col(self, name: str) -> Column:
        return self.columns[self.index_of(name)]

    def with_classes(self, assignments: dict[str, AttributeClass]) -> "Schema":
        for name in assignments:
            self.index_of(name)
        cols = tuple(
            replace(c, klass=assignments.get(c.name, c.klass)) for c in self.columns
        )
        return Schema(cols)

    def with_column_replaced(self, name: str, column: Column) -> "Schema":
        i = self.index_of(name)
        cols = list(self.columns)
        cols[i] = column
        return Schema(tuple(cols))

    def without(self, names: Iterable[str]) -> "Schema":
        drop = set(names)
        for n in drop:
            self.index_of(n)
        return Schema(tuple(c for c in self.columns if c.name not in drop))

    def appended(self, column: Column) -> "Schema":
        return Schema(self.columns + (column,))

    def direct_identifiers(self) -> tuple[str, ...]:
        return tuple(
            c.name for c in self.columns if c.klass is AttributeClass.DIRECT_IDENTIFIER
        )


def schema_to_obj(schema: Schema) -> list[dict]:
    """Side-car representation: a JSON list of column descriptors."""
    return [
        {
            "name": c.name,
            "kind": c.kind.value,
            "class": c.klass.value,
            "missing_tokens": sorted(c.missing_tokens),
        }
        for c in schema.columns
    ]


def schema_from_obj(obj: list[dict]) -> Schema:
    if not isinstance(obj, list):
        raise ConfigError("schema document must be a JSON list of column objects")
    cols = []
    for entry in obj:
        try:
            cols.append(
                Column(
                    name=entry["name"],
                    kind=ValueKind(entry["kind"]),
                    klass=AttributeClass(entry.get("class", "Insensitive")),
                    missing_tokens=frozenset(
                        entry.get("missing_tokens", sorted(DEFAULT_MISSING_TOKENS))
                    ),
                )
            )
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"bad schema entry {entry!r}: {exc}") from exc
    return Schema(tuple(cols))


def dump_schema(schema: Schema) -> str:
    return json.dumps(schema_to_obj(schema), indent=2) + "\n"


def load_schema(text: str) -> Schema:
    return schema_from_obj(json.loads(text))
