"""CSV ingestion/export and schema inference.

Input is RFC-4180-style CSV with a mandatory header row, UTF-8 encoded.
Cells matching a column's missing tokens load as missing; plain missing
cells export as the canonical missing token ("Unknown" by default) so
load ∘ write is the identity.
"""

from __future__ import annotations

import csv
import io
from pathlib import Path
from typing import IO

from sdclab.errors import CellParseError, MalformedCsvError
from sdclab.schema import DEFAULT_MISSING_TOKENS, Column, Schema
from sdclab.table import Dataset
from sdclab.values import (
    ValueKind,
    is_missing,
    parse_token,
    render_value,
)

_INFER_PRIORITY = (ValueKind.DATETIME, ValueKind.DATE, ValueKind.NUMERIC)


def _as_text_stream(source) -> IO[str]:
    if isinstance(source, Path):
        return open(source, "r", encoding="utf-8", newline="")
    if isinstance(source, str):
        if "\n" not in source:
            try:
                if Path(source).exists():
                    return open(source, "r", encoding="utf-8", newline="")
            except OSError:
                pass
        return io.StringIO(source)
    if isinstance(source, bytes):
        return io.StringIO(source.decode("utf-8"))
    if hasattr(source, "read"):
        data = source.read()
        if isinstance(data, bytes):
            data = data.decode("utf-8")
        return io.StringIO(data)
    raise MalformedCsvError(f"unsupported CSV source {type(source).__name__}")


def _read_raw(source) -> tuple[list[str], list[list[str]]]:
    stream = _as_text_stream(source)
    try:
        reader = csv.reader(stream)
        try:
            header = next(reader)
        except StopIteration:
            raise MalformedCsvError("empty input: missing header row") from None
        width = len(header)
        rows: list[list[str]] = []
        for row in reader:
            if not row:
                continue
            if len(row) != width:
                raise MalformedCsvError(
                    f"expected {width} fields, found {len(row)}", line=reader.line_num
                )
            rows.append(row)
        return header, rows
    finally:
        stream.close()


def infer_schema(header: list[str], rows: list[list[str]]) -> Schema:
    """Pick each column's kind by priority DateTime > Date > Numeric >
    Categorical; a kind wins only if every non-missing cell parses."""
    if not rows:
        raise MalformedCsvError("cannot infer a schema without data rows")
    cols = []
    for j, name in enumerate(header):
        tokens = [
            row[j].strip()
            for row in rows
            if row[j].strip() not in DEFAULT_MISSING_TOKENS
        ]
        kind = ValueKind.CATEGORICAL
        for candidate in _INFER_PRIORITY:
            if tokens and _all_parse(tokens, candidate):
                kind = candidate
                break
        cols.append(Column(name, kind))
    return Schema(tuple(cols))


def _all_parse(tokens: list[str], kind: ValueKind) -> bool:
    for t in tokens:
        try:
            parse_token(t, kind)
        except ValueError:
            return False
    return True


def load_csv(source, schema: Schema | None = None) -> Dataset:
    """Parse CSV into a Dataset. Without a schema, :func:`infer_schema` runs
    first and every column defaults to class Insensitive."""
    header, rows = _read_raw(source)
    if schema is None:
        schema = infer_schema(header, rows)
    else:
        declared = [c.name for c in schema.columns]
        if header != declared:
            raise MalformedCsvError(
                f"header {header!r} does not match schema columns {declared!r}"
            )
    columns: list[list] = [[] for _ in schema.columns]
    for r, row in enumerate(rows):
        for j, col in enumerate(schema.columns):
            token = row[j].strip()
            if token in col.missing_tokens:
                columns[j].append(None)
                continue
            try:
                columns[j].append(parse_token(token, col.kind))
            except ValueError:
                # +2: one for the header row, one for 1-based numbering
                raise CellParseError(col.name, r + 2, token, col.kind.value) from None
    return Dataset(schema=schema, columns=tuple(tuple(c) for c in columns))


def write_csv(ds: Dataset, dest=None) -> str | None:
    """Serialize to CSV text; writes to ``dest`` (path or text file) when
    given, else returns the document as a string."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(ds.schema.names)
    renderers = [
        (col, sc.kind, sc.missing_render_token())
        for col, sc in zip(ds.columns, ds.schema.columns)
    ]
    for i in range(ds.n):
        writer.writerow(
            [render_value(col[i], kind, miss) for col, kind, miss in renderers]
        )
    text = buf.getvalue()
    if dest is None:
        return text
    if isinstance(dest, (str, Path)):
        Path(dest).write_text(text, encoding="utf-8")
        return None
    dest.write(text)
    return None


def missing_count(ds: Dataset, name: str) -> int:
    return sum(1 for v in ds.column(name) if is_missing(v))
