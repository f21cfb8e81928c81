"""Hypothesis strategies for small mixed-kind datasets."""

from __future__ import annotations

from hypothesis import strategies as st

from sdclab.schema import AttributeClass, Column, Schema
from sdclab.table import Dataset
from sdclab.values import DayTime, ValueKind

_KIND_VALUES = {
    ValueKind.NUMERIC: st.integers(min_value=0, max_value=6),
    ValueKind.CATEGORICAL: st.sampled_from(["a", "b", "c", "x y", "Unknown?"]),
    ValueKind.DATE: st.integers(min_value=18300, max_value=18306),
    ValueKind.DATETIME: st.builds(
        DayTime,
        st.integers(min_value=18300, max_value=18302),
        st.integers(min_value=0, max_value=3).map(lambda h: h * 3600),
    ),
    ValueKind.IDENTIFIER: st.sampled_from(["id1", "id2", "id3"]),
}


def cell(kind: ValueKind, missing_rate: float = 0.15):
    return st.one_of(
        st.just(None) if missing_rate else st.nothing(),
        _KIND_VALUES[kind],
        _KIND_VALUES[kind],
        _KIND_VALUES[kind],
    )


@st.composite
def qi_datasets(draw, min_rows=1, max_rows=30, min_cols=1, max_cols=4):
    n_cols = draw(st.integers(min_cols, max_cols))
    n_rows = draw(st.integers(min_rows, max_rows))
    kinds = draw(
        st.lists(
            st.sampled_from(
                [
                    ValueKind.NUMERIC,
                    ValueKind.CATEGORICAL,
                    ValueKind.DATE,
                    ValueKind.DATETIME,
                ]
            ),
            min_size=n_cols,
            max_size=n_cols,
        )
    )
    columns = tuple(
        tuple(draw(cell(kind)) for _ in range(n_rows)) for kind in kinds
    )
    schema = Schema(
        tuple(
            Column(f"c{i}", kind, AttributeClass.QUASI_IDENTIFIER)
            for i, kind in enumerate(kinds)
        )
    )
    return Dataset(schema=schema, columns=columns)


@st.composite
def numeric_qi_datasets(draw, min_rows=2, max_rows=30, distinct_floor=0):
    """Single numeric QI column plus one categorical column."""
    n_rows = draw(st.integers(min_rows, max_rows))
    numeric = draw(
        st.lists(
            st.one_of(st.just(None), st.integers(-20, 60)),
            min_size=n_rows,
            max_size=n_rows,
        )
    )
    if distinct_floor:
        numeric = list(numeric)
        i = 0
        while (
            len({v for v in numeric if v is not None}) < distinct_floor and i < n_rows
        ):
            numeric[i] = next(x for x in range(100, 400) if x not in numeric)
            i += 1
    cats = draw(
        st.lists(
            st.sampled_from(["a", "b", None]), min_size=n_rows, max_size=n_rows
        )
    )
    schema = Schema(
        (
            Column("num", ValueKind.NUMERIC, AttributeClass.QUASI_IDENTIFIER),
            Column("cat", ValueKind.CATEGORICAL, AttributeClass.QUASI_IDENTIFIER),
        )
    )
    return Dataset(schema=schema, columns=(tuple(numeric), tuple(cats)))
