from __future__ import annotations

import random

import pytest
from hypothesis import HealthCheck, settings

from sdclab.schema import AttributeClass, Column, Schema
from sdclab.table import Dataset
from sdclab.values import DayTime, ValueKind

settings.register_profile(
    "ci",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")


def make_ds(spec: dict[str, tuple], klass=AttributeClass.QUASI_IDENTIFIER) -> Dataset:
    """Tiny dataset builder: {name: (kind, [values...])}; None cells missing."""
    cols = []
    data = []
    for name, (kind, values) in spec.items():
        cols.append(Column(name, kind, klass))
        data.append(tuple(values))
    return Dataset(schema=Schema(tuple(cols)), columns=tuple(data))


def random_qi_dataset(
    rng: random.Random,
    n_rows: int,
    n_cols: int,
    missing_rate: float = 0.1,
) -> Dataset:
    """Mixed-kind dataset with small value domains (so classes collide)."""
    kinds = [
        rng.choice(
            [ValueKind.NUMERIC, ValueKind.CATEGORICAL, ValueKind.DATE, ValueKind.DATETIME]
        )
        for _ in range(n_cols)
    ]
    columns = []
    for kind in kinds:
        values = []
        for _ in range(n_rows):
            if rng.random() < missing_rate:
                values.append(None)
            elif kind is ValueKind.NUMERIC:
                values.append(rng.randint(0, 8))
            elif kind is ValueKind.CATEGORICAL:
                values.append(rng.choice("abcd"))
            elif kind is ValueKind.DATE:
                values.append(18300 + rng.randint(0, 6))
            else:
                values.append(DayTime(18300 + rng.randint(0, 3), rng.randint(0, 4) * 7200))
        columns.append(tuple(values))
    schema = Schema(
        tuple(
            Column(f"c{i}", kind, AttributeClass.QUASI_IDENTIFIER)
            for i, kind in enumerate(kinds)
        )
    )
    return Dataset(schema=schema, columns=tuple(columns))


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0xC0FFEE)
