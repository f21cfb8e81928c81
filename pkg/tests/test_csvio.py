import pytest
from hypothesis import given

from sdclab.csvio import infer_schema, load_csv, write_csv
from sdclab.errors import CellParseError, MalformedCsvError
from sdclab.schema import (
    AttributeClass,
    Column,
    Schema,
    load_schema,
    dump_schema,
)
from sdclab.values import ValueKind

from .strategies import qi_datasets

AGE_GENDER = Schema(
    (
        Column("Age", ValueKind.NUMERIC),
        Column("Gender", ValueKind.CATEGORICAL),
    )
)


def test_load_simple_row():
    ds = load_csv("Age,Gender\n67,M\n", AGE_GENDER)
    assert ds.n == 1
    assert ds.cell(0, "Age") == 67
    assert ds.cell(0, "Gender") == "M"


def test_missing_token_becomes_missing():
    ds = load_csv("Age,Gender\nUnknown,M\n", AGE_GENDER)
    assert ds.cell(0, "Age") is None


def test_parse_failure_names_column_and_line():
    with pytest.raises(CellParseError) as err:
        load_csv("Age,Gender\nabc,M\n", AGE_GENDER)
    assert err.value.column == "Age"
    assert err.value.line == 2


def test_ragged_row_reports_line_number():
    with pytest.raises(MalformedCsvError) as err:
        load_csv("Age,Gender\n67,M\n1,2,3\n", AGE_GENDER)
    assert err.value.line == 3


def test_header_mismatch_rejected():
    with pytest.raises(MalformedCsvError):
        load_csv("Gender,Age\nM,67\n", AGE_GENDER)


def test_missing_header_row():
    with pytest.raises(MalformedCsvError):
        load_csv("", None)


def test_infer_datetime_precedence():
    header, rows = ["a"], [["2020/03/15 14:22:01"], ["2020/03/16 01:00:00"]]
    assert infer_schema(header, rows).col("a").kind is ValueKind.DATETIME


def test_infer_date():
    assert (
        infer_schema(["a"], [["2020/03/15"], ["2020-04-01"]]).col("a").kind
        is ValueKind.DATE
    )


def test_infer_mixed_falls_back_to_categorical():
    assert (
        infer_schema(["a"], [["12"], ["F"]]).col("a").kind is ValueKind.CATEGORICAL
    )


def test_infer_numeric():
    assert infer_schema(["a"], [["12"], ["3.5"]]).col("a").kind is ValueKind.NUMERIC


def test_infer_needs_rows():
    with pytest.raises(MalformedCsvError):
        infer_schema(["a"], [])


def test_infer_class_defaults_to_insensitive():
    schema = infer_schema(["a"], [["1"]])
    assert schema.col("a").klass is AttributeClass.INSENSITIVE


def test_quoted_fields_round_trip():
    ds = load_csv('Age,Gender\n67,"M, maybe"\n', AGE_GENDER)
    assert ds.cell(0, "Gender") == "M, maybe"
    assert load_csv(write_csv(ds), AGE_GENDER) == ds


@given(qi_datasets(max_rows=15))
def test_write_then_load_is_identity(ds):
    text = write_csv(ds)
    assert load_csv(text, ds.schema) == ds


def test_missing_renders_as_unknown():
    ds = load_csv("Age,Gender\nUnknown,M\n", AGE_GENDER)
    assert "Unknown,M" in write_csv(ds)


def test_schema_sidecar_round_trip():
    text = dump_schema(AGE_GENDER)
    assert load_schema(text) == AGE_GENDER
    assert '"kind": "Numeric"' in text
