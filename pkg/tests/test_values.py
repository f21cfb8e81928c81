import pytest

from sdclab.values import (
    DayTime,
    Suppressed,
    ValueKind,
    date_to_days,
    is_missing,
    parse_date_token,
    parse_datetime_token,
    parse_numeric_token,
    parse_token,
    render_date,
    render_datetime,
    render_value,
)


def test_date_parsing_accepts_both_separators():
    assert parse_date_token("2020/03/15") == parse_date_token("2020-03-15")


def test_date_round_trip():
    days = parse_date_token("2020/03/15")
    assert render_date(days) == "2020/03/15"


def test_datetime_parse_and_render():
    v = parse_datetime_token("2020/03/15 14:22:01")
    assert v == DayTime(date_to_days(2020, 3, 15), 14 * 3600 + 22 * 60 + 1)
    assert render_datetime(v) == "2020/03/15 14:22:01"


def test_datetime_rejects_bad_time():
    with pytest.raises(ValueError):
        parse_datetime_token("2020/03/15 25:00:00")


def test_date_rejects_bad_calendar_day():
    with pytest.raises(ValueError):
        parse_date_token("2020/02/30")


def test_numeric_parsing():
    assert parse_numeric_token("67") == 67
    assert isinstance(parse_numeric_token("67"), int)
    assert parse_numeric_token("3.5") == 3.5
    assert parse_numeric_token("-1e2") == -100.0
    with pytest.raises(ValueError):
        parse_numeric_token("abc")
    with pytest.raises(ValueError):
        parse_numeric_token("1_000")  # underscores are not CSV numerics


def test_parse_token_categorical_keeps_raw():
    assert parse_token("F", ValueKind.CATEGORICAL) == "F"


def test_daytime_ordering_is_chronological():
    assert DayTime(10, 30) < DayTime(10, 40) < DayTime(11, 0)


def test_suppressed_is_missing_and_interned():
    s = Suppressed("*")
    assert is_missing(s) and is_missing(None)
    assert Suppressed("*") is s
    assert Suppressed("NA") != s


def test_render_value_uses_suppression_symbol():
    assert render_value(Suppressed("NA"), ValueKind.NUMERIC) == "NA"
    assert render_value(None, ValueKind.NUMERIC) == "Unknown"
    assert render_value(None, ValueKind.NUMERIC, missing_token="") == ""


def test_render_number_trims_float_integers():
    assert render_value(65, ValueKind.NUMERIC) == "65"
    assert render_value(65.0, ValueKind.NUMERIC) == "65"
    assert render_value(6.25, ValueKind.NUMERIC) == "6.25"
