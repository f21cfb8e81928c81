"""Cell values: kinds, parsing, rendering, and date arithmetic.

Dates are stored as integer days since 1970-01-01 so that truncation,
period generalisation, and integer noise are plain integer arithmetic.
Timestamps are (day, second-of-day) pairs.
"""

from __future__ import annotations

import re
from datetime import date
from enum import Enum
from typing import Any, NamedTuple

from sdclab.errors import KindError

_EPOCH = date(1970, 1, 1).toordinal()

_INT_RE = re.compile(r"^[+-]?\d+$")
_FLOAT_RE = re.compile(r"^[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?$")
_DATE_RE = re.compile(r"^(\d{4})([/-])(\d{1,2})\2(\d{1,2})$")
_DATETIME_RE = re.compile(
    r"^(\d{4})([/-])(\d{1,2})\2(\d{1,2}) (\d{1,2}):(\d{2}):(\d{2})$"
)


class ValueKind(str, Enum):
    NUMERIC = "Numeric"
    CATEGORICAL = "Categorical"
    DATE = "Date"
    DATETIME = "DateTime"
    IDENTIFIER = "Identifier"


#: Kinds that support <, <=, >, >= comparisons and numeric distance.
ORDERED_KINDS = frozenset({ValueKind.NUMERIC, ValueKind.DATE, ValueKind.DATETIME})


class DayTime(NamedTuple):
    """A timestamp: days since epoch plus second of the day."""

    day: int
    sec: int


class Suppressed:
    """A missing cell that remembers the symbol it was suppressed with.

    Compares equal to other missing representations only through
    :func:`is_missing`; instances are interned per symbol.
    """

    __slots__ = ("symbol",)
    _cache: dict[str, "Suppressed"] = {}

    def __new__(cls, symbol: str):
        inst = cls._cache.get(symbol)
        if inst is None:
            inst = super().__new__(cls)
            object.__setattr__(inst, "symbol", symbol)
            cls._cache[symbol] = inst
        return inst

    def __setattr__(self, name, value):
        raise AttributeError("Suppressed cells are immutable")

    def __repr__(self):
        return f"Suppressed({self.symbol!r})"

    def __eq__(self, other):
        return isinstance(other, Suppressed) and other.symbol == self.symbol

    def __hash__(self):
        return hash(("Suppressed", self.symbol))


def is_missing(value: Any) -> bool:
    return value is None or isinstance(value, Suppressed)


def date_to_days(year: int, month: int, day: int) -> int:
    return date(year, month, day).toordinal() - _EPOCH


def days_to_date(days: int) -> date:
    return date.fromordinal(days + _EPOCH)


def parse_date_token(token: str) -> int:
    m = _DATE_RE.match(token)
    if not m:
        raise ValueError(f"not a date: {token!r}")
    return date_to_days(int(m.group(1)), int(m.group(3)), int(m.group(4)))


def parse_datetime_token(token: str) -> DayTime:
    m = _DATETIME_RE.match(token)
    if not m:
        raise ValueError(f"not a datetime: {token!r}")
    day = date_to_days(int(m.group(1)), int(m.group(3)), int(m.group(4)))
    h, mi, s = int(m.group(5)), int(m.group(6)), int(m.group(7))
    if h > 23 or mi > 59 or s > 59:
        raise ValueError(f"not a datetime: {token!r}")
    return DayTime(day, h * 3600 + mi * 60 + s)


def parse_numeric_token(token: str) -> int | float:
    if _INT_RE.match(token):
        return int(token)
    if _FLOAT_RE.match(token):
        return float(token)
    raise ValueError(f"not numeric: {token!r}")


def parse_token(token: str, kind: ValueKind) -> Any:
    """Parse a non-missing CSV token under the given kind. Raises ValueError."""
    if kind is ValueKind.NUMERIC:
        return parse_numeric_token(token)
    if kind is ValueKind.DATE:
        return parse_date_token(token)
    if kind is ValueKind.DATETIME:
        return parse_datetime_token(token)
    # Categorical and Identifier keep the raw token.
    return token


def render_date(days: int) -> str:
    d = days_to_date(days)
    return f"{d.year:04d}/{d.month:02d}/{d.day:02d}"


def render_datetime(value: DayTime) -> str:
    h, rem = divmod(value.sec, 3600)
    mi, s = divmod(rem, 60)
    return f"{render_date(value.day)} {h:02d}:{mi:02d}:{s:02d}"


def render_number(value: int | float) -> str:
    if isinstance(value, float):
        if value.is_integer():
            return str(int(value))
        return repr(value)
    return str(value)


def render_value(value: Any, kind: ValueKind, missing_token: str = "Unknown") -> str:
    """Render a cell for CSV export; missing cells use their suppression
    symbol when they have one, else the canonical missing token."""
    if value is None:
        return missing_token
    if isinstance(value, Suppressed):
        return value.symbol
    if kind is ValueKind.NUMERIC:
        return render_number(value)
    if kind is ValueKind.DATE:
        return render_date(value)
    if kind is ValueKind.DATETIME:
        return render_datetime(value)
    return str(value)


def ordinal_of(value: Any, kind: ValueKind) -> float:
    """Project an ordered-kind value onto a single numeric axis
    (days for dates, seconds for timestamps)."""
    if kind is ValueKind.NUMERIC:
        return float(value)
    if kind is ValueKind.DATE:
        return float(value)
    if kind is ValueKind.DATETIME:
        return float(value.day * 86400 + value.sec)
    raise KindError(f"{kind.value} values have no numeric order")


def shift_days(value: Any, kind: ValueKind, delta: int) -> Any:
    """Add whole days to a Date value or units to a Numeric value."""
    if kind is ValueKind.NUMERIC:
        return value + delta
    if kind is ValueKind.DATE:
        return value + delta
    raise KindError(f"cannot add integer noise to {kind.value} column")
