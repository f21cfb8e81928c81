"""Exception hierarchy shared by every module."""


class SdcError(Exception):
    """Base class for all workbench errors."""


class MalformedCsvError(SdcError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


class CellParseError(SdcError):
    def __init__(self, column: str, line: int, token: str, kind: str):
        self.column = column
        self.line = line
        self.token = token
        super().__init__(
            f"column {column!r}, line {line}: cannot parse {token!r} as {kind}"
        )


class UnknownColumnError(SdcError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unknown column {name!r}")


class KindError(SdcError):
    """A column has the wrong value kind for the requested operation."""


class PredicateError(SdcError):
    """Malformed or type-incompatible filter predicate."""


class ScenarioError(SdcError):
    """Attacker scenario invalid against the target schema."""


class EmptyDatasetError(SdcError):
    """Metric requested on a dataset with no rows."""


class EmptySubsetError(SdcError):
    """Subset predicate selected no rows; reported as its own condition."""


class StepError(SdcError):
    """Transform step could not be applied (bad variant or parameters)."""


class ConfigError(SdcError):
    """Invalid pipeline, threshold, or generator configuration."""
