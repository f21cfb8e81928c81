"""Disclosure-risk metrics.

Singling-out risk is measured by partitioning records into equivalence
classes over the attacker's assumed quasi-identifiers: a record alone in its
class (k = 1) can be singled out, and the risk is the percentage of such
records. Once a column has been perturbed (noise), equivalence classes stop
meaning anything, so risk is measured instead by distance-based record
linkage between the attacker's view and the protected dataset.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterable

from sdclab._kernels import nearest_records
from sdclab.errors import (
    EmptyDatasetError,
    EmptySubsetError,
    KindError,
    ScenarioError,
)
from sdclab.schema import AttributeClass
from sdclab.table import Dataset, Predicate, filter_subset
from sdclab.values import (
    ORDERED_KINDS,
    ValueKind,
    is_missing,
    ordinal_of,
    render_value,
)


class Metric(str, Enum):
    K_ANONYMITY = "KAnonymity"
    RECORD_LINKAGE = "RecordLinkage"


class MatchKind(str, Enum):
    CORRECT_UNIQUE = "CorrectUnique"
    FALSE_UNIQUE = "FalseUnique"
    AMBIGUOUS = "Ambiguous"


class _MissingSentinel:
    """Single stand-in for any missing cell inside a QI tuple."""

    __slots__ = ()

    def __repr__(self):
        return "<missing>"


MISSING = _MissingSentinel()


@dataclass(frozen=True)
class Scenario:
    """Attacker background knowledge: an ordered set of QI names."""

    qis: tuple[str, ...]

    def __post_init__(self):
        if not self.qis:
            raise ScenarioError("scenario needs at least one quasi-identifier")
        deduped = tuple(dict.fromkeys(self.qis))
        object.__setattr__(self, "qis", deduped)

    @staticmethod
    def of(*names: str) -> "Scenario":
        return Scenario(tuple(names))

    def validate(self, ds: Dataset) -> None:
        for name in self.qis:
            col = ds.schema.col(name)  # raises UnknownColumnError
            if col.klass is not AttributeClass.QUASI_IDENTIFIER:
                raise ScenarioError(
                    f"attribute {name!r} is classified {col.klass.value}, "
                    "scenarios may only use QuasiIdentifier attributes"
                )

    def label(self) -> str:
        return ", ".join(self.qis)


@dataclass(frozen=True)
class EquivalenceClassPartition:
    classes: dict[tuple, tuple[int, ...]]
    k_of_row: tuple[int, ...]

    def sorted_items(self) -> list[tuple[tuple, tuple[int, ...]]]:
        """Classes in canonical (rendered-key) order for reporting."""
        return sorted(self.classes.items(), key=lambda kv: tuple(map(str, kv[0])))


@dataclass(frozen=True)
class RiskResult:
    scenario: Scenario
    metric: Metric
    risk_percent: float
    unique_count: int
    k_histogram: dict[int, int]
    min_k: int
    n: int

    def to_obj(self) -> dict[str, Any]:
        return {
            "scenario": list(self.scenario.qis),
            "metric": self.metric.value,
            "risk_percent": self.risk_percent,
            "unique_count": self.unique_count,
            "k_histogram": {str(k): v for k, v in sorted(self.k_histogram.items())},
            "min_k": self.min_k,
            "records": self.n,
        }


@dataclass(frozen=True)
class LinkageResult:
    scenario: Scenario
    total_match_percent: float
    correct_match_percent: float
    false_match_percent: float
    ambiguous_percent: float
    assignments: tuple[MatchKind, ...]
    n: int
    metric: Metric = Metric.RECORD_LINKAGE

    @property
    def risk_percent(self) -> float:
        """Headline risk: the rate of true re-identifications."""
        return self.correct_match_percent

    @property
    def margin_of_error_percent(self) -> float:
        """False matches as a share of all matches."""
        if self.total_match_percent == 0:
            return 0.0
        return 100.0 * self.false_match_percent / self.total_match_percent

    def to_obj(self) -> dict[str, Any]:
        return {
            "scenario": list(self.scenario.qis),
            "metric": self.metric.value,
            "risk_percent": self.risk_percent,
            "total_match_percent": self.total_match_percent,
            "correct_match_percent": self.correct_match_percent,
            "false_match_percent": self.false_match_percent,
            "ambiguous_percent": self.ambiguous_percent,
            "margin_of_error_percent": self.margin_of_error_percent,
            "records": self.n,
        }


@dataclass(frozen=True)
class LDiversityResult:
    scenario: Scenario
    sensitive: str
    per_class: tuple[tuple[str, int, int], ...]  # (rendered key, k, distinct l)
    min_l: int
    min_k_counted: int

    def to_obj(self) -> dict[str, Any]:
        return {
            "scenario": list(self.scenario.qis),
            "sensitive": self.sensitive,
            "min_l": self.min_l,
            "classes": [
                {"key": key, "k": k, "l": l} for key, k, l in self.per_class
            ],
        }


# ---------------------------------------------------------------------------
# k-anonymity
# ---------------------------------------------------------------------------

def partition(ds: Dataset, scenario: Scenario) -> EquivalenceClassPartition:
    """Group rows by their QI value tuple; missing cells take part as one
    shared sentinel value."""
    scenario.validate(ds)
    if ds.n == 0:
        raise EmptyDatasetError("cannot partition an empty dataset")
    cols = [ds.column(name) for name in scenario.qis]
    groups: dict[tuple, list[int]] = {}
    for i in range(ds.n):
        key = tuple(MISSING if is_missing(c[i]) else c[i] for c in cols)
        groups.setdefault(key, []).append(i)
    classes = {k: tuple(v) for k, v in groups.items()}
    k_of_row = [0] * ds.n
    for members in classes.values():
        size = len(members)
        for i in members:
            k_of_row[i] = size
    return EquivalenceClassPartition(classes=classes, k_of_row=tuple(k_of_row))


def k_anonymity_risk(ds: Dataset, scenario: Scenario) -> RiskResult:
    """Singling-out risk: percentage of records unique on the scenario QIs."""
    part = partition(ds, scenario)
    histogram: dict[int, int] = {}
    unique = 0
    for members in part.classes.values():
        size = len(members)
        histogram[size] = histogram.get(size, 0) + 1
        if size == 1:
            unique += 1
    return RiskResult(
        scenario=scenario,
        metric=Metric.K_ANONYMITY,
        risk_percent=100.0 * unique / ds.n,
        unique_count=unique,
        k_histogram=dict(sorted(histogram.items())),
        min_k=min(histogram),
        n=ds.n,
    )


def subset_risk(ds: Dataset, predicate: Predicate, scenario: Scenario) -> RiskResult:
    """k-anonymity risk measured within the selected subset only."""
    sub = filter_subset(ds, predicate)
    if sub.n == 0:
        raise EmptySubsetError(
            f"predicate {predicate.to_string()!r} selects no rows"
        )
    return k_anonymity_risk(sub, scenario)


def l_diversity(ds: Dataset, scenario: Scenario, sensitive: str) -> LDiversityResult:
    """Distinct non-missing sensitive values per equivalence class.

    min_l ranges over classes holding at least one non-missing sensitive
    value (min_k_counted is the smallest such class, for the l ≤ k bound).
    """
    col = ds.schema.col(sensitive)
    if col.klass is not AttributeClass.SENSITIVE:
        raise ScenarioError(
            f"attribute {sensitive!r} is classified {col.klass.value}, "
            "expected Sensitive"
        )
    values = ds.column(sensitive)
    if all(is_missing(v) for v in values):
        raise EmptyDatasetError(f"sensitive column {sensitive!r} is entirely missing")
    part = partition(ds, scenario)
    rows_out = []
    min_l: int | None = None
    min_k_counted: int | None = None
    for key, members in part.sorted_items():
        distinct = {values[i] for i in members if not is_missing(values[i])}
        if not distinct:
            continue
        l = len(distinct)
        rows_out.append((render_class_key(key, ds, scenario), len(members), l))
        if min_l is None or l < min_l:
            min_l = l
        if min_k_counted is None or len(members) < min_k_counted:
            min_k_counted = len(members)
    assert min_l is not None and min_k_counted is not None
    return LDiversityResult(
        scenario=scenario,
        sensitive=sensitive,
        per_class=tuple(rows_out),
        min_l=min_l,
        min_k_counted=min_k_counted,
    )


# ---------------------------------------------------------------------------
# Record linkage
# ---------------------------------------------------------------------------

class DistanceRule(str, Enum):
    EXACT = "ExactMatch"
    NORM_ABS = "NormalizedAbsolute"


@dataclass(frozen=True)
class DistanceSpec:
    """Per-column distance rules; unlisted columns get the kind default
    (exact match for categories/identifiers, normalized absolute difference
    for ordered kinds). Aggregation is the arithmetic mean and any pair with
    a missing side scores 1."""

    rules: dict[str, DistanceRule] = field(default_factory=dict)

    def rule_for(self, name: str, kind: ValueKind) -> DistanceRule:
        rule = self.rules.get(name)
        if rule is None:
            rule = (
                DistanceRule.NORM_ABS if kind in ORDERED_KINDS else DistanceRule.EXACT
            )
        if rule is DistanceRule.NORM_ABS and kind not in ORDERED_KINDS:
            raise KindError(
                f"NormalizedAbsolute needs an ordered column, {name!r} is {kind.value}"
            )
        return rule

    def to_obj(self) -> dict[str, str]:
        return {k: v.value for k, v in sorted(self.rules.items())}

    @staticmethod
    def from_obj(obj: dict[str, str] | None) -> "DistanceSpec":
        if not obj:
            return DistanceSpec()
        return DistanceSpec({k: DistanceRule(v) for k, v in obj.items()})


def _encode_for_linkage(
    attacker_view: Dataset,
    protected: Dataset,
    scenario: Scenario,
    spec: DistanceSpec,
) -> tuple[list[list[float]], list[list[float]], list[int], list[float]]:
    """Project the scenario columns of both datasets onto float rows:
    NaN marks missing, exact-match columns get shared category codes,
    ordered columns use their natural axis with the range computed over
    the union of both sides."""
    nan = float("nan")
    a_cols: list[list[float]] = []
    b_cols: list[list[float]] = []
    modes: list[int] = []
    ranges: list[float] = []
    for name in scenario.qis:
        kind_a = attacker_view.schema.col(name).kind
        kind_b = protected.schema.col(name).kind
        rule = spec.rule_for(name, kind_b)
        col_a = attacker_view.column(name)
        col_b = protected.column(name)
        if rule is DistanceRule.EXACT:
            codes: dict[Any, int] = {}

            def code_of(v, codes=codes):
                if v not in codes:
                    codes[v] = len(codes)
                return float(codes[v])

            a_vals = [nan if is_missing(v) else code_of(v) for v in col_a]
            b_vals = [nan if is_missing(v) else code_of(v) for v in col_b]
            modes.append(0)
            ranges.append(0.0)
        else:
            a_vals = [nan if is_missing(v) else ordinal_of(v, kind_a) for v in col_a]
            b_vals = [nan if is_missing(v) else ordinal_of(v, kind_b) for v in col_b]
            present = [v for v in a_vals + b_vals if v == v]
            span = (max(present) - min(present)) if present else 0.0
            modes.append(1)
            ranges.append(span)
        a_cols.append(a_vals)
        b_cols.append(b_vals)
    a_rows = [list(r) for r in zip(*a_cols)] if a_cols else []
    b_rows = [list(r) for r in zip(*b_cols)] if b_cols else []
    return a_rows, b_rows, modes, ranges


def record_linkage(
    attacker_view: Dataset,
    protected: Dataset,
    scenario: Scenario,
    spec: DistanceSpec | None = None,
) -> LinkageResult:
    """Distance-based record linkage.

    For every protected record, find the attacker-view record minimizing the
    mean per-column distance; a strict unique minimizer is a match (correct
    when it is the true source row, which is the same index by contract),
    ties are ambiguous. All rates are percentages over the protected records.
    """
    scenario.validate(protected)
    for name in scenario.qis:
        attacker_view.schema.index_of(name)
    if attacker_view.n != protected.n:
        raise ScenarioError(
            f"row counts differ: attacker view {attacker_view.n}, "
            f"protected {protected.n}"
        )
    if protected.n == 0:
        raise EmptyDatasetError("cannot link empty datasets")
    spec = spec or DistanceSpec()
    a_rows, b_rows, modes, ranges = _encode_for_linkage(
        attacker_view, protected, scenario, spec
    )
    best, tie = nearest_records(a_rows, b_rows, modes, ranges)
    assignments = []
    correct = false = ambiguous = 0
    for j in range(protected.n):
        if tie[j]:
            assignments.append(MatchKind.AMBIGUOUS)
            ambiguous += 1
        elif best[j] == j:
            assignments.append(MatchKind.CORRECT_UNIQUE)
            correct += 1
        else:
            assignments.append(MatchKind.FALSE_UNIQUE)
            false += 1
    n = protected.n
    return LinkageResult(
        scenario=scenario,
        total_match_percent=100.0 * (correct + false) / n,
        correct_match_percent=100.0 * correct / n,
        false_match_percent=100.0 * false / n,
        ambiguous_percent=100.0 * ambiguous / n,
        assignments=tuple(assignments),
        n=n,
    )


def assess_matrix(
    attacker_view: Dataset,
    protected: Dataset,
    scenarios: Iterable[Scenario],
    spec: DistanceSpec | None = None,
    perturbed_columns: frozenset[str] | set[str] = frozenset(),
) -> list[RiskResult | LinkageResult]:
    """Assess every scenario, auto-selecting the metric: record linkage when
    the scenario touches a perturbed column (equivalence classes are
    meaningless after noise), k-anonymity otherwise."""
    results: list[RiskResult | LinkageResult] = []
    for scenario in scenarios:
        if set(scenario.qis) & set(perturbed_columns):
            results.append(record_linkage(attacker_view, protected, scenario, spec))
        else:
            results.append(k_anonymity_risk(protected, scenario))
    return results


def render_class_key(key: tuple, ds: Dataset, scenario: Scenario) -> str:
    """Human-readable form of a partition key, for reports."""
    parts = []
    for name, v in zip(scenario.qis, key):
        kind = ds.schema.col(name).kind
        parts.append("<missing>" if isinstance(v, _MissingSentinel) else render_value(v, kind))
    return ", ".join(parts)
