"""Iterate-and-reassess de-identification engine.

Applies the configured steps in order, re-assesses every attacker scenario
after each one (choosing k-anonymity or record linkage automatically), keeps
distributional utility diagnostics per step, checks acceptance thresholds on
the final dataset, and maps the outcome through a configurable risk-benefit
matrix into a release decision.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from sdclab.errors import (
    ConfigError,
    EmptySubsetError,
    KindError,
    PredicateError,
    ScenarioError,
    SdcError,
    UnknownColumnError,
)
import sdclab.transforms  # noqa: F401  (populate the step registry)
from sdclab.risk import (
    DistanceSpec,
    Metric,
    Scenario,
    assess_matrix,
    subset_risk,
)
from sdclab.stats import column_histogram
from sdclab.steps import TransformStep, apply_step, perturbed_columns, variant_info
from sdclab.table import Dataset, Predicate


class Level(str, Enum):
    L = "L"
    M = "M"
    H = "H"
    VH = "VH"


_LEVEL_ORDER = {Level.L: 0, Level.M: 1, Level.H: 2, Level.VH: 3}


class Decision(str, Enum):
    RELEASE = "Release"
    RELEASE_WITH_CONTROLS = "ReleaseWithControls"
    DO_NOT_RELEASE = "DoNotRelease"


_PERMISSIVENESS = {
    Decision.DO_NOT_RELEASE: 0,
    Decision.RELEASE_WITH_CONTROLS: 1,
    Decision.RELEASE: 2,
}


@dataclass(frozen=True)
class LevelCutoff:
    level: Level
    lo: float
    hi: float


DEFAULT_CUTOFFS = (
    LevelCutoff(Level.L, 0.0, 5.0),
    LevelCutoff(Level.M, 5.0, 20.0),
    LevelCutoff(Level.H, 20.0, 50.0),
    LevelCutoff(Level.VH, 50.0, 100.0),
)


def _validate_cutoffs(cutoffs: tuple[LevelCutoff, ...]) -> tuple[LevelCutoff, ...]:
    ordered = tuple(sorted(cutoffs, key=lambda c: c.lo))
    if not ordered:
        raise ConfigError("risk cutoffs must not be empty")
    if ordered[0].lo != 0.0 or ordered[-1].hi != 100.0:
        raise ConfigError("risk cutoffs must span [0, 100]")
    for prev, nxt in zip(ordered, ordered[1:]):
        if prev.hi < nxt.lo:
            raise ConfigError(
                f"gap in risk cutoffs between {prev.hi} and {nxt.lo}"
            )
        if prev.hi > nxt.lo:
            raise ConfigError(
                f"overlapping risk cutoffs at {nxt.lo} (previous ends {prev.hi})"
            )
        if prev.hi <= prev.lo:
            raise ConfigError(f"empty cutoff range [{prev.lo}, {prev.hi})")
    return ordered


def risk_to_level(
    risk_percent: float, cutoffs: tuple[LevelCutoff, ...] = DEFAULT_CUTOFFS
) -> Level:
    """Map a risk percentage onto L/M/H/VH; ranges are left-closed and the
    topmost range includes 100."""
    ordered = _validate_cutoffs(cutoffs)
    if not 0.0 <= risk_percent <= 100.0:
        raise ConfigError(f"risk percent out of range: {risk_percent}")
    for c in ordered:
        if c.lo <= risk_percent < c.hi:
            return c.level
    return ordered[-1].level  # exactly 100


@dataclass(frozen=True)
class RiskBenefitMatrix:
    """Total lookup over the 16 (risk level × benefit level) cells, monotone:
    permissiveness never grows with risk and never shrinks with benefit."""

    cells: dict[tuple[Level, Level], Decision]

    def __post_init__(self):
        for r in Level:
            for b in Level:
                if (r, b) not in self.cells:
                    raise ConfigError(f"matrix misses cell ({r.value}, {b.value})")
        for b in Level:
            seq = [
                _PERMISSIVENESS[self.cells[(r, b)]]
                for r in sorted(Level, key=_LEVEL_ORDER.get)
            ]
            if any(x < y for x, y in zip(seq, seq[1:])):
                raise ConfigError(
                    f"matrix not monotone in risk for benefit {b.value}"
                )
        for r in Level:
            seq = [
                _PERMISSIVENESS[self.cells[(r, b)]]
                for b in sorted(Level, key=_LEVEL_ORDER.get)
            ]
            if any(x > y for x, y in zip(seq, seq[1:])):
                raise ConfigError(
                    f"matrix not monotone in benefit for risk {r.value}"
                )

    def decision(self, risk: Level, benefit: Level) -> Decision:
        return self.cells[(risk, benefit)]

    def to_obj(self) -> dict[str, dict[str, str]]:
        return {
            r.value: {b.value: self.cells[(r, b)].value for b in Level} for r in Level
        }

    @staticmethod
    def from_obj(obj: dict[str, dict[str, str]]) -> "RiskBenefitMatrix":
        cells = {}
        for r_name, row in obj.items():
            for b_name, d in row.items():
                cells[(Level(r_name), Level(b_name))] = Decision(d)
        return RiskBenefitMatrix(cells)


def _default_matrix() -> RiskBenefitMatrix:
    # Moderate-risk cells release with controls; the rest follows from
    # monotonicity around the pinned corners.
    rows = {
        Level.L: [Decision.RELEASE] * 4,
        Level.M: [Decision.RELEASE_WITH_CONTROLS] * 4,
        Level.H: [
            Decision.DO_NOT_RELEASE,
            Decision.RELEASE_WITH_CONTROLS,
            Decision.RELEASE_WITH_CONTROLS,
            Decision.RELEASE_WITH_CONTROLS,
        ],
        Level.VH: [
            Decision.DO_NOT_RELEASE,
            Decision.DO_NOT_RELEASE,
            Decision.DO_NOT_RELEASE,
            Decision.RELEASE_WITH_CONTROLS,
        ],
    }
    cells = {}
    benefits = sorted(Level, key=_LEVEL_ORDER.get)
    for r, decisions in rows.items():
        for b, d in zip(benefits, decisions):
            cells[(r, b)] = d
    return RiskBenefitMatrix(cells)


DEFAULT_MATRIX = _default_matrix()


def decide(matrix: RiskBenefitMatrix, risk: Level, benefit: Level) -> Decision:
    return matrix.decision(risk, benefit)


# ---------------------------------------------------------------------------
# Pipeline spec
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Thresholds:
    max_risk_percent: float
    min_class_size: int

    def __post_init__(self):
        if self.min_class_size < 1:
            raise ConfigError("min_class_size must be >= 1")
        if not 0.0 <= self.max_risk_percent <= 100.0:
            raise ConfigError("max_risk_percent must be in [0, 100]")


@dataclass(frozen=True)
class SubsetSpec:
    name: str
    where: str
    scenarios: tuple[Scenario, ...]


@dataclass(frozen=True)
class PipelineSpec:
    steps: tuple[TransformStep, ...]
    scenarios: tuple[Scenario, ...]
    thresholds: Thresholds
    subsets: tuple[SubsetSpec, ...] = ()
    distance_spec: DistanceSpec = field(default_factory=DistanceSpec)
    benefit_level: Level = Level.M
    seed: int = 0
    risk_cutoffs: tuple[LevelCutoff, ...] = DEFAULT_CUTOFFS
    decision_matrix: RiskBenefitMatrix = DEFAULT_MATRIX

    def __post_init__(self):
        for step in self.steps:
            variant_info(step.variant)  # raises on unknown variants
        _validate_cutoffs(self.risk_cutoffs)
        for sub in self.subsets:
            Predicate.parse(sub.where)

    def to_obj(self) -> dict[str, Any]:
        return {
            "seed": self.seed,
            "benefit_level": self.benefit_level.value,
            "thresholds": {
                "max_risk_percent": self.thresholds.max_risk_percent,
                "min_class_size": self.thresholds.min_class_size,
            },
            "scenarios": [list(s.qis) for s in self.scenarios],
            "subsets": [
                {
                    "name": sub.name,
                    "where": sub.where,
                    "scenarios": [list(s.qis) for s in sub.scenarios],
                }
                for sub in self.subsets
            ],
            "distance_rules": self.distance_spec.to_obj(),
            "risk_cutoffs": [
                {"level": c.level.value, "lo": c.lo, "hi": c.hi}
                for c in self.risk_cutoffs
            ],
            "decision_matrix": self.decision_matrix.to_obj(),
            "steps": [s.to_obj() for s in self.steps],
        }

    @staticmethod
    def from_obj(obj: dict[str, Any]) -> "PipelineSpec":
        try:
            thresholds = Thresholds(
                max_risk_percent=float(obj["thresholds"]["max_risk_percent"]),
                min_class_size=int(obj["thresholds"]["min_class_size"]),
            )
            scenarios = tuple(Scenario(tuple(s)) for s in obj["scenarios"])
            steps = tuple(TransformStep.from_obj(s) for s in obj.get("steps", []))
            subsets = tuple(
                SubsetSpec(
                    name=s["name"],
                    where=s["where"],
                    scenarios=tuple(Scenario(tuple(sc)) for sc in s.get("scenarios", [])),
                )
                for s in obj.get("subsets", [])
            )
            cutoffs = tuple(
                LevelCutoff(Level(c["level"]), float(c["lo"]), float(c["hi"]))
                for c in obj.get("risk_cutoffs", [])
            ) or DEFAULT_CUTOFFS
            matrix = (
                RiskBenefitMatrix.from_obj(obj["decision_matrix"])
                if obj.get("decision_matrix")
                else DEFAULT_MATRIX
            )
            return PipelineSpec(
                steps=steps,
                scenarios=scenarios,
                thresholds=thresholds,
                subsets=subsets,
                distance_spec=DistanceSpec.from_obj(obj.get("distance_rules")),
                benefit_level=Level(obj.get("benefit_level", "M")),
                seed=int(obj.get("seed", 0)),
                risk_cutoffs=cutoffs,
                decision_matrix=matrix,
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad pipeline spec: {exc}") from exc

    @staticmethod
    def from_json(text: str) -> "PipelineSpec":
        return PipelineSpec.from_obj(json.loads(text))

    def to_json(self) -> str:
        return json.dumps(self.to_obj(), indent=2) + "\n"


# ---------------------------------------------------------------------------
# Run engine
# ---------------------------------------------------------------------------

@dataclass
class RunReport:
    obj: dict[str, Any]

    def to_obj(self) -> dict[str, Any]:
        return self.obj

    def to_json(self) -> str:
        return json.dumps(self.obj, indent=2, ensure_ascii=False) + "\n"

    def to_markdown(self) -> str:
        return _render_markdown(self.obj)


@dataclass
class PipelineRun:
    dataset: Dataset
    report: RunReport
    passed: bool


class PipelineAborted(SdcError):
    def __init__(self, cause: Exception, report: RunReport, dataset: Dataset):
        self.cause = cause
        self.report = report
        self.dataset = dataset
        super().__init__(f"pipeline aborted: {cause}")


def _scenario_entry(
    attacker: Dataset,
    protected: Dataset,
    scenario: Scenario,
    spec: DistanceSpec,
    perturbed: frozenset[str],
) -> dict[str, Any]:
    try:
        (result,) = assess_matrix(attacker, protected, [scenario], spec, perturbed)
    except (UnknownColumnError, ScenarioError) as exc:
        return {
            "scenario": list(scenario.qis),
            "status": "not-applicable",
            "reason": str(exc),
        }
    entry = {"scenario": list(scenario.qis), "status": "ok"}
    entry.update(result.to_obj())
    return entry


def scenario_matrix(
    attacker: Dataset,
    protected: Dataset,
    scenarios: tuple[Scenario, ...],
    spec: DistanceSpec,
    perturbed: frozenset[str],
) -> list[dict[str, Any]]:
    """Per-scenario risk entries with metric auto-selection; scenarios whose
    columns are absent or not QI-classified report status "not-applicable"."""
    return [
        _scenario_entry(attacker, protected, sc, spec, perturbed) for sc in scenarios
    ]


def _subset_entries(
    ds: Dataset, subsets: tuple[SubsetSpec, ...]
) -> list[dict[str, Any]]:
    out = []
    for sub in subsets:
        for scenario in sub.scenarios:
            entry: dict[str, Any] = {
                "subset": sub.name,
                "where": sub.where,
                "scenario": list(scenario.qis),
            }
            try:
                result = subset_risk(ds, Predicate.parse(sub.where), scenario)
                entry["status"] = "ok"
                entry.update(result.to_obj())
            except EmptySubsetError as exc:
                entry["status"] = "empty"
                entry["reason"] = str(exc)
            except (UnknownColumnError, ScenarioError, PredicateError, KindError) as exc:
                entry["status"] = "not-applicable"
                entry["reason"] = str(exc)
            out.append(entry)
    return out


def _utility_entries(
    before: Dataset, after: Dataset, step: TransformStep
) -> list[dict[str, Any]]:
    out = []
    for name in step.target_columns():
        if name in before.schema and name in after.schema:
            out.append(
                {
                    "column": name,
                    "before": column_histogram(before, name),
                    "after": column_histogram(after, name),
                }
            )
    return out


def resolve_step_seeds(spec: PipelineSpec) -> tuple[TransformStep, ...]:
    """Perturbative steps without a seed get one derived from the run seed."""
    out = []
    for i, step in enumerate(spec.steps):
        if step.perturbative and step.seed is None:
            out.append(
                TransformStep(step.variant, dict(step.params), spec.seed * 100003 + i)
            )
        else:
            out.append(step)
    return tuple(out)


def run(ds: Dataset, spec: PipelineSpec) -> PipelineRun:
    """Apply all steps in order, re-assessing after each one.

    The attacker view used for record linkage is the input dataset with every
    truthful step applied; only perturbed columns differ from the protected
    output. Identical (dataset, spec) pairs produce identical reports.
    """
    steps = resolve_step_seeds(spec)
    base_provenance_len = len(ds.provenance)
    current = ds
    attacker = ds
    perturbed: frozenset[str] = frozenset()

    def matrix_for(protected: Dataset) -> list[dict[str, Any]]:
        return [
            _scenario_entry(attacker, protected, sc, spec.distance_spec, perturbed)
            for sc in spec.scenarios
        ]

    report_obj: dict[str, Any] = {
        "records_in": ds.n,
        "direct_identifier_warnings": sorted(ds.schema.direct_identifiers()),
        "spec": spec.to_obj(),
    }
    baseline_matrix = matrix_for(ds)
    report_obj["baseline"] = {
        "records": ds.n,
        "risk_matrix": baseline_matrix,
        "subset_risks": _subset_entries(ds, spec.subsets),
    }
    report_obj["steps"] = []

    prev_matrix = baseline_matrix
    for i, step in enumerate(steps):
        before = current
        try:
            current = apply_step(current, step)
            if not step.perturbative:
                attacker = apply_step(attacker, step)
            perturbed = perturbed_columns(current.provenance[base_provenance_len:])
            matrix = matrix_for(current)
        except SdcError as exc:
            report_obj["error"] = {"step_index": i, "step": step.to_obj(), "message": str(exc)}
            raise PipelineAborted(exc, RunReport(report_obj), before) from exc
        entry = current.provenance[-1]
        report_obj["steps"].append(
            {
                "index": i,
                "step": entry.step.to_obj(),
                "affected": dict(entry.affected),
                "records": current.n,
                "risk_matrix_before": prev_matrix,
                "risk_matrix_after": matrix,
                "subset_risks": _subset_entries(current, spec.subsets),
                "utility": _utility_entries(before, current, step),
            }
        )
        prev_matrix = matrix

    final_matrix = prev_matrix
    final = _evaluate_final(final_matrix, spec, current)
    report_obj["final"] = final
    report_obj["five_safes"] = _five_safes(spec, final)
    passed = bool(final["pass"])
    return PipelineRun(dataset=current, report=RunReport(report_obj), passed=passed)


def _evaluate_final(
    final_matrix: list[dict[str, Any]], spec: PipelineSpec, ds: Dataset
) -> dict[str, Any]:
    per_scenario = []
    all_ok = True
    worst_risk = 0.0
    min_k: int | None = None
    for entry in final_matrix:
        if entry["status"] != "ok":
            all_ok = False
            per_scenario.append(
                {
                    "scenario": entry["scenario"],
                    "status": entry["status"],
                    "pass": False,
                    "reason": entry.get("reason", ""),
                }
            )
            continue
        risk = entry["risk_percent"]
        worst_risk = max(worst_risk, risk)
        ok = risk <= spec.thresholds.max_risk_percent
        if entry["metric"] == Metric.K_ANONYMITY.value:
            min_k = entry["min_k"] if min_k is None else min(min_k, entry["min_k"])
        per_scenario.append(
            {
                "scenario": entry["scenario"],
                "status": "ok",
                "metric": entry["metric"],
                "risk_percent": risk,
                "pass": ok,
            }
        )
        all_ok = all_ok and ok
    class_ok = min_k is None or min_k >= spec.thresholds.min_class_size
    passed = all_ok and class_ok
    risk_level = risk_to_level(worst_risk, spec.risk_cutoffs)
    decision = decide(spec.decision_matrix, risk_level, spec.benefit_level)
    warnings = sorted(ds.schema.direct_identifiers())
    return {
        "records": ds.n,
        "risk_matrix": final_matrix,
        "per_scenario": per_scenario,
        "min_k": min_k,
        "min_class_size_required": spec.thresholds.min_class_size,
        "max_risk_percent_allowed": spec.thresholds.max_risk_percent,
        "class_size_pass": class_ok,
        "pass": passed,
        "worst_risk_percent": worst_risk,
        "risk_level": risk_level.value,
        "benefit_level": spec.benefit_level.value,
        "decision": decision.value,
        "direct_identifier_warnings": warnings,
    }


def _five_safes(spec: PipelineSpec, final: dict[str, Any]) -> list[dict[str, str]]:
    return [
        {
            "stage": "Safe projects",
            "note": "Document purpose, legal basis, and recipients before any release.",
        },
        {
            "stage": "Safe people",
            "note": f"Attacker background knowledge modelled by "
            f"{len(spec.scenarios)} scenario(s).",
        },
        {
            "stage": "Safe settings",
            "note": "Match access controls and agreements to the release channel.",
        },
        {
            "stage": "Safe data",
            "note": f"Residual risk level {final['risk_level']}; smallest "
            f"equivalence class {final['min_k']}.",
        },
        {
            "stage": "Safe outputs",
            "note": f"Decision: {final['decision']}. Re-assess before secondary use.",
        },
    ]


# ---------------------------------------------------------------------------
# Markdown rendering
# ---------------------------------------------------------------------------

def _fmt_pct(v: float) -> str:
    return f"{v:.2f}"


def _matrix_summary_md(matrix: list[dict[str, Any]], lines: list[str]) -> None:
    lines.append("| scenario | metric | risk % | min k | status |")
    lines.append("| --- | --- | --- | --- | --- |")
    for e in matrix:
        name = ", ".join(e["scenario"])
        if e["status"] != "ok":
            lines.append(f"| {name} | - | - | - | {e['status']} |")
            continue
        min_k = e.get("min_k", "-")
        lines.append(
            f"| {name} | {e['metric']} | {_fmt_pct(e['risk_percent'])} | {min_k} | ok |"
        )
    lines.append("")


def _risk_detail_md(e: dict[str, Any], context: str, lines: list[str]) -> None:
    name = ", ".join(e["scenario"])
    lines.append(f"#### Risk: {name} ({context})")
    lines.append("")
    lines.append("| measure | value |")
    lines.append("| --- | --- |")
    lines.append(f"| metric | {e['metric']} |")
    lines.append(f"| risk % | {_fmt_pct(e['risk_percent'])} |")
    if e["metric"] == Metric.K_ANONYMITY.value:
        lines.append(f"| unique records | {e['unique_count']} |")
        lines.append(f"| min k | {e['min_k']} |")
        hist = ", ".join(f"{k}:{v}" for k, v in list(e["k_histogram"].items())[:10])
        more = len(e["k_histogram"]) - 10
        if more > 0:
            hist += f", … ({more} more sizes)"
        lines.append(f"| k histogram | {hist} |")
    else:
        lines.append(f"| total match % | {_fmt_pct(e['total_match_percent'])} |")
        lines.append(f"| correct match % | {_fmt_pct(e['correct_match_percent'])} |")
        lines.append(f"| false match % | {_fmt_pct(e['false_match_percent'])} |")
        lines.append(f"| ambiguous % | {_fmt_pct(e['ambiguous_percent'])} |")
        lines.append(
            f"| margin of error % | {_fmt_pct(e['margin_of_error_percent'])} |"
        )
    lines.append("")


def _subsets_md(entries: list[dict[str, Any]], lines: list[str]) -> None:
    if not entries:
        return
    lines.append("### Subset risks")
    lines.append("")
    lines.append("| subset | scenario | status | risk % | min k |")
    lines.append("| --- | --- | --- | --- | --- |")
    for e in entries:
        name = ", ".join(e["scenario"])
        if e["status"] == "ok":
            lines.append(
                f"| {e['subset']} | {name} | ok | {_fmt_pct(e['risk_percent'])} "
                f"| {e['min_k']} |"
            )
        else:
            lines.append(f"| {e['subset']} | {name} | {e['status']} | - | - |")
    lines.append("")


def _histogram_md(title: str, hist: dict[str, Any], lines: list[str]) -> None:
    lines.append(f"**{title}** (missing: {hist['missing']})")
    lines.append("")
    if hist["kind"] == "numeric":
        lines.append("| bin | count |")
        lines.append("| --- | --- |")
        for b in hist["bins"]:
            lines.append(f"| [{b['lo']}, {b['hi']}) | {b['count']} |")
    else:
        lines.append("| category | count |")
        lines.append("| --- | --- |")
        for c in hist["categories"]:
            lines.append(f"| {c['value']} | {c['count']} |")
    lines.append("")


def _render_markdown(obj: dict[str, Any]) -> str:
    lines: list[str] = []
    lines.append("# De-identification run report")
    lines.append("")
    final = obj.get("final")
    lines.append(f"Records in: {obj['records_in']}")
    if obj.get("direct_identifier_warnings"):
        names = ", ".join(obj["direct_identifier_warnings"])
        lines.append("")
        lines.append(
            f"**Warning:** direct identifier column(s) present: {names}. "
            "These must be removed before release."
        )
    lines.append("")

    lines.append("## Baseline")
    lines.append("")
    base = obj["baseline"]
    lines.append(f"Records: {base['records']}")
    lines.append("")
    _matrix_summary_md(base["risk_matrix"], lines)
    for e in base["risk_matrix"]:
        if e["status"] == "ok":
            _risk_detail_md(e, "baseline", lines)
    _subsets_md(base["subset_risks"], lines)

    for step_entry in obj["steps"]:
        step = step_entry["step"]
        target = step["params"].get("column", "")
        title = f"## Step {step_entry['index'] + 1}: {step['variant']}"
        if target:
            title += f" ({target})"
        lines.append(title)
        lines.append("")
        affected = ", ".join(f"{k}={v}" for k, v in step_entry["affected"].items())
        lines.append(f"Records: {step_entry['records']}; affected: {affected}")
        lines.append("")
        _matrix_summary_md(step_entry["risk_matrix_after"], lines)
        for e in step_entry["risk_matrix_after"]:
            if e["status"] == "ok":
                _risk_detail_md(e, f"after step {step_entry['index'] + 1}", lines)
        _subsets_md(step_entry["subset_risks"], lines)
        for util in step_entry["utility"]:
            lines.append(f"### Utility: {util['column']}")
            lines.append("")
            _histogram_md("Before", util["before"], lines)
            _histogram_md("After", util["after"], lines)

    if "error" in obj:
        lines.append("## Aborted")
        lines.append("")
        lines.append(
            f"Step {obj['error']['step_index'] + 1} "
            f"({obj['error']['step']['variant']}) failed: {obj['error']['message']}"
        )
        lines.append("")
        return "\n".join(lines)

    lines.append("## Final assessment")
    lines.append("")
    lines.append("| scenario | metric | risk % | pass |")
    lines.append("| --- | --- | --- | --- |")
    for e in final["per_scenario"]:
        name = ", ".join(e["scenario"])
        if e["status"] != "ok":
            lines.append(f"| {name} | - | {e['status']} | no |")
        else:
            lines.append(
                f"| {name} | {e['metric']} | {_fmt_pct(e['risk_percent'])} "
                f"| {'yes' if e['pass'] else 'no'} |"
            )
    lines.append("")
    lines.append(
        f"Smallest equivalence class: {final['min_k']} "
        f"(required ≥ {final['min_class_size_required']})"
    )
    lines.append("")
    verdict = "PASS" if final["pass"] else "FAIL"
    lines.append(
        f"**Thresholds: {verdict}** (max allowed risk "
        f"{_fmt_pct(final['max_risk_percent_allowed'])}%)"
    )
    lines.append("")
    lines.append(
        f"Risk level **{final['risk_level']}** × benefit "
        f"**{final['benefit_level']}** → decision: **{final['decision']}**"
    )
    lines.append("")

    lines.append("## Five Safes checklist")
    lines.append("")
    for item in obj["five_safes"]:
        lines.append(f"- **{item['stage']}**: {item['note']}")
    lines.append("")
    return "\n".join(lines)
