import json

import pytest

from sdclab.errors import ConfigError
from sdclab.pipeline import (
    DEFAULT_MATRIX,
    Decision,
    Level,
    LevelCutoff,
    PipelineAborted,
    PipelineSpec,
    RiskBenefitMatrix,
    SubsetSpec,
    Thresholds,
    decide,
    risk_to_level,
    run,
)
from sdclab.risk import Metric, Scenario
from sdclab.steps import TransformStep
from sdclab.values import DayTime, ValueKind

from .conftest import make_ds

_LEVELS = [Level.L, Level.M, Level.H, Level.VH]


def test_risk_to_level_defaults():
    assert risk_to_level(0.0) is Level.L
    assert risk_to_level(4.99) is Level.L
    assert risk_to_level(5.0) is Level.M
    assert risk_to_level(20.0) is Level.H
    assert risk_to_level(50.0) is Level.VH
    assert risk_to_level(100.0) is Level.VH


def test_risk_to_level_rejects_gapped_cutoffs():
    cutoffs = (
        LevelCutoff(Level.L, 0.0, 5.0),
        LevelCutoff(Level.M, 6.0, 100.0),
    )
    with pytest.raises(ConfigError):
        risk_to_level(3.0, cutoffs)


def test_risk_to_level_rejects_overlap():
    cutoffs = (
        LevelCutoff(Level.L, 0.0, 50.0),
        LevelCutoff(Level.M, 40.0, 100.0),
    )
    with pytest.raises(ConfigError):
        risk_to_level(3.0, cutoffs)


def test_decide_pinned_cells():
    assert decide(DEFAULT_MATRIX, Level.M, Level.VH) is Decision.RELEASE_WITH_CONTROLS
    assert decide(DEFAULT_MATRIX, Level.VH, Level.L) is Decision.DO_NOT_RELEASE
    assert decide(DEFAULT_MATRIX, Level.L, Level.VH) is Decision.RELEASE


def test_default_matrix_monotone_both_ways():
    perm = {
        Decision.DO_NOT_RELEASE: 0,
        Decision.RELEASE_WITH_CONTROLS: 1,
        Decision.RELEASE: 2,
    }
    for b in _LEVELS:
        seq = [perm[decide(DEFAULT_MATRIX, r, b)] for r in _LEVELS]
        assert seq == sorted(seq, reverse=True)
    for r in _LEVELS:
        seq = [perm[decide(DEFAULT_MATRIX, r, b)] for b in _LEVELS]
        assert seq == sorted(seq)


def test_matrix_requires_all_cells():
    cells = dict(DEFAULT_MATRIX.cells)
    del cells[(Level.L, Level.L)]
    with pytest.raises(ConfigError):
        RiskBenefitMatrix(cells)


def test_matrix_rejects_non_monotone():
    cells = dict(DEFAULT_MATRIX.cells)
    cells[(Level.VH, Level.L)] = Decision.RELEASE
    with pytest.raises(ConfigError):
        RiskBenefitMatrix(cells)


def test_thresholds_validation():
    with pytest.raises(ConfigError):
        Thresholds(max_risk_percent=50.0, min_class_size=0)
    with pytest.raises(ConfigError):
        Thresholds(max_risk_percent=101.0, min_class_size=1)


def sample_ds():
    return make_ds(
        {
            "Age": (ValueKind.NUMERIC, [30, 30, 41, 50, 50, 50]),
            "Gender": (ValueKind.CATEGORICAL, ["M", "M", "F", "F", "F", "M"]),
            "T": (
                ValueKind.DATETIME,
                [
                    DayTime(18300, 10),
                    DayTime(18300, 20),
                    DayTime(18301, 30),
                    DayTime(18302, 40),
                    DayTime(18303, 50),
                    DayTime(18304, 60),
                ],
            ),
        }
    )


def spec_for(steps, scenarios=None, **kw) -> PipelineSpec:
    return PipelineSpec(
        steps=tuple(steps),
        scenarios=tuple(scenarios or (Scenario.of("Age", "Gender"),)),
        thresholds=kw.pop("thresholds", Thresholds(100.0, 1)),
        seed=kw.pop("seed", 11),
        **kw,
    )


def test_empty_steps_report_is_baseline_only():
    ds = sample_ds()
    outcome = run(ds, spec_for([]))
    obj = outcome.report.to_obj()
    assert outcome.dataset == ds
    assert obj["steps"] == []
    assert obj["final"]["risk_matrix"] == obj["baseline"]["risk_matrix"]


def test_metric_switches_exactly_at_perturbing_step():
    steps = [
        TransformStep("TruncateDateTime", {"column": "T"}),
        TransformStep("AddUniformIntegerNoise", {"column": "T", "lo": -2, "hi": 2}),
        TransformStep("BinFixedWidth", {"column": "Age", "width": 10}),
    ]
    scenario = Scenario.of("Age", "T", "Gender")
    outcome = run(sample_ds(), spec_for(steps, [scenario]))
    metrics = [
        s["risk_matrix_after"][0]["metric"] for s in outcome.report.to_obj()["steps"]
    ]
    assert metrics == [
        Metric.K_ANONYMITY.value,
        Metric.RECORD_LINKAGE.value,
        Metric.RECORD_LINKAGE.value,
    ]


def test_truthful_prefix_risk_non_increasing():
    steps = [
        TransformStep("TruncateDateTime", {"column": "T"}),
        TransformStep("BinFixedWidth", {"column": "Age", "width": 10}),
    ]
    scenario = Scenario.of("Age", "T", "Gender")
    outcome = run(sample_ds(), spec_for(steps, [scenario]))
    obj = outcome.report.to_obj()
    risks = [obj["baseline"]["risk_matrix"][0]["risk_percent"]] + [
        s["risk_matrix_after"][0]["risk_percent"] for s in obj["steps"]
    ]
    assert all(a >= b for a, b in zip(risks, risks[1:]))


def test_threshold_soundness_pass_and_fail():
    ds = sample_ds()
    ok = run(ds, spec_for([], thresholds=Thresholds(100.0, 1)))
    assert ok.passed and ok.report.to_obj()["final"]["pass"]
    strict = run(ds, spec_for([], thresholds=Thresholds(0.0, 4)))
    final = strict.report.to_obj()["final"]
    assert not strict.passed
    assert final["class_size_pass"] is False
    assert any(not e["pass"] for e in final["per_scenario"])


def test_min_class_size_pass_example():
    ds = make_ds(
        {
            "Age": (ValueKind.NUMERIC, [30, 30, 30, 40, 40, 40]),
            "Gender": (ValueKind.CATEGORICAL, ["M"] * 6),
        }
    )
    outcome = run(ds, spec_for([], thresholds=Thresholds(10.0, 3)))
    final = outcome.report.to_obj()["final"]
    assert final["min_k"] == 3
    assert final["pass"] is True


def test_scenario_not_applicable_until_column_exists():
    steps = [
        TransformStep(
            "DeriveDuration",
            {"start": "T", "end": "T", "new_name": "Zero", "drop_sources": False},
        ),
        TransformStep("Classify", {"assignments": {"Zero": "QuasiIdentifier"}}),
    ]
    ds = sample_ds()
    scenario = Scenario.of("Age", "Zero")
    outcome = run(ds, spec_for(steps, [scenario]))
    obj = outcome.report.to_obj()
    assert obj["baseline"]["risk_matrix"][0]["status"] == "not-applicable"
    assert obj["steps"][0]["risk_matrix_after"][0]["status"] == "not-applicable"
    assert obj["steps"][1]["risk_matrix_after"][0]["status"] == "ok"
    assert obj["final"]["pass"] is True


def test_step_error_aborts_with_partial_report():
    steps = [
        TransformStep("TruncateDateTime", {"column": "T"}),
        TransformStep("TruncateDateTime", {"column": "Age"}),  # wrong kind
    ]
    with pytest.raises(PipelineAborted) as err:
        run(sample_ds(), spec_for(steps))
    report = err.value.report.to_obj()
    assert len(report["steps"]) == 1
    assert report["error"]["step_index"] == 1
    assert "expected DateTime" in report["error"]["message"]
    md = err.value.report.to_markdown()
    assert "## Aborted" in md


def test_subset_entries_and_statuses():
    ds = sample_ds()
    subsets = (
        SubsetSpec("men", "Gender:eq:M", (Scenario.of("Age"),)),
        SubsetSpec("nobody", "Age:gt:200", (Scenario.of("Age"),)),
        SubsetSpec("badcol", "Nope:eq:1", (Scenario.of("Age"),)),
    )
    outcome = run(ds, spec_for([], subsets=subsets))
    entries = outcome.report.to_obj()["baseline"]["subset_risks"]
    assert [e["status"] for e in entries] == ["ok", "empty", "not-applicable"]


def test_report_json_round_trip_and_determinism():
    ds = sample_ds()
    steps = [
        TransformStep("TruncateDateTime", {"column": "T"}),
        TransformStep("AddUniformIntegerNoise", {"column": "T", "lo": -2, "hi": 2}),
    ]
    spec = spec_for(steps, [Scenario.of("Age", "T", "Gender")])
    a = run(ds, spec)
    b = run(ds, spec)
    assert a.report.to_json() == b.report.to_json()
    assert a.report.to_markdown() == b.report.to_markdown()
    assert json.loads(a.report.to_json()) == a.report.to_obj()


def test_markdown_contains_one_risk_table_per_scenario_per_step():
    ds = sample_ds()
    scenarios = [Scenario.of("Age", "Gender"), Scenario.of("Age", "T", "Gender")]
    steps = [
        TransformStep("TruncateDateTime", {"column": "T"}),
        TransformStep("BinFixedWidth", {"column": "Age", "width": 10}),
    ]
    outcome = run(ds, spec_for(steps, scenarios))
    obj = outcome.report.to_obj()
    expected = sum(
        1 for e in obj["baseline"]["risk_matrix"] if e["status"] == "ok"
    ) + sum(
        1
        for s in obj["steps"]
        for e in s["risk_matrix_after"]
        if e["status"] == "ok"
    )
    md = outcome.report.to_markdown()
    assert md.count("#### Risk: ") == expected
    assert md.count("### Utility: ") == len(steps)
    assert "## Five Safes checklist" in md


def test_unseeded_noise_steps_get_run_seed_derivation():
    ds = sample_ds()
    steps = [TransformStep("AddUniformIntegerNoise", {"column": "Age", "lo": -1, "hi": 1})]
    spec_a = spec_for(steps, seed=5)
    one = run(ds, spec_a)
    two = run(ds, spec_a)
    assert one.dataset == two.dataset
    other = run(ds, spec_for(steps, seed=6))
    assert one.dataset != other.dataset


def test_spec_json_round_trip():
    spec = spec_for(
        [TransformStep("BinFixedWidth", {"column": "Age", "width": 5, "origin": 0})],
        subsets=(SubsetSpec("men", "Gender:eq:M", (Scenario.of("Age"),)),),
        benefit_level=Level.H,
    )
    text = spec.to_json()
    again = PipelineSpec.from_json(text)
    assert again == spec
    assert again.to_json() == text


def test_spec_rejects_unknown_variant():
    with pytest.raises(Exception):
        spec_for([TransformStep("Nope", {})])


def test_decision_uses_worst_scenario_risk():
    ds = make_ds(
        {
            "Age": (ValueKind.NUMERIC, [1, 2, 3, 4]),
            "Gender": (ValueKind.CATEGORICAL, ["M", "M", "F", "F"]),
        }
    )
    outcome = run(
        ds,
        spec_for(
            [],
            [Scenario.of("Gender"), Scenario.of("Age", "Gender")],
            benefit_level=Level.L,
        ),
    )
    final = outcome.report.to_obj()["final"]
    assert final["worst_risk_percent"] == 100.0
    assert final["risk_level"] == "VH"
    assert final["decision"] == "DoNotRelease"
