import json

import pytest

from sdclab.cli import main
from sdclab.pipeline import PipelineSpec
from sdclab.workflow import default_workflow_spec


@pytest.fixture(scope="module")
def synth_files(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    data = d / "hospital.csv"
    config = d / "config.json"
    config.write_text(json.dumps({"n": 300, "seed": 21, "reincident_fraction": 0.0}))
    code = main(["synth", "--config", str(config), "--out", str(data)])
    assert code == 0
    return d, data


def test_synth_writes_csv_and_sidecar(synth_files):
    d, data = synth_files
    assert data.exists()
    sidecar = data.with_suffix(".schema.json")
    assert sidecar.exists()
    schema = json.loads(sidecar.read_text())
    assert any(c["name"] == "Age" and c["class"] == "QuasiIdentifier" for c in schema)


def test_synth_seed_override(tmp_path, synth_files):
    d, data = synth_files
    out = tmp_path / "other.csv"
    config = d / "config.json"
    assert main(["synth", "--config", str(config), "--seed", "99", "--out", str(out)]) == 0
    assert out.read_text() != data.read_text()


def test_assess_prints_risk_json(synth_files, capsys):
    _, data = synth_files
    code = main(["assess", "--data", str(data), "--qis", "Age,Gender"])
    assert code == 0
    out = json.loads(capsys.readouterr().out)
    assert out["metric"] == "KAnonymity"
    assert out["scenario"] == ["Age", "Gender"]
    assert 0.0 <= out["risk_percent"] <= 100.0


def test_assess_subset(synth_files, capsys):
    _, data = synth_files
    code = main(
        ["assess", "--data", str(data), "--qis", "Age,Gender", "--subset", "Outcome:eq:D"]
    )
    assert code == 0
    out = json.loads(capsys.readouterr().out)
    assert out["records"] < 300


def test_assess_unknown_column_errors(synth_files, capsys):
    _, data = synth_files
    assert main(["assess", "--data", str(data), "--qis", "Nope"]) == 1
    assert "error:" in capsys.readouterr().err


def test_transform_applies_steps(synth_files, tmp_path, capsys):
    _, data = synth_files
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(default_workflow_spec().to_json())
    out = tmp_path / "out.csv"
    code = main(
        ["transform", "--data", str(data), "--spec", str(spec_path), "--out", str(out)]
    )
    assert code == 0
    header = out.read_text().splitlines()[0]
    assert "RecordId" not in header
    assert "HospitalisationDays" in header


def test_pipeline_exit_codes_and_report(synth_files, tmp_path, capsys):
    _, data = synth_files
    spec = default_workflow_spec()

    lenient = PipelineSpec.from_obj(
        {
            **spec.to_obj(),
            "thresholds": {"max_risk_percent": 100.0, "min_class_size": 1},
        }
    )
    spec_path = tmp_path / "lenient.json"
    spec_path.write_text(lenient.to_json())
    report = tmp_path / "report.md"
    out = tmp_path / "protected.csv"
    code = main(
        [
            "pipeline",
            "--data", str(data),
            "--spec", str(spec_path),
            "--report", str(report),
            "--out", str(out),
        ]
    )
    assert code == 0
    assert report.read_text().startswith("# De-identification run report")
    assert out.exists()

    strict = PipelineSpec.from_obj(
        {**spec.to_obj(), "thresholds": {"max_risk_percent": 0.0, "min_class_size": 3}}
    )
    strict_path = tmp_path / "strict.json"
    strict_path.write_text(strict.to_json())
    json_report = tmp_path / "report.json"
    code = main(
        [
            "pipeline",
            "--data", str(data),
            "--spec", str(strict_path),
            "--report", str(json_report),
        ]
    )
    assert code == 2
    parsed = json.loads(json_report.read_text())
    assert parsed["final"]["pass"] is False


def test_transform_matches_pipeline_export(synth_files, tmp_path, capsys):
    _, data = synth_files
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(default_workflow_spec().to_json())
    via_transform = tmp_path / "t.csv"
    via_pipeline = tmp_path / "p.csv"
    main(["transform", "--data", str(data), "--spec", str(spec_path), "--out", str(via_transform)])
    main(
        [
            "pipeline",
            "--data", str(data),
            "--spec", str(spec_path),
            "--report", str(tmp_path / "r.json"),
            "--out", str(via_pipeline),
        ]
    )
    assert via_transform.read_text() == via_pipeline.read_text()


def test_pipeline_error_exits_1(synth_files, tmp_path, capsys):
    _, data = synth_files
    bad = PipelineSpec.from_obj(
        {
            "seed": 1,
            "thresholds": {"max_risk_percent": 100.0, "min_class_size": 1},
            "scenarios": [["Age", "Gender"]],
            "steps": [{"variant": "TruncateDateTime", "params": {"column": "Age"}}],
        }
    )
    spec_path = tmp_path / "bad.json"
    spec_path.write_text(bad.to_json())
    report = tmp_path / "partial.json"
    code = main(
        ["pipeline", "--data", str(data), "--spec", str(spec_path), "--report", str(report)]
    )
    assert code == 1
    assert json.loads(report.read_text())["error"]["step_index"] == 0


def test_missing_schema_file_errors(tmp_path, capsys):
    data = tmp_path / "x.csv"
    data.write_text("Age\n1\n")
    assert main(["assess", "--data", str(data), "--schema", "/nope.json", "--qis", "Age"]) == 1
