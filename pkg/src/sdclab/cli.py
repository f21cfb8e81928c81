"""Command-line interface.

Subcommands: ``assess`` (singling-out risk of a CSV), ``transform`` (apply a
spec's steps and export), ``pipeline`` (full iterate-and-reassess run with
report), ``synth`` (synthetic admissions data), ``serve`` (HTTP API).

Exit codes: 0 success / thresholds passed, 2 thresholds failed, 1 error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from sdclab import csvio
from sdclab.errors import SdcError
from sdclab.pipeline import PipelineAborted, PipelineSpec, resolve_step_seeds, run
from sdclab.risk import Scenario, k_anonymity_risk, subset_risk
from sdclab.schema import AttributeClass, dump_schema, load_schema
from sdclab.steps import apply_step
from sdclab.synth import SyntheticConfig, generate, validate_realism
from sdclab.table import Predicate, classify


def _sidecar_path(data_path: str) -> Path:
    return Path(data_path).with_suffix(".schema.json")


def _load_dataset(data_path: str, schema_path: str | None):
    schema = None
    candidate = Path(schema_path) if schema_path else _sidecar_path(data_path)
    if candidate.exists():
        schema = load_schema(candidate.read_text(encoding="utf-8"))
    elif schema_path:
        raise SdcError(f"schema file not found: {schema_path}")
    return csvio.load_csv(Path(data_path), schema)


def _write_dataset(ds, out_path: str) -> None:
    csvio.write_csv(ds, Path(out_path))
    _sidecar_path(out_path).write_text(dump_schema(ds.schema), encoding="utf-8")


def _cmd_assess(args) -> int:
    ds = _load_dataset(args.data, args.schema)
    qis = [q.strip() for q in args.qis.split(",") if q.strip()]
    ds = classify(ds, {q: AttributeClass.QUASI_IDENTIFIER for q in qis})
    scenario = Scenario(tuple(qis))
    if args.subset:
        result = subset_risk(ds, Predicate.parse(args.subset), scenario)
    else:
        result = k_anonymity_risk(ds, scenario)
    print(json.dumps(result.to_obj(), indent=2))
    return 0


def _cmd_transform(args) -> int:
    ds = _load_dataset(args.data, args.schema)
    spec = PipelineSpec.from_json(Path(args.spec).read_text(encoding="utf-8"))
    # unseeded perturbative steps take run-seed-derived seeds, so transform
    # and pipeline produce identical exports for the same spec
    for step in resolve_step_seeds(spec):
        ds = apply_step(ds, step)
    _write_dataset(ds, args.out)
    print(f"wrote {args.out} ({ds.n} records)")
    return 0


def _cmd_pipeline(args) -> int:
    ds = _load_dataset(args.data, args.schema)
    spec = PipelineSpec.from_json(Path(args.spec).read_text(encoding="utf-8"))
    try:
        result = run(ds, spec)
    except PipelineAborted as exc:
        _write_report(exc.report, args.report, args.format)
        print(f"pipeline aborted: {exc.cause}", file=sys.stderr)
        return 1
    _write_report(result.report, args.report, args.format)
    if args.out:
        _write_dataset(result.dataset, args.out)
    final = result.report.to_obj()["final"]
    print(
        f"thresholds {'PASS' if result.passed else 'FAIL'}; "
        f"risk level {final['risk_level']}; decision {final['decision']}"
    )
    return 0 if result.passed else 2


def _write_report(report, path: str, fmt: str | None) -> None:
    if fmt is None:
        fmt = "markdown" if path.endswith((".md", ".markdown")) else "json"
    text = report.to_markdown() if fmt == "markdown" else report.to_json()
    Path(path).write_text(text, encoding="utf-8")


def _cmd_synth(args) -> int:
    config = SyntheticConfig()
    if args.config:
        config = SyntheticConfig.from_json(Path(args.config).read_text(encoding="utf-8"))
    if args.seed is not None:
        config = SyntheticConfig.from_obj({**config.to_obj(), "seed": args.seed})
    ds = generate(config)
    _write_dataset(ds, args.out)
    diagnostics = validate_realism(ds, config)
    status = "ok" if diagnostics["all_ok"] else "DIAGNOSTICS FAILED"
    print(f"wrote {args.out} ({ds.n} records, realism checks: {status})")
    if args.workflow_out:
        from sdclab.workflow import default_workflow_spec

        Path(args.workflow_out).write_text(
            default_workflow_spec().to_json(), encoding="utf-8"
        )
        print(f"wrote {args.workflow_out}")
    return 0 if diagnostics["all_ok"] else 1


def _cmd_serve(args) -> int:
    import uvicorn

    from sdclab.service import app

    host, _, port = args.addr.rpartition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sdclab",
        description="Statistical disclosure control workbench",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("assess", help="singling-out risk of a CSV under a scenario")
    p.add_argument("--data", required=True, help="CSV file")
    p.add_argument("--schema", help="schema side-car JSON (default: <data>.schema.json)")
    p.add_argument("--qis", required=True, help="comma-separated quasi-identifiers")
    p.add_argument("--subset", help="restrict to rows matching col:op:value,...")
    p.set_defaults(fn=_cmd_assess)

    p = sub.add_parser("transform", help="apply a spec's steps and export the result")
    p.add_argument("--data", required=True)
    p.add_argument("--schema")
    p.add_argument("--spec", required=True, help="pipeline spec JSON")
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(fn=_cmd_transform)

    p = sub.add_parser("pipeline", help="full run: steps, re-assessment, report")
    p.add_argument("--data", required=True)
    p.add_argument("--schema")
    p.add_argument("--spec", required=True)
    p.add_argument("--report", required=True, help="report path (.json or .md)")
    p.add_argument("--format", choices=["json", "markdown"])
    p.add_argument("--out", help="also export the transformed CSV")
    p.set_defaults(fn=_cmd_pipeline)

    p = sub.add_parser("synth", help="generate synthetic admissions data")
    p.add_argument("--config", help="SyntheticConfig JSON")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    p.add_argument(
        "--workflow-out",
        help="also write the default de-identification workflow spec JSON",
    )
    p.set_defaults(fn=_cmd_synth)

    p = sub.add_parser("serve", help="run the HTTP API")
    p.add_argument("--addr", default="127.0.0.1:8000", help="HOST:PORT")
    p.set_defaults(fn=_cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except SdcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
