"""HTTP facade for datasets and interactive de-identification sessions.

Sessions hold the original dataset plus the applied provenance; the current
dataset is always reproducible by replaying that provenance, which is also
how undo works. Step/undo requests on one session are serialized; reads see
the last committed state. All numbers served here come from the same library
entry points the CLI uses.
"""

from __future__ import annotations

import json
import threading
import uuid
from pathlib import Path
from typing import Any

from fastapi import FastAPI, Query, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from sdclab import csvio
from sdclab.errors import (
    CellParseError,
    ConfigError,
    EmptySubsetError,
    MalformedCsvError,
    PredicateError,
    SdcError,
)
from sdclab.pipeline import (
    Level,
    PipelineSpec,
    Thresholds,
    run as run_pipeline,
    scenario_matrix,
)
from sdclab.risk import DistanceSpec, Scenario, subset_risk
from sdclab.schema import dump_schema, load_schema, schema_to_obj
from sdclab.stats import column_histogram
from sdclab.steps import ProvenanceEntry, TransformStep, apply_step, perturbed_columns, replay
from sdclab.table import Dataset, Predicate


class _DatasetRecord:
    def __init__(self, ds: Dataset):
        self.dataset = ds


class _Session:
    def __init__(self, session_id: str, original: Dataset, scenarios: tuple[Scenario, ...], benefit: Level):
        self.id = session_id
        self.original = original
        self.current = original
        self.scenarios = scenarios
        self.benefit = benefit
        self.distance_spec = DistanceSpec()
        self.lock = threading.Lock()

    @property
    def applied(self) -> tuple[ProvenanceEntry, ...]:
        return self.current.provenance[len(self.original.provenance):]

    def attacker_view(self) -> Dataset:
        truthful = [e for e in self.applied if not e.step.perturbative]
        return replay(self.original, truthful)

    def perturbed(self) -> frozenset[str]:
        return perturbed_columns(self.applied)

    def risk_matrix(self) -> list[dict[str, Any]]:
        return scenario_matrix(
            self.attacker_view(),
            self.current,
            self.scenarios,
            self.distance_spec,
            self.perturbed(),
        )


class SessionBody(BaseModel):
    dataset_id: str
    scenarios: list[list[str]]
    benefit_level: str = "M"


class StepBody(BaseModel):
    variant: str
    params: dict[str, Any] = {}
    seed: int | None = None


def create_app(state_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="sdclab", version="0.1.0")
    datasets: dict[str, _DatasetRecord] = {}
    sessions: dict[str, _Session] = {}
    state_path = Path(state_dir) if state_dir else None

    def _persist(session: _Session) -> None:
        if state_path is None:
            return
        d = state_path / session.id
        d.mkdir(parents=True, exist_ok=True)
        if not (d / "original.csv").exists():
            csvio.write_csv(session.original, d / "original.csv")
            (d / "schema.json").write_text(
                dump_schema(session.original.schema), encoding="utf-8"
            )
        (d / "provenance.json").write_text(
            json.dumps([e.to_obj() for e in session.applied], indent=2) + "\n",
            encoding="utf-8",
        )
        (d / "session.json").write_text(
            json.dumps(
                {
                    "scenarios": [list(s.qis) for s in session.scenarios],
                    "benefit_level": session.benefit.value,
                }
            )
            + "\n",
            encoding="utf-8",
        )

    def _restore() -> None:
        if state_path is None or not state_path.exists():
            return
        for d in sorted(state_path.iterdir()):
            if not (d / "original.csv").exists():
                continue
            schema = load_schema((d / "schema.json").read_text(encoding="utf-8"))
            original = csvio.load_csv(d / "original.csv", schema)
            meta = json.loads((d / "session.json").read_text(encoding="utf-8"))
            session = _Session(
                d.name,
                original,
                tuple(Scenario(tuple(s)) for s in meta["scenarios"]),
                Level(meta.get("benefit_level", "M")),
            )
            entries = [
                ProvenanceEntry.from_obj(e)
                for e in json.loads(
                    (d / "provenance.json").read_text(encoding="utf-8")
                )
            ]
            session.current = replay(original, entries)
            sessions[session.id] = session

    _restore()

    @app.exception_handler(RequestValidationError)
    async def _bad_body(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": str(exc.errors())})

    def _error(status: int, exc: Exception) -> JSONResponse:
        return JSONResponse(status_code=status, content={"detail": str(exc)})

    def _dataset_or_404(dataset_id: str) -> Dataset:
        record = datasets.get(dataset_id)
        if record is None:
            raise _NotFound(f"unknown dataset {dataset_id!r}")
        return record.dataset

    def _session_or_404(session_id: str) -> _Session:
        session = sessions.get(session_id)
        if session is None:
            raise _NotFound(f"unknown session {session_id!r}")
        return session

    class _NotFound(Exception):
        pass

    @app.exception_handler(_NotFound)
    async def _not_found(request: Request, exc: _NotFound):
        return _error(404, exc)

    @app.post("/v1/datasets", status_code=201)
    async def upload_dataset(request: Request):
        content_type = request.headers.get("content-type", "").split(";")[0].strip()
        body = await request.body()
        schema = None
        if content_type == "application/json":
            try:
                obj = json.loads(body)
            except json.JSONDecodeError as exc:
                return _error(400, exc)
            if not isinstance(obj, dict) or "csv" not in obj:
                return _error(400, ValueError("expected {'csv': ..., 'schema'?: ...}"))
            csv_text = obj["csv"]
            if obj.get("schema") is not None:
                try:
                    schema = load_schema(json.dumps(obj["schema"]))
                except ConfigError as exc:
                    return _error(422, exc)
        elif content_type in ("text/csv", "application/csv", "text/plain", ""):
            csv_text = body.decode("utf-8")
        else:
            return _error(400, ValueError(f"unsupported content type {content_type!r}"))
        try:
            ds = csvio.load_csv(csv_text, schema)
        except CellParseError as exc:
            return _error(422, exc)
        except (MalformedCsvError, SdcError) as exc:
            return _error(400, exc)
        dataset_id = uuid.uuid4().hex[:12]
        datasets[dataset_id] = _DatasetRecord(ds)
        return {
            "dataset_id": dataset_id,
            "records": ds.n,
            "columns": list(ds.schema.names),
        }

    @app.get("/v1/datasets/{dataset_id}/schema")
    async def get_schema(dataset_id: str):
        ds = _dataset_or_404(dataset_id)
        return schema_to_obj(ds.schema)

    @app.get("/v1/datasets/{dataset_id}/columns/{name}/histogram")
    async def get_histogram(dataset_id: str, name: str, bins: int = Query(10, ge=1)):
        ds = _dataset_or_404(dataset_id)
        if name not in ds.schema:
            raise _NotFound(f"unknown column {name!r}")
        return column_histogram(ds, name, bins)

    @app.post("/v1/sessions", status_code=201)
    async def create_session(body: SessionBody):
        ds = _dataset_or_404(body.dataset_id)
        try:
            scenarios = tuple(Scenario(tuple(s)) for s in body.scenarios)
            benefit = Level(body.benefit_level)
        except (SdcError, ValueError) as exc:
            return _error(400, exc)
        session = _Session(uuid.uuid4().hex[:12], ds, scenarios, benefit)
        sessions[session.id] = session
        _persist(session)
        return {
            "session_id": session.id,
            "records": ds.n,
            "risk_matrix": session.risk_matrix(),
        }

    @app.post("/v1/sessions/{session_id}/steps")
    async def apply_session_step(session_id: str, body: StepBody):
        session = _session_or_404(session_id)
        step = TransformStep(body.variant, dict(body.params), body.seed)
        with session.lock:
            try:
                session.current = apply_step(session.current, step)
            except SdcError as exc:
                return _error(409, exc)
            _persist(session)
        return {
            "records": session.current.n,
            "steps_applied": len(session.applied),
            "risk_matrix": session.risk_matrix(),
        }

    @app.post("/v1/sessions/{session_id}/undo")
    async def undo_step(session_id: str):
        session = _session_or_404(session_id)
        with session.lock:
            applied = session.applied
            if not applied:
                return _error(409, ValueError("nothing to undo"))
            session.current = replay(session.original, applied[:-1])
            _persist(session)
        return {
            "records": session.current.n,
            "steps_applied": len(session.applied),
            "risk_matrix": session.risk_matrix(),
        }

    @app.get("/v1/sessions/{session_id}/risk")
    async def session_risk(session_id: str, scenario: int | None = Query(None, ge=0)):
        session = _session_or_404(session_id)
        matrix = session.risk_matrix()
        if scenario is None:
            return {"risk_matrix": matrix}
        if scenario >= len(matrix):
            raise _NotFound(f"scenario index {scenario} out of range")
        return matrix[scenario]

    @app.get("/v1/sessions/{session_id}/subset-risk")
    async def session_subset_risk(
        session_id: str, where: str, scenario: int = Query(0, ge=0)
    ):
        session = _session_or_404(session_id)
        if scenario >= len(session.scenarios):
            raise _NotFound(f"scenario index {scenario} out of range")
        try:
            predicate = Predicate.parse(where)
        except PredicateError as exc:
            return _error(400, exc)
        try:
            result = subset_risk(session.current, predicate, session.scenarios[scenario])
        except EmptySubsetError as exc:
            return {"status": "empty", "reason": str(exc), "where": where}
        except SdcError as exc:
            return _error(409, exc)
        entry = {"status": "ok", "where": where}
        entry.update(result.to_obj())
        return entry

    @app.get("/v1/sessions/{session_id}/report")
    async def session_report(session_id: str, format: str = Query("json")):
        session = _session_or_404(session_id)
        spec = PipelineSpec(
            steps=tuple(e.step for e in session.applied),
            scenarios=session.scenarios,
            thresholds=Thresholds(max_risk_percent=100.0, min_class_size=1),
            benefit_level=session.benefit,
        )
        outcome = run_pipeline(session.original, spec)
        if format == "markdown":
            return Response(
                outcome.report.to_markdown(), media_type="text/markdown; charset=utf-8"
            )
        return outcome.report.to_obj()

    @app.get("/v1/sessions/{session_id}/export")
    async def session_export(session_id: str):
        session = _session_or_404(session_id)
        return Response(
            csvio.write_csv(session.current), media_type="text/csv; charset=utf-8"
        )

    return app


app = create_app()
