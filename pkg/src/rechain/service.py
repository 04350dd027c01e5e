"""HTTP facade for the what-if console: models, scenarios, async solve jobs.

Models and scenarios persist as JSON files under the model directory
(write-then-rename, so a crash never corrupts them); job state lives in
memory and job results are persisted under ``results/``. One bounded
worker pool executes all job kinds in submission order.
"""

from __future__ import annotations

import itertools
import json
import os
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .disruption import Scenario, ScenarioError
from .documents import (
    DocumentError,
    model_from_dict,
    scenario_from_dict,
    sweep_to_rows,
)
from .milp import SolveOptions
from .network import validate
from .runner import KpiReport, roll, run, sweep_characterization, sweep_penalties

JOB_KINDS = ("solve", "sweep", "roll")


@dataclass
class Job:
    id: str
    kind: str
    state: str = "queued"  # queued -> running -> done | error
    submitted_at: str = ""
    progress: float = 0.0
    result_ref: Optional[str] = None
    diagnostic: str = ""
    model_id: str = ""
    scenario_id: Optional[str] = None

    def snapshot(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind,
            "state": self.state,
            "submitted_at": self.submitted_at,
            "progress": self.progress,
            "result_ref": self.result_ref,
            "diagnostic": self.diagnostic,
            "model_id": self.model_id,
            "scenario_id": self.scenario_id,
        }


def _write_atomic(path: Path, text: str) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def _schedule_payload(result) -> dict:
    from .documents import _FAMILIES  # shared family list

    schedule = result.schedule
    kpi = result.kpis
    payload: dict = {
        "status": result.solution.status,
        "objective": result.solution.objective,
        "wall_time": result.wall_time,
        "dimensions": asdict(result.dimensions),
        "changes": [
            {"path": list(c.path), "start": c.start, "end": c.end, "old": c.old, "new": c.new}
            for c in result.changes
        ],
    }
    if schedule is not None:
        payload["horizon"] = schedule.horizon
        payload["cancellations"] = [list(c) for c in schedule.cancellations]
        payload["terminal_deviation"] = {
            f"{m}|{n}": v for (m, n), v in sorted(schedule.terminal_deviation.items())
        }
        for family, _ in _FAMILIES:
            payload[family] = {
                "|".join(k): list(series) for k, series in sorted(getattr(schedule, family).items())
            }
        payload["kpis"] = {c: getattr(kpi, c) for c in KpiReport.COLUMNS}
        payload["kpis_by_material"] = kpi.by_material
        payload["kpis_by_node"] = kpi.by_node
    return payload


def _grid_payload(grid) -> dict:
    from .documents import scenario_to_dict

    cells = []
    for i, v1 in enumerate(grid.axis1):
        for j, v2 in enumerate(grid.axis2):
            kpi = grid.cells[i][j]
            scen = grid.scenarios[i][j]
            cells.append({
                "i": i,
                "j": j,
                grid.axis1_name: v1,
                grid.axis2_name: v2,
                "status": grid.statuses[i][j],
                "kpis": None if kpi is None else {c: getattr(kpi, c) for c in KpiReport.COLUMNS},
                "scenario": None if scen is None else scenario_to_dict(scen),
            })
    return {
        "axis1": list(grid.axis1),
        "axis2": list(grid.axis2),
        "axis1_name": grid.axis1_name,
        "axis2_name": grid.axis2_name,
        "cells": cells,
        "table": sweep_to_rows(grid),
    }


class Registry:
    """Thread-safe store backed by the model directory."""

    def __init__(self, model_dir: Path, workers: int, queue_cap: int):
        self.dir = Path(model_dir)
        self.dir.mkdir(parents=True, exist_ok=True)
        (self.dir / "scenarios").mkdir(exist_ok=True)
        (self.dir / "results").mkdir(exist_ok=True)
        self.lock = threading.Lock()
        self.models: dict[str, dict] = {}
        self.scenarios: dict[str, dict] = {}
        self.jobs: dict[str, Job] = {}
        self.cancel_flags: dict[str, threading.Event] = {}
        self.queue_cap = queue_cap
        self.pool = ThreadPoolExecutor(max_workers=workers)
        self.counter = itertools.count(1)
        for path in sorted(self.dir.glob("*.model.json")):
            try:
                self.models[path.name[: -len(".model.json")]] = json.loads(path.read_text())
            except (OSError, json.JSONDecodeError):
                continue
        for path in sorted((self.dir / "scenarios").glob("*.json")):
            try:
                self.scenarios[path.stem] = json.loads(path.read_text())
            except (OSError, json.JSONDecodeError):
                continue

    def queued_count(self) -> int:
        return sum(1 for j in self.jobs.values() if j.state == "queued")


def _solve_options(raw: dict) -> SolveOptions:
    raw = raw or {}
    return SolveOptions(
        mip_gap=float(raw.get("mip_gap", 1e-6)),
        node_limit=raw.get("node_limit"),
        time_limit=raw.get("time_limit"),
    )


def _execute(reg: Registry, job: Job, options: dict) -> None:
    flag = reg.cancel_flags[job.id]
    with reg.lock:
        if flag.is_set():
            job.state = "error"
            job.diagnostic = "canceled"
            return
        job.state = "running"
    try:
        model = model_from_dict(reg.models[job.model_id], source=job.model_id)
        scenario, config, solve_opts = Scenario(), None, _solve_options(options)
        if job.scenario_id is not None:
            scenario, config, solve_opts = scenario_from_dict(
                reg.scenarios[job.scenario_id], source=job.scenario_id
            )
        stops = {"should_stop": flag.is_set}
        if job.kind == "solve":
            result = run(model, scenario, config, _with(solve_opts, **stops))
            payload = _schedule_payload(result)
        elif job.kind == "roll":
            outcome = roll(
                model,
                scenario,
                window=int(options.get("window", 5)),
                steps=int(options.get("steps", 1)),
                config=config,
                options=_with(solve_opts, **stops),
            )
            payload = {
                "halted": outcome.halted,
                "diagnostic": outcome.diagnostic,
                "steps": [
                    {
                        "offset": s.offset,
                        "status": s.solution.status,
                        "objective": s.solution.objective,
                        "kpis": {c: getattr(s.kpis, c) for c in KpiReport.COLUMNS},
                    }
                    for s in outcome.steps
                ],
                "committed": {
                    family: {"|".join(map(str, k)): list(v) for k, v in table.items()}
                    for family, table in outcome.committed.items()
                    if family != "cancellations"
                },
                "cancellations": [list(c) for c in outcome.committed["cancellations"]],
            }
        elif job.kind == "sweep":
            axis1 = [float(v) for v in options.get("axis1", [0.0, 1.0])]
            axis2 = [float(v) for v in options.get("axis2", [0.0, 1.0])]
            total = len(axis1) * len(axis2)
            done = itertools.count(1)

            def cell_done():
                with reg.lock:
                    job.progress = min(1.0, next(done) / total)

            sweep_kind = options.get("sweep_kind", "characterization")
            workers = int(options.get("workers", 1))
            opts = _with(solve_opts, should_stop=flag.is_set)
            if sweep_kind == "penalties":
                grid = sweep_penalties(model, scenario, axis1, axis2, config, opts,
                                       workers=workers, on_cell=cell_done)
            else:
                if not scenario.events:
                    raise ScenarioError("characterization sweeps need a base event in the scenario")
                grid = sweep_characterization(
                    model, scenario.events[0], axis1, axis2, config, opts,
                    template=scenario, workers=workers, on_cell=cell_done,
                )
            payload = _grid_payload(grid)
        else:  # unreachable; kinds validated at submission
            raise ValueError(f"unknown job kind {job.kind}")
        if flag.is_set():
            with reg.lock:
                job.state = "error"
                job.diagnostic = "canceled"
            return
        ref = f"results/{job.id}.json"
        _write_atomic(reg.dir / ref, json.dumps(payload, indent=2, sort_keys=True) + "\n")
        with reg.lock:
            job.progress = 1.0
            job.result_ref = ref
            job.state = "done"
    except Exception as exc:
        with reg.lock:
            job.state = "error"
            job.diagnostic = f"{type(exc).__name__}: {exc}"


def _with(options: SolveOptions, **changes) -> SolveOptions:
    import dataclasses

    return dataclasses.replace(options, **changes)


def create_app(model_dir, workers: int = 2, queue_cap: int = 16) -> FastAPI:
    reg = Registry(Path(model_dir), workers, queue_cap)
    app = FastAPI(title="rechain", docs_url=None, redoc_url=None)
    app.state.registry = reg
    v1 = "/api/v1"

    @app.get(v1 + "/health")
    def health():
        return {"status": "ok"}

    @app.get(v1 + "/models")
    def list_models():
        with reg.lock:
            items = [
                {
                    "id": mid,
                    "periods": doc.get("time", {}).get("periods"),
                    "materials": doc.get("materials", []),
                }
                for mid, doc in sorted(reg.models.items())
            ]
        return {"models": items}

    @app.get(v1 + "/models/{model_id}")
    def get_model(model_id: str):
        with reg.lock:
            doc = reg.models.get(model_id)
        if doc is None:
            return JSONResponse({"error": "unknown model id"}, status_code=404)
        return doc

    @app.post(v1 + "/models")
    async def post_model(request: Request):
        try:
            doc = await request.json()
        except json.JSONDecodeError:
            return JSONResponse({"error": "malformed JSON"}, status_code=400)
        if not isinstance(doc, dict):
            return JSONResponse({"error": "expected a model document"}, status_code=400)
        model_id = doc.pop("id", None)
        try:
            model = model_from_dict(doc, source=model_id or "<upload>")
        except DocumentError as exc:
            return JSONResponse(
                {"error": "validation failed", "findings": exc.findings}, status_code=422
            )
        report = validate(model)
        with reg.lock:
            if model_id is None:
                model_id = f"model-{next(reg.counter)}"
            reg.models[model_id] = doc
            _write_atomic(reg.dir / f"{model_id}.model.json", json.dumps(doc, indent=2) + "\n")
        return {"id": model_id, "warnings": [str(w) for w in report.warnings]}

    @app.get(v1 + "/scenarios")
    def list_scenarios():
        with reg.lock:
            return {"scenarios": sorted(reg.scenarios)}

    @app.get(v1 + "/scenarios/{scenario_id}")
    def get_scenario(scenario_id: str):
        with reg.lock:
            doc = reg.scenarios.get(scenario_id)
        if doc is None:
            return JSONResponse({"error": "unknown scenario id"}, status_code=404)
        return doc

    async def _check_scenario(request: Request):
        try:
            doc = await request.json()
        except json.JSONDecodeError:
            return None, JSONResponse({"error": "malformed JSON"}, status_code=400)
        try:
            scenario_from_dict(doc)
        except DocumentError as exc:
            return None, JSONResponse(
                {"error": "validation failed", "findings": exc.findings}, status_code=422
            )
        return doc, None

    @app.post(v1 + "/scenarios/{scenario_id}")
    async def post_scenario(scenario_id: str, request: Request):
        doc, err = await _check_scenario(request)
        if err:
            return err
        with reg.lock:
            if scenario_id in reg.scenarios:
                return JSONResponse({"error": "scenario exists; use PUT"}, status_code=409)
            reg.scenarios[scenario_id] = doc
            _write_atomic(reg.dir / "scenarios" / f"{scenario_id}.json", json.dumps(doc, indent=2) + "\n")
        return {"id": scenario_id}

    @app.put(v1 + "/scenarios/{scenario_id}")
    async def put_scenario(scenario_id: str, request: Request):
        doc, err = await _check_scenario(request)
        if err:
            return err
        with reg.lock:
            if scenario_id not in reg.scenarios:
                return JSONResponse({"error": "unknown scenario id"}, status_code=404)
            reg.scenarios[scenario_id] = doc
            _write_atomic(reg.dir / "scenarios" / f"{scenario_id}.json", json.dumps(doc, indent=2) + "\n")
        return {"id": scenario_id}

    @app.delete(v1 + "/scenarios/{scenario_id}")
    def delete_scenario(scenario_id: str):
        with reg.lock:
            if scenario_id not in reg.scenarios:
                return JSONResponse({"error": "unknown scenario id"}, status_code=404)
            del reg.scenarios[scenario_id]
            path = reg.dir / "scenarios" / f"{scenario_id}.json"
            if path.exists():
                path.unlink()
        return {"id": scenario_id, "deleted": True}

    @app.post(v1 + "/jobs")
    async def post_job(request: Request):
        try:
            body = await request.json()
        except json.JSONDecodeError:
            return JSONResponse({"error": "malformed JSON"}, status_code=400)
        kind = body.get("kind")
        if kind not in JOB_KINDS:
            return JSONResponse({"error": f"kind must be one of {JOB_KINDS}"}, status_code=400)
        model_id = body.get("model_id")
        scenario_id = body.get("scenario_id")
        with reg.lock:
            if model_id not in reg.models:
                return JSONResponse({"error": "unknown model id"}, status_code=404)
            if scenario_id is not None and scenario_id not in reg.scenarios:
                return JSONResponse({"error": "unknown scenario id"}, status_code=404)
            if reg.queued_count() >= reg.queue_cap:
                return JSONResponse({"error": "queue full"}, status_code=503)
            job = Job(
                id=f"job-{next(reg.counter)}",
                kind=kind,
                submitted_at=datetime.now(timezone.utc).isoformat(),
                model_id=model_id,
                scenario_id=scenario_id,
            )
            reg.jobs[job.id] = job
            reg.cancel_flags[job.id] = threading.Event()
        reg.pool.submit(_execute, reg, job, body.get("options") or {})
        return {"job_id": job.id}

    @app.get(v1 + "/jobs/{job_id}")
    def get_job(job_id: str):
        with reg.lock:
            job = reg.jobs.get(job_id)
            if job is None:
                return JSONResponse({"error": "unknown job id"}, status_code=404)
            return job.snapshot()

    @app.get(v1 + "/jobs/{job_id}/result")
    def get_result(job_id: str):
        with reg.lock:
            job = reg.jobs.get(job_id)
            if job is None:
                return JSONResponse({"error": "unknown job id"}, status_code=404)
            if job.state != "done":
                return JSONResponse(
                    {"error": f"job is {job.state}, result available once done"}, status_code=409
                )
            ref = job.result_ref
        return json.loads((reg.dir / ref).read_text())

    @app.delete(v1 + "/jobs/{job_id}")
    def cancel_job(job_id: str):
        with reg.lock:
            job = reg.jobs.get(job_id)
            if job is None:
                return JSONResponse({"error": "unknown job id"}, status_code=404)
            if job.state not in ("queued", "running"):
                return JSONResponse(
                    {"error": f"cannot cancel a job in state {job.state}"}, status_code=409
                )
            reg.cancel_flags[job_id].set()
        return {"id": job_id, "canceling": True}

    return app
