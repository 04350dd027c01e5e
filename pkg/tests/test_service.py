"""HTTP facade: endpoint contract, job lifecycle, persistence."""

import time

import pytest
from fastapi.testclient import TestClient

from rechain.service import create_app

from fixtures import dual_site_doc, minimal_chain_doc

V1 = "/api/v1"


@pytest.fixture()
def client(tmp_path):
    app = create_app(tmp_path / "store", workers=2, queue_cap=4)
    with TestClient(app) as c:
        c.store_dir = tmp_path / "store"
        yield c


def wait_for(client, job_id, timeout=60.0):
    deadline = time.time() + timeout
    while time.time() < deadline:
        job = client.get(f"{V1}/jobs/{job_id}").json()
        if job["state"] in ("done", "error"):
            return job
        time.sleep(0.02)
    raise TimeoutError(job_id)


def upload_model(client, doc, model_id="m1"):
    body = dict(doc)
    body["id"] = model_id
    response = client.post(f"{V1}/models", json=body)
    assert response.status_code == 200, response.text
    return response.json()["id"]


def blocking_scenario():
    return {
        "schema_version": 1,
        "label": "block",
        "events": [{
            "target": {"kind": "flow_upper", "arc": "w1-c1", "material": "INT"},
            "shape": "scheduled", "start": 1, "end": 7, "fraction": 0.0,
        }],
        "solver": {"mip_gap": 0.0},
    }


def test_health(client):
    response = client.get(f"{V1}/health")
    assert response.status_code == 200
    assert response.json() == {"status": "ok"}


def test_model_upload_list_fetch(client):
    model_id = upload_model(client, dual_site_doc())
    listing = client.get(f"{V1}/models").json()["models"]
    assert [m["id"] for m in listing] == [model_id]
    assert listing[0]["periods"] == 20
    doc = client.get(f"{V1}/models/{model_id}").json()
    assert doc["materials"] == ["GOOD", "INT", "RAW"]
    assert client.get(f"{V1}/models/ghost").status_code == 404


def test_model_validation_failure_returns_422_with_findings(client):
    doc = minimal_chain_doc()
    del doc["nodes"][1]["inventory"]["capacity"]
    response = client.post(f"{V1}/models", json=doc)
    assert response.status_code == 422
    findings = response.json()["findings"]
    assert any("inventory capacity required" in f for f in findings)


def test_scenario_crud_cycle(client):
    scen = blocking_scenario()
    assert client.post(f"{V1}/scenarios/s1", json=scen).status_code == 200
    assert client.post(f"{V1}/scenarios/s1", json=scen).status_code == 409
    assert client.get(f"{V1}/scenarios/s1").json()["label"] == "block"
    scen["label"] = "updated"
    assert client.put(f"{V1}/scenarios/s1", json=scen).status_code == 200
    assert client.get(f"{V1}/scenarios/s1").json()["label"] == "updated"
    assert client.put(f"{V1}/scenarios/ghost", json=scen).status_code == 404
    assert client.delete(f"{V1}/scenarios/s1").status_code == 200
    assert client.get(f"{V1}/scenarios/s1").status_code == 404
    bad = {"schema_version": 1, "events": [{"target": {"kind": "bogus"}}]}
    assert client.post(f"{V1}/scenarios/s2", json=bad).status_code == 422


def test_solve_job_lifecycle_undisrupted(client):
    model_id = upload_model(client, dual_site_doc())
    response = client.post(f"{V1}/jobs", json={
        "kind": "solve", "model_id": model_id, "options": {"mip_gap": 0.0}})
    assert response.status_code == 200
    job_id = response.json()["job_id"]
    job = wait_for(client, job_id)
    assert job["state"] == "done", job
    result = client.get(f"{V1}/jobs/{job_id}/result").json()
    assert result["status"] == "optimal"
    assert result["kpis"]["canceled_orders"] == 0
    assert result["kpis"]["delayed_material"] == 0
    # results are immutable: a second fetch returns the identical body
    again = client.get(f"{V1}/jobs/{job_id}/result").json()
    assert again == result


def test_job_validation_statuses(client):
    assert client.get(f"{V1}/jobs/ghost").status_code == 404
    assert client.post(f"{V1}/jobs", json={"kind": "dance", "model_id": "x"}).status_code == 400
    assert client.post(f"{V1}/jobs", json={"kind": "solve", "model_id": "ghost"}).status_code == 404
    model_id = upload_model(client, minimal_chain_doc())
    body = {"kind": "solve", "model_id": model_id, "scenario_id": "ghost"}
    assert client.post(f"{V1}/jobs", json=body).status_code == 404


def test_result_before_done_is_409(client):
    model_id = upload_model(client, dual_site_doc())
    job_id = client.post(f"{V1}/jobs", json={
        "kind": "sweep", "model_id": model_id, "scenario_id": "base",
    }).status_code  # missing scenario -> 404, create it first
    client.post(f"{V1}/scenarios/base", json=blocking_scenario())
    job_id = client.post(f"{V1}/jobs", json={
        "kind": "sweep", "model_id": model_id, "scenario_id": "base",
        "options": {"axis1": [0.5, 1.0], "axis2": [0.5, 1.0], "mip_gap": 0.0}}).json()["job_id"]
    seen_409 = False
    for _ in range(200):
        response = client.get(f"{V1}/jobs/{job_id}/result")
        if response.status_code == 409:
            seen_409 = True
        job = client.get(f"{V1}/jobs/{job_id}").json()
        if job["state"] == "done":
            break
        time.sleep(0.01)
    assert seen_409
    job = wait_for(client, job_id)
    result = client.get(f"{V1}/jobs/{job_id}/result").json()
    assert len(result["cells"]) == 4
    assert all(cell["scenario"] is not None for cell in result["cells"])


def test_sweep_job_reports_progress(client):
    model_id = upload_model(client, dual_site_doc())
    client.post(f"{V1}/scenarios/base", json=blocking_scenario())
    job_id = client.post(f"{V1}/jobs", json={
        "kind": "sweep", "model_id": model_id, "scenario_id": "base",
        "options": {"axis1": [0.25, 1.0], "axis2": [1.0], "mip_gap": 0.0}}).json()["job_id"]
    job = wait_for(client, job_id)
    assert job["state"] == "done"
    assert job["progress"] == 1.0


def test_roll_job(client):
    model_id = upload_model(client, dual_site_doc())
    job_id = client.post(f"{V1}/jobs", json={
        "kind": "roll", "model_id": model_id,
        "options": {"window": 5, "steps": 3, "mip_gap": 0.0}}).json()["job_id"]
    job = wait_for(client, job_id)
    assert job["state"] == "done"
    result = client.get(f"{V1}/jobs/{job_id}/result").json()
    assert len(result["steps"]) == 3
    assert result["halted"] is False


def test_cancel_and_cancel_conflicts(client):
    model_id = upload_model(client, dual_site_doc())
    client.post(f"{V1}/scenarios/base", json=blocking_scenario())
    body = {"kind": "sweep", "model_id": model_id, "scenario_id": "base",
            "options": {"axis1": [0.0, 0.25, 0.5, 0.75, 1.0],
                        "axis2": [0.0, 0.25, 0.5, 0.75, 1.0], "mip_gap": 0.0}}
    job_id = client.post(f"{V1}/jobs", json=body).json()["job_id"]
    response = client.delete(f"{V1}/jobs/{job_id}")
    assert response.status_code == 200
    job = wait_for(client, job_id)
    assert job["state"] == "error"
    assert job["diagnostic"] == "canceled"
    assert client.delete(f"{V1}/jobs/{job_id}").status_code == 409
    assert client.delete(f"{V1}/jobs/ghost").status_code == 404


def test_jobs_run_in_submission_order(tmp_path):
    app = create_app(tmp_path / "store", workers=1, queue_cap=8)
    with TestClient(app) as client:
        model_id = upload_model(client, minimal_chain_doc())
        body = {"kind": "solve", "model_id": model_id, "options": {"mip_gap": 0.0}}
        ids = [client.post(f"{V1}/jobs", json=body).json()["job_id"] for _ in range(3)]
        finished = [wait_for(client, jid) for jid in ids]
        assert all(j["state"] == "done" for j in finished)
        stamps = []
        for jid in ids:
            ref = client.get(f"{V1}/jobs/{jid}").json()["result_ref"]
            stamps.append((tmp_path / "store" / ref).stat().st_mtime_ns)
        assert stamps == sorted(stamps)  # single worker, FIFO pool


def test_queue_cap_yields_503(tmp_path):
    app = create_app(tmp_path / "store", workers=1, queue_cap=1)
    with TestClient(app) as client:
        model_id = upload_model(client, dual_site_doc())
        body = {"kind": "solve", "model_id": model_id, "options": {"mip_gap": 0.0}}
        codes = [client.post(f"{V1}/jobs", json=body).status_code for _ in range(6)]
        assert 503 in codes
        assert codes[0] == 200


def test_models_persist_across_restart(tmp_path):
    store = tmp_path / "store"
    app = create_app(store, workers=1, queue_cap=4)
    with TestClient(app) as client:
        upload_model(client, minimal_chain_doc(), model_id="keeper")
        client.post(f"{V1}/scenarios/saved", json=blocking_scenario())
    app2 = create_app(store, workers=1, queue_cap=4)
    with TestClient(app2) as client:
        assert [m["id"] for m in client.get(f"{V1}/models").json()["models"]] == ["keeper"]
        assert client.get(f"{V1}/scenarios/saved").json()["label"] == "block"
        # restart dropped jobs but kept documents intact
        assert client.get(f"{V1}/jobs/job-1").status_code == 404
