"""Cross-component contract: the console's emitted scenario corpus must be
accepted verbatim by the live scenario endpoint (zero rejections).

Runs only when the frontend has been built (`cd frontend && npm install &&
npm run build`); the primary suite stays green without it.
"""

import json
import shutil
import subprocess
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from rechain.service import create_app

from fixtures import dual_site_doc

FRONTEND = Path(__file__).parent.parent / "frontend"
EMITTER = FRONTEND / "dist" / "emitCorpus.js"

pytestmark = pytest.mark.skipif(
    shutil.which("node") is None or not EMITTER.exists(),
    reason="frontend not built (cd frontend && npm install && npm run build)",
)


def test_editor_corpus_accepted_by_scenario_endpoint(tmp_path):
    emitted = subprocess.run(
        ["node", str(EMITTER)], capture_output=True, text=True, check=True
    )
    corpus = json.loads(emitted.stdout)
    assert len(corpus) >= 10
    app = create_app(tmp_path / "store", workers=1, queue_cap=4)
    with TestClient(app) as client:
        doc = dict(dual_site_doc())
        doc["id"] = "dual-site"
        assert client.post("/api/v1/models", json=doc).status_code == 200
        rejections = []
        for k, scenario in enumerate(corpus):
            response = client.post(f"/api/v1/scenarios/editor-{k}", json=scenario)
            if response.status_code != 200:
                rejections.append((scenario.get("label"), response.status_code, response.text))
        assert rejections == []
        # and the stored documents round-trip unchanged
        for k, scenario in enumerate(corpus):
            assert client.get(f"/api/v1/scenarios/editor-{k}").json() == scenario


def test_editor_corpus_scenarios_actually_solve(tmp_path):
    emitted = subprocess.run(
        ["node", str(EMITTER)], capture_output=True, text=True, check=True
    )
    corpus = json.loads(emitted.stdout)
    from rechain.documents import model_from_dict, scenario_from_dict
    from rechain.runner import run

    model = model_from_dict(dual_site_doc())
    for scenario_doc in corpus[:4]:  # a few full solves keep this quick
        scenario, config, options = scenario_from_dict(scenario_doc)
        result = run(model, scenario, config, options)
        assert result.solution.status in ("optimal", "feasible")
