"""HTTP service: endpoints, optimistic concurrency, CLI parity."""

from __future__ import annotations

import json
import shutil
import threading
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from taxunify.cli import run
from taxunify.service import create_app

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture
def workspace(tmp_path) -> Path:
    root = tmp_path / "workspace"
    shutil.copytree(FIXTURES / "workspace", root)
    return root


@pytest.fixture
def client(workspace) -> TestClient:
    with TestClient(create_app(workspace)) as test_client:
        yield test_client


def mapping_body(project_id: str, triples) -> dict:
    return {
        "schemaVersion": 1,
        "kind": "mapping",
        "projectId": project_id,
        "pairs": [
            {"unifiedNodeId": u, "previousSchemeId": s, "previousNodeId": d}
            for (u, s, d) in triples
        ],
    }


def test_health(client):
    response = client.get("/api/health")
    assert response.status_code == 200
    assert response.json() == {"status": "ok"}


def test_list_projects(client):
    response = client.get("/api/projects")
    assert response.status_code == 200
    projects = response.json()["projects"]
    assert [p["id"] for p in projects] == sorted(p["id"] for p in projects)
    fan = next(p for p in projects if p["id"] == "fan")
    assert fan["revision"] == 0
    assert fan["pairCount"] == 3


def test_empty_workspace_lists_nothing(tmp_path):
    with TestClient(create_app(tmp_path)) as client:
        assert client.get("/api/projects").json() == {"projects": []}


def test_get_project_with_schemes(client):
    response = client.get("/api/projects/fan")
    assert response.status_code == 200
    document = response.json()
    assert document["project"]["revision"] == 0
    assert set(document["schemes"]) == {"unified-pair", "prev-basic"}


def test_unknown_project_404(client):
    response = client.get("/api/projects/ghost")
    assert response.status_code == 404
    assert response.json()["error"] == "UnknownProject"


def test_put_mapping_happy_path_increments_revision(client, workspace):
    body = mapping_body("fan", [("c1", "prev-basic", "d1"),
                                ("c2", "prev-basic", "d2"),
                                ("c1", "prev-basic", "d3")])
    response = client.put("/api/projects/fan/mapping", json=body,
                          headers={"X-Expected-Revision": "0"})
    assert response.status_code == 200
    assert response.json() == {"projectId": "fan", "revision": 1}
    # persisted atomically: the file carries the new revision
    on_disk = json.loads((workspace / "projects" / "fan.json").read_text())
    assert on_disk["revision"] == 1
    assert len(on_disk["mapping"]["pairs"]) == 3


def test_put_mapping_stale_revision_409(client):
    body = mapping_body("fan", [("c1", "prev-basic", "d1")])
    response = client.put("/api/projects/fan/mapping", json=body,
                          headers={"X-Expected-Revision": "99"})
    assert response.status_code == 409
    document = response.json()
    assert document["error"] == "RevisionConflict"
    assert document["details"]["current"] == 0


def test_put_mapping_missing_header_400(client):
    response = client.put("/api/projects/fan/mapping",
                          json=mapping_body("fan", []))
    assert response.status_code == 400


def test_put_mapping_unknown_node_422_lists_ids(client):
    body = mapping_body("fan", [("cX", "prev-basic", "d1")])
    response = client.put("/api/projects/fan/mapping", json=body,
                          headers={"X-Expected-Revision": "0"})
    assert response.status_code == 422
    violations = response.json()["violations"]
    assert any(v["code"] == "UnknownUnifiedNode" and
               v["context"]["unified_node_id"] == "cX" for v in violations)


def test_put_mapping_wrong_project_id_422(client):
    body = mapping_body("identity", [])
    response = client.put("/api/projects/fan/mapping", json=body,
                          headers={"X-Expected-Revision": "0"})
    assert response.status_code == 422
    assert any(v["code"] == "ProjectIdMismatch"
               for v in response.json()["violations"])


def test_put_duplicate_pairs_deduplicated(client):
    triples = [("c1", "prev-basic", "d1"), ("c1", "prev-basic", "d1")]
    response = client.put("/api/projects/fan/mapping",
                          json=mapping_body("fan", triples),
                          headers={"X-Expected-Revision": "0"})
    assert response.status_code == 200
    mapping = client.get("/api/projects/fan/mapping").json()
    assert len(mapping["pairs"]) == 1


def test_metrics_endpoint_fan(client):
    response = client.get("/api/projects/fan/metrics")
    assert response.status_code == 200
    document = response.json()
    assert document["metrics"]["completeness"]["fraction"] == "2/3"
    assert document["metrics"]["soundness"]["numerator"] == 2


def test_metrics_endpoint_identity_all_ones(client):
    document = client.get("/api/projects/identity/metrics").json()
    for name in ("laconicity", "lucidity", "completeness", "soundness"):
        assert document["metrics"][name]["fraction"] == "1"


def test_metrics_endpoint_zero_previous_schemes_422(client, workspace):
    document = {"schemaVersion": 1, "kind": "project", "id": "no-previous",
                "unifiedSchemeId": "unified-solo", "previousSchemeIds": [],
                "mapping": {"pairs": []}, "revision": 0}
    (workspace / "projects" / "no-previous.json").write_text(json.dumps(document))
    with TestClient(create_app(workspace)) as fresh:
        response = fresh.get("/api/projects/no-previous/metrics")
    assert response.status_code == 422


def test_metrics_recomputed_after_commit(client):
    before = client.get("/api/projects/fan/metrics").json()
    assert before["metrics"]["completeness"]["fraction"] == "2/3"
    body = mapping_body("fan", [("c1", "prev-basic", "d1"),
                                ("c2", "prev-basic", "d2"),
                                ("c1", "prev-basic", "d3")])
    assert client.put("/api/projects/fan/mapping", json=body,
                      headers={"X-Expected-Revision": "0"}).status_code == 200
    after = client.get("/api/projects/fan/metrics").json()
    assert after["revision"] == 1
    assert after["metrics"]["completeness"]["fraction"] == "1"
    assert after["metrics"]["laconicity"]["fraction"] == "1"


def test_service_metrics_bytes_equal_cli_json(client, workspace, capsys):
    for project_id in ("fan", "identity", "bijection", "two-schemes",
                       "empty-mapping"):
        response = client.get(f"/api/projects/{project_id}/metrics")
        assert response.status_code == 200
        code = run(["metrics", str(workspace / "projects" / f"{project_id}.json"),
                    "--format", "json"])
        cli_bytes = capsys.readouterr().out.encode("utf-8")
        assert response.content == cli_bytes, project_id


def test_concurrent_commits_have_gap_free_revisions(client):
    commits = 40
    achieved: list[int] = []
    lock = threading.Lock()

    def commit(worker: int):
        triples = [("c1", "prev-basic", "d1")] if worker % 2 else []
        body = mapping_body("fan", triples)
        while True:
            current = client.get("/api/projects/fan").json()["project"]["revision"]
            response = client.put("/api/projects/fan/mapping", json=body,
                                  headers={"X-Expected-Revision": str(current)})
            if response.status_code == 200:
                with lock:
                    achieved.append(response.json()["revision"])
                return
            assert response.status_code == 409

    threads = [threading.Thread(target=commit, args=(i,)) for i in range(commits)]
    for thread in threads:
        thread.start()
    for thread in threads:
        thread.join()
    assert sorted(achieved) == list(range(1, commits + 1))


# --- advisory locks -----------------------------------------------------------

def test_lock_lifecycle(client):
    assert client.get("/api/projects/fan/lock").json() == {
        "locked": False, "holder": None}
    acquired = client.post("/api/projects/fan/lock",
                           json={"client": "alice", "ttlSeconds": 60})
    assert acquired.status_code == 200
    conflict = client.post("/api/projects/fan/lock", json={"client": "bob"})
    assert conflict.status_code == 409
    assert conflict.json()["details"]["holder"] == "alice"
    # renewal by the same holder is fine
    assert client.post("/api/projects/fan/lock",
                       json={"client": "alice"}).status_code == 200
    denied = client.delete("/api/projects/fan/lock", params={"client": "bob"})
    assert denied.status_code == 409
    released = client.delete("/api/projects/fan/lock", params={"client": "alice"})
    assert released.status_code == 200
    assert client.get("/api/projects/fan/lock").json()["locked"] is False


def test_expired_lock_is_reclaimable(client, monkeypatch):
    import taxunify.service as service_module

    clock = {"now": 1000.0}
    monkeypatch.setattr(service_module.time, "monotonic", lambda: clock["now"])
    assert client.post("/api/projects/fan/lock",
                       json={"client": "alice", "ttlSeconds": 10}).status_code == 200
    clock["now"] += 11
    taken = client.post("/api/projects/fan/lock", json={"client": "bob"})
    assert taken.status_code == 200
    assert taken.json()["holder"] == "bob"


def test_locks_do_not_gate_writes(client):
    assert client.post("/api/projects/fan/lock",
                       json={"client": "alice"}).status_code == 200
    response = client.put("/api/projects/fan/mapping",
                          json=mapping_body("fan", []),
                          headers={"X-Expected-Revision": "0"})
    assert response.status_code == 200  # advisory only


# --- shared secret --------------------------------------------------------------

def test_shared_secret_guard(workspace):
    with TestClient(create_app(workspace, secret="hunter2")) as client:
        assert client.get("/api/health").status_code == 200  # exempt
        assert client.get("/api/projects").status_code == 401
        ok = client.get("/api/projects", headers={"X-Taxunify-Secret": "hunter2"})
        assert ok.status_code == 200


# --- serving the workbench UI ----------------------------------------------------

def test_ui_mount_serves_page_and_bundle(workspace, tmp_path):
    ui = tmp_path / "ui"
    (ui / "dist").mkdir(parents=True)
    (ui / "index.html").write_text("<!doctype html><div id=app></div>")
    (ui / "dist" / "main.js").write_text("export {};")
    with TestClient(create_app(workspace, ui_dir=ui)) as client:
        page = client.get("/")
        assert page.status_code == 200
        assert "id=app" in page.text
        bundle = client.get("/dist/main.js")
        assert bundle.status_code == 200
        # API still lives alongside the static mount
        assert client.get("/api/health").status_code == 200


def test_secret_does_not_block_ui_assets(workspace, tmp_path):
    ui = tmp_path / "ui"
    (ui / "dist").mkdir(parents=True)
    (ui / "index.html").write_text("<!doctype html>")
    (ui / "dist" / "main.js").write_text("export {};")
    with TestClient(create_app(workspace, secret="s3cret", ui_dir=ui)) as client:
        assert client.get("/").status_code == 200
        assert client.get("/dist/main.js").status_code == 200
        assert client.get("/api/projects").status_code == 401
