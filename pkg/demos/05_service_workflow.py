"""The mapping workbench service, exercised end to end in process.

The service is what the browser workbench talks to: read a project with its
schemes, commit a mapping under optimistic concurrency, and fetch metrics
recomputed at the new revision. This demo drives it through the ASGI test
client, so nothing binds a port; `taxunify serve --workspace DIR` runs the
same app for real.
"""

import shutil
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from taxunify.service import create_app

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

with tempfile.TemporaryDirectory() as directory:
    workspace = Path(directory) / "workspace"
    shutil.copytree(FIXTURES / "workspace", workspace)

    with TestClient(create_app(workspace)) as client:
        projects = client.get("/api/projects").json()["projects"]
        print("projects:", ", ".join(p["id"] for p in projects))

        fan = client.get("/api/projects/fan").json()
        revision = fan["project"]["revision"]
        print(f"fan at revision {revision} with "
              f"{len(fan['project']['mapping']['pairs'])} pairs")

        before = client.get("/api/projects/fan/metrics").json()
        print("completeness before:",
              before["metrics"]["completeness"]["fraction"])

        # Cover d3 as well; the commit must name the revision it saw.
        body = {
            "schemaVersion": 1, "kind": "mapping", "projectId": "fan",
            "pairs": fan["project"]["mapping"]["pairs"] + [
                {"unifiedNodeId": "c2", "previousSchemeId": "prev-basic",
                 "previousNodeId": "d3"}],
        }
        accepted = client.put("/api/projects/fan/mapping", json=body,
                              headers={"X-Expected-Revision": str(revision)})
        print("commit:", accepted.status_code, accepted.json())

        # A second writer with the stale revision is turned away.
        stale = client.put("/api/projects/fan/mapping", json=body,
                           headers={"X-Expected-Revision": str(revision)})
        print("stale commit:", stale.status_code,
              stale.json()["error"])

        after = client.get("/api/projects/fan/metrics").json()
        print("completeness after:",
              after["metrics"]["completeness"]["fraction"])
        print("advice now:",
              [advice["kind"] for advice in after["advice"]])
