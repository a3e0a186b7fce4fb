"""HTTP service exposing projects, mappings, and on-demand metrics.

A localhost research tool: workspace-scoped, unauthenticated unless a shared
secret is configured, single process. Writes are serialized per project and
guarded by optimistic concurrency (the X-Expected-Revision header), so the
persisted revision sequence has no gaps or duplicates. Metric responses are
rendered through the same canonical builders as the CLI and are byte-equal
to ``taxunify metrics --format json`` on the same data.
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.responses import FileResponse
from fastapi.staticfiles import StaticFiles

from .canonical import canonical_json_bytes
from .catalog import (
    Project,
    Workspace,
    mapping_document,
    parse_mapping_document,
    project_document,
    save_project,
    scheme_document,
)
from .errors import MetricDomainError, ParseError, TaxunifyError
from .metrics import metric_report
from .model import MappingSet, validate_mapping, validate_project
from .reports import error_document, metric_report_document, violation_document

DEFAULT_LOCK_TTL_SECONDS = 300


@dataclass
class ProjectSession:
    """Advisory edit lock: a UI hint, not a write gate. At most one active
    holder per project; expired locks are reclaimable by anyone."""

    project_id: str
    holder: str
    expires_at: float  # time.monotonic deadline

    def expired(self) -> bool:
        return time.monotonic() >= self.expires_at


class RevisionConflict(Exception):
    def __init__(self, current: int, expected: int):
        super().__init__(f"expected revision {expected}, current is {current}")
        self.current = current
        self.expected = expected


class MappingRejected(Exception):
    def __init__(self, violations):
        super().__init__("mapping failed validation")
        self.violations = violations


class ProjectStore:
    """In-memory view of the workspace plus per-project write serialization.

    The files stay the system of record: every accepted write is persisted
    atomically before the new revision becomes visible.
    """

    def __init__(self, root: Path):
        self.workspace = Workspace.scan(root)
        self._guard = threading.Lock()
        self._write_locks: dict[str, threading.Lock] = {}
        self._sessions: dict[str, ProjectSession] = {}

    def _write_lock(self, project_id: str) -> threading.Lock:
        with self._guard:
            if project_id not in self._write_locks:
                self._write_locks[project_id] = threading.Lock()
            return self._write_locks[project_id]

    def project(self, project_id: str) -> Project | None:
        return self.workspace.projects.get(project_id)

    def project_ids(self) -> list[str]:
        return sorted(self.workspace.projects)

    def put_mapping(self, project_id: str, mapping: MappingSet,
                    expected_revision: int) -> Project:
        with self._write_lock(project_id):
            current = self.workspace.projects[project_id]
            if current.revision != expected_revision:
                raise RevisionConflict(current.revision, expected_revision)
            violations = self._mapping_violations(current, mapping)
            if violations:
                raise MappingRejected(violations)
            updated = current.with_mapping(
                MappingSet.from_pairs(project_id, mapping.pairs))
            path = self.workspace.project_paths.get(project_id)
            if path is None:
                path = self.workspace.root / "projects" / f"{project_id}.json"
                path.parent.mkdir(parents=True, exist_ok=True)
                self.workspace.project_paths[project_id] = path
            save_project(updated, path)
            self.workspace.projects[project_id] = updated
            return updated

    def _mapping_violations(self, project: Project, mapping: MappingSet):
        from .model import Violation

        violations = []
        if mapping.project_id and mapping.project_id != project.id:
            violations.append(Violation.make(
                "ProjectIdMismatch",
                f"mapping is for project {mapping.project_id!r}, "
                f"not {project.id!r}",
                project_id=project.id, mapping_project_id=mapping.project_id))
        try:
            unified, previous = self.workspace.resolve(project)
        except TaxunifyError:
            violations.append(Violation.make(
                "MissingScheme", "project schemes are not resolvable in this workspace",
                project_id=project.id))
            return violations
        violations.extend(
            validate_mapping(unified, previous, mapping.pairs).violations)
        return violations

    # advisory sessions ------------------------------------------------------

    def lock_state(self, project_id: str) -> ProjectSession | None:
        with self._guard:
            session = self._sessions.get(project_id)
            if session is not None and session.expired():
                del self._sessions[project_id]
                return None
            return session

    def acquire_lock(self, project_id: str, holder: str,
                     ttl_seconds: int) -> ProjectSession | None:
        """The new session, or None if another unexpired holder has it."""
        with self._guard:
            session = self._sessions.get(project_id)
            if session is not None and not session.expired() and session.holder != holder:
                return None
            session = ProjectSession(project_id=project_id, holder=holder,
                                     expires_at=time.monotonic() + ttl_seconds)
            self._sessions[project_id] = session
            return session

    def release_lock(self, project_id: str, holder: str) -> bool:
        with self._guard:
            session = self._sessions.get(project_id)
            if session is None or session.expired():
                self._sessions.pop(project_id, None)
                return True
            if session.holder != holder:
                return False
            del self._sessions[project_id]
            return True


def _json_response(document: dict, status_code: int = 200) -> Response:
    return Response(content=canonical_json_bytes(document), status_code=status_code,
                    media_type="application/json")


def _error(status_code: int, code: str, message: str, **details) -> Response:
    return _json_response(error_document(code, message, **details), status_code)


def create_app(workspace: str | Path, secret: str | None = None,
               ui_dir: str | Path | None = None) -> FastAPI:
    store = ProjectStore(Path(workspace))
    app = FastAPI(title="taxunify service", docs_url=None, redoc_url=None)
    app.state.store = store

    if secret is not None:
        @app.middleware("http")
        async def check_secret(request: Request, call_next):
            path = request.url.path
            guarded = path.startswith("/api/") and path != "/api/health"
            if guarded and request.headers.get("X-Taxunify-Secret") != secret:
                return _error(401, "Unauthorized", "missing or wrong shared secret")
            return await call_next(request)

    if ui_dir is not None:
        ui_dir = Path(ui_dir)

        @app.get("/")
        def workbench_page() -> FileResponse:
            return FileResponse(ui_dir / "index.html")

        app.mount("/dist", StaticFiles(directory=ui_dir / "dist"), name="ui")

    @app.get("/api/health")
    def health() -> Response:
        return _json_response({"status": "ok"})

    @app.get("/api/projects")
    def list_projects() -> Response:
        summaries = []
        for project_id in store.project_ids():
            project = store.project(project_id)
            summaries.append({
                "id": project.id,
                "revision": project.revision,
                "unifiedSchemeId": project.unified_scheme_id,
                "previousSchemeIds": list(project.previous_scheme_ids),
                "pairCount": len(project.mapping.pairs),
            })
        return _json_response({"projects": summaries})

    @app.get("/api/projects/{project_id}")
    def get_project(project_id: str) -> Response:
        project = store.project(project_id)
        if project is None:
            return _error(404, "UnknownProject", f"no project {project_id!r}")
        try:
            unified, previous = store.workspace.resolve(project)
        except TaxunifyError as exc:
            return _error(422, "ReferentialViolation", str(exc))
        schemes = {scheme.id: scheme_document(scheme)
                   for scheme in [unified, *previous]}
        return _json_response({
            "project": project_document(project),
            "schemes": schemes,
        })

    @app.get("/api/projects/{project_id}/mapping")
    def get_mapping(project_id: str) -> Response:
        project = store.project(project_id)
        if project is None:
            return _error(404, "UnknownProject", f"no project {project_id!r}")
        document = mapping_document(project.mapping)
        document["projectId"] = project.id
        document["revision"] = project.revision
        return _json_response(document)

    @app.put("/api/projects/{project_id}/mapping")
    async def put_mapping(project_id: str, request: Request) -> Response:
        project = store.project(project_id)
        if project is None:
            return _error(404, "UnknownProject", f"no project {project_id!r}")
        raw_revision = request.headers.get("X-Expected-Revision")
        if raw_revision is None:
            return _error(400, "MissingRevisionHeader",
                          "optimistic concurrency requires the "
                          "X-Expected-Revision header")
        try:
            expected_revision = int(raw_revision)
        except ValueError:
            return _error(400, "BadRevisionHeader",
                          f"X-Expected-Revision must be an integer, "
                          f"got {raw_revision!r}")
        body = await request.body()
        try:
            document = json.loads(body)
            if not isinstance(document, dict):
                raise ParseError("mapping body must be a JSON object")
            mapping = parse_mapping_document(document, where="<request body>")
        except (json.JSONDecodeError, ParseError) as exc:
            return _error(400, "ParseError", str(exc))

        try:
            updated = store.put_mapping(project_id, mapping, expected_revision)
        except RevisionConflict as exc:
            return _error(409, "RevisionConflict", str(exc),
                          current=exc.current, expected=exc.expected)
        except MappingRejected as exc:
            return _json_response({
                "error": "ReferentialViolation",
                "message": "mapping failed validation",
                "violations": [violation_document(v) for v in exc.violations],
            }, status_code=422)
        return _json_response({"projectId": project_id, "revision": updated.revision})

    @app.get("/api/projects/{project_id}/metrics")
    def get_metrics(project_id: str) -> Response:
        project = store.project(project_id)
        if project is None:
            return _error(404, "UnknownProject", f"no project {project_id!r}")
        try:
            unified, previous = store.workspace.resolve(project)
        except TaxunifyError as exc:
            return _error(422, "ReferentialViolation", str(exc))
        outcome = validate_project(unified, previous, project.mapping.pairs)
        if not outcome.ok:
            return _json_response({
                "error": "InvalidProject",
                "message": "project fails validation",
                "violations": [violation_document(v) for v in outcome.violations],
            }, status_code=422)
        try:
            report = metric_report(unified, previous, project.mapping,
                                   project.thresholds)
        except MetricDomainError as exc:
            return _error(422, type(exc).__name__.removesuffix("Error"), str(exc))
        return _json_response(metric_report_document(project, report))

    @app.get("/api/projects/{project_id}/lock")
    def get_lock(project_id: str) -> Response:
        if store.project(project_id) is None:
            return _error(404, "UnknownProject", f"no project {project_id!r}")
        session = store.lock_state(project_id)
        if session is None:
            return _json_response({"locked": False, "holder": None})
        return _json_response({"locked": True, "holder": session.holder})

    @app.post("/api/projects/{project_id}/lock")
    async def acquire_lock(project_id: str, request: Request) -> Response:
        if store.project(project_id) is None:
            return _error(404, "UnknownProject", f"no project {project_id!r}")
        try:
            document = json.loads(await request.body())
            holder = document["client"]
            if not isinstance(holder, str) or not holder:
                raise KeyError("client")
            ttl = document.get("ttlSeconds", DEFAULT_LOCK_TTL_SECONDS)
            if not isinstance(ttl, int) or ttl <= 0:
                return _error(400, "ParseError", "ttlSeconds must be a positive integer")
        except (json.JSONDecodeError, KeyError, TypeError):
            return _error(400, "ParseError",
                          'lock body must be {"client": "...", "ttlSeconds"?: n}')
        session = store.acquire_lock(project_id, holder, ttl)
        if session is None:
            current = store.lock_state(project_id)
            return _error(409, "LockHeld", "another client holds the edit lock",
                          holder=current.holder if current else None)
        return _json_response({"locked": True, "holder": session.holder,
                               "ttlSeconds": ttl})

    @app.delete("/api/projects/{project_id}/lock")
    def release_lock(project_id: str, client: str = "") -> Response:
        if store.project(project_id) is None:
            return _error(404, "UnknownProject", f"no project {project_id!r}")
        if store.release_lock(project_id, client):
            return _json_response({"locked": False, "holder": None})
        return _error(409, "LockHeld", "lock is held by a different client")

    return app
