"""Read-only HTTP API serving one snapshot at a time.

Every handler dereferences the snapshot exactly once, so a response is
always computed against a single build even while a re-index swaps the
reference underneath. Responses carry the snapshot's content tag in the
X-Snapshot-Tag header, which is what the swap tests key on.

Error bodies follow the problem-detail convention: a JSON object with
type, title, status and detail, served as application/problem+json.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from starlette.exceptions import HTTPException as StarletteHTTPException
from starlette.staticfiles import StaticFiles

from .snapshot import Snapshot

DEFAULT_PAGE_LIMIT = 100
MAX_PAGE_LIMIT = 1000


class SnapshotRef:
    """Mutable handle around an immutable snapshot.

    Reading and swapping are single attribute operations, which CPython
    performs atomically; readers see either the old snapshot or the new
    one, never a mix.
    """

    def __init__(self, snapshot: Snapshot):
        self._snapshot = snapshot

    @property
    def current(self) -> Snapshot:
        return self._snapshot

    def swap(self, snapshot: Snapshot) -> None:
        self._snapshot = snapshot


def _problem(status: int, title: str, detail: str, tag: str | None = None) -> JSONResponse:
    headers = {"X-Snapshot-Tag": tag} if tag else {}
    return JSONResponse(
        {"type": "about:blank", "title": title, "status": status, "detail": detail},
        status_code=status,
        media_type="application/problem+json",
        headers=headers,
    )


def _payload(snapshot: Snapshot, body) -> JSONResponse:
    return JSONResponse(body, headers={"X-Snapshot-Tag": snapshot.tag})


def create_app(ref: SnapshotRef, ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="conference index", docs_url=None, redoc_url=None, openapi_url=None)

    @app.exception_handler(RequestValidationError)
    async def on_bad_request(request: Request, exc: RequestValidationError):
        first = exc.errors()[0] if exc.errors() else {}
        where = ".".join(str(p) for p in first.get("loc", ()))
        detail = f"{where}: {first.get('msg', 'invalid value')}" if where else "invalid request"
        return _problem(400, "Bad Request", detail)

    @app.exception_handler(StarletteHTTPException)
    async def on_http_error(request: Request, exc: StarletteHTTPException):
        return _problem(exc.status_code, "Not Found" if exc.status_code == 404 else "Error",
                        str(exc.detail))

    @app.get("/areas")
    def list_areas():
        snapshot = ref.current
        return _payload(snapshot, list(snapshot.areas))

    @app.get("/areas/{area_id}/conferences")
    def area_conferences(area_id: str):
        snapshot = ref.current
        if area_id not in snapshot.area_ids():
            return _problem(404, "Not Found", f"unknown area {area_id!r}", snapshot.tag)
        return _payload(snapshot, list(snapshot.conferences.get(area_id, ())))

    @app.get("/areas/{area_id}/departments")
    def area_departments(area_id: str):
        snapshot = ref.current
        if area_id not in snapshot.area_ids():
            return _problem(404, "Not Found", f"unknown area {area_id!r}", snapshot.tag)
        return _payload(snapshot, list(snapshot.departments.get(area_id, ())))

    @app.get("/areas/{area_id}/papers")
    def area_papers(
        area_id: str,
        offset: int = Query(0, ge=0),
        limit: int = Query(DEFAULT_PAGE_LIMIT, ge=1, le=MAX_PAGE_LIMIT),
    ):
        snapshot = ref.current
        if area_id not in snapshot.area_ids():
            return _problem(404, "Not Found", f"unknown area {area_id!r}", snapshot.tag)
        rows = snapshot.papers_by_area.get(area_id, ())
        return _payload(snapshot, {
            "area_id": area_id,
            "total": len(rows),
            "offset": offset,
            "limit": limit,
            "papers": list(rows[offset:offset + limit]),
        })

    @app.get("/departments/{dept_id}")
    def department_detail(dept_id: str):
        snapshot = ref.current
        detail = snapshot.department_details.get(dept_id)
        if detail is None:
            return _problem(404, "Not Found", f"unknown department {dept_id!r}", snapshot.tag)
        return _payload(snapshot, detail)

    @app.get("/professors/{researcher_id}/papers")
    def professor_papers(researcher_id: str):
        snapshot = ref.current
        doc = snapshot.professors.get(researcher_id)
        if doc is None:
            return _problem(404, "Not Found", f"unknown professor {researcher_id!r}", snapshot.tag)
        return _payload(snapshot, doc)

    @app.get("/meta")
    def meta():
        snapshot = ref.current
        return _payload(snapshot, snapshot.meta())

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


__all__ = ["SnapshotRef", "create_app", "DEFAULT_PAGE_LIMIT", "MAX_PAGE_LIMIT"]
