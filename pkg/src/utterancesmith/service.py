"""REST service for the human-in-the-loop flow.

Upload a spec, inspect extracted operations, generate candidates, review
them, train, probe the classifier, export the result.  Domain errors map to
4xx with ``{"error": code, "detail": text}``; backend outages map to 502.
POST endpoints are idempotent under retry when the client sends the same
``X-Request-Id`` header.
"""

from __future__ import annotations

from collections import OrderedDict
from pathlib import Path
from threading import Lock
from typing import Optional

from fastapi import FastAPI, Query, Request, Response
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .errors import UtteranceSmithError
from .generation import CandidateSentence, GeneratorSpec
from .selection import SelectionConfig
from .store import ProjectStore

_STATUS_BY_CODE = {
    "project_not_found": 404,
    "unknown_candidate": 404,
    "no_model": 409,
    "too_few_intents": 409,
    "no_seeds": 409,
    "empty_intent": 409,
    "malformed_document": 400,
    "unsupported_version": 400,
    "decode_error": 400,
    "empty_text": 400,
    "unknown_intent_in_test": 400,
    "all_backends_failed": 502,
    "backend_unreachable": 502,
    "backend_timeout": 502,
    "malformed_response": 502,
    "store_unwritable": 500,
}

_IDEMPOTENCY_CACHE_SIZE = 1024


class CreateProjectBody(BaseModel):
    name: str


class GenerateBody(BaseModel):
    operations: Optional[list[str]] = None
    generators: Optional[list[dict]] = None
    selection: Optional[dict] = None
    include_filtered: bool = False


class ReviewDecisionBody(BaseModel):
    candidate_id: str
    decision: str
    actor: str = "anonymous"


class ReviewBody(BaseModel):
    decisions: list[ReviewDecisionBody] = Field(default_factory=list)


class EditBody(BaseModel):
    intent_id: str
    text: str
    seed_text: str = ""
    actor: str = "anonymous"


class ClassifyBody(BaseModel):
    text: str


def create_app(
    store: ProjectStore | None = None,
    store_dir: str | None = None,
    static_dir: str | None = None,
) -> FastAPI:
    store = store or ProjectStore(store_dir)
    app = FastAPI(title="utterancesmith", docs_url=None, redoc_url=None)
    app.state.store = store
    app.state.idempotency_cache = OrderedDict()
    app.state.idempotency_lock = Lock()

    @app.exception_handler(UtteranceSmithError)
    async def _domain_error(_request: Request, exc: UtteranceSmithError):
        status = _STATUS_BY_CODE.get(exc.code, 400)
        return JSONResponse(
            status_code=status, content={"error": exc.code, "detail": exc.detail}
        )

    @app.exception_handler(ValueError)
    async def _value_error(_request: Request, exc: ValueError):
        return JSONResponse(
            status_code=400, content={"error": "invalid_request", "detail": str(exc)}
        )

    @app.middleware("http")
    async def _idempotency(request: Request, call_next):
        request_id = request.headers.get("x-request-id")
        if request.method != "POST" or not request_id:
            return await call_next(request)
        key = (request.url.path, request_id)
        with app.state.idempotency_lock:
            cached = app.state.idempotency_cache.get(key)
        if cached is not None:
            status, body, media_type = cached
            return Response(content=body, status_code=status, media_type=media_type)
        response = await call_next(request)
        body = b"".join([chunk async for chunk in response.body_iterator])
        with app.state.idempotency_lock:
            cache = app.state.idempotency_cache
            cache[key] = (response.status_code, body, response.media_type)
            while len(cache) > _IDEMPOTENCY_CACHE_SIZE:
                cache.popitem(last=False)
        return Response(
            content=body,
            status_code=response.status_code,
            media_type=response.media_type,
            headers=dict(response.headers),
        )

    @app.get("/api/projects")
    def list_projects():
        return {"projects": store.list_projects()}

    @app.post("/api/projects")
    def create_project(body: CreateProjectBody):
        return store.create_project(body.name)

    @app.get("/api/projects/{project_id}")
    def get_project(project_id: str):
        return store.get_project(project_id)

    @app.post("/api/projects/{project_id}/spec")
    async def ingest_spec(project_id: str, request: Request):
        raw = await request.body()
        content_type = request.headers.get("content-type", "")
        hint = "json" if "json" in content_type else "auto"
        return store.ingest_spec(project_id, raw, format_hint=hint)

    @app.get("/api/projects/{project_id}/operations")
    def operations(project_id: str):
        return {"operations": store.operations(project_id)}

    @app.post("/api/projects/{project_id}/generate")
    def generate(project_id: str, body: GenerateBody):
        generators = None
        if body.generators:
            generators = [GeneratorSpec.from_dict(g) for g in body.generators]
        selection = SelectionConfig.from_dict(body.selection) if body.selection else None
        return store.generate(
            project_id,
            operations_filter=body.operations,
            generators=generators,
            selection=selection,
            include_filtered=body.include_filtered,
        )

    @app.get("/api/projects/{project_id}/candidates")
    def candidates(
        project_id: str,
        operation: Optional[str] = Query(default=None),
        status: Optional[str] = Query(default=None),
    ):
        return {"candidates": store.candidates(project_id, operation, status)}

    @app.post("/api/projects/{project_id}/review")
    def review(project_id: str, body: ReviewBody):
        decisions = [d.model_dump() for d in body.decisions]
        return store.record_review(project_id, decisions)

    @app.post("/api/projects/{project_id}/candidates")
    def add_candidate(project_id: str, body: EditBody):
        candidate = CandidateSentence(
            text=body.text,
            generator_id=f"human:{body.actor}",
            seed_text=body.seed_text or body.text,
            intent_id=body.intent_id,
        )
        return store.add_candidate(project_id, candidate, status="accepted")

    @app.post("/api/projects/{project_id}/train")
    def train_project(project_id: str):
        return store.train_model(project_id)

    @app.post("/api/projects/{project_id}/classify")
    def classify(project_id: str, body: ClassifyBody):
        return store.classify(project_id, body.text)

    @app.get("/api/projects/{project_id}/export")
    def export(project_id: str, format: str = Query(default="skill")):
        if format == "skill":
            return store.export_skill(project_id)
        if format == "csv":
            return PlainTextResponse(
                store.export_csv(project_id), media_type="text/csv"
            )
        raise ValueError(f"unknown export format {format!r}")

    if static_dir and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app


def serve(
    store_dir: str | None = None,
    host: str = "127.0.0.1",
    port: int = 8000,
    static_dir: str | None = None,
) -> None:
    import uvicorn

    uvicorn.run(
        create_app(store_dir=store_dir, static_dir=static_dir), host=host, port=port
    )
