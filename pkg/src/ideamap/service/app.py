"""HTTP API over the runtime.

JSON in, JSON out; request bodies are plain dicts validated by the domain
layer so that every failure maps onto the documented status codes.
"""
from __future__ import annotations

from typing import Any

from fastapi import Body, FastAPI, Query, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .. import errors as E
from .runtime import Runtime

# Most-derived classes first is not required: the handler walks the MRO.
ERROR_STATUS = {
    E.UnknownFlow: 404,
    E.UnknownNode: 404,
    E.UnknownParent: 404,
    E.UnknownAuthor: 404,
    E.RateLimited: 429,
    E.TransientProviderError: 502,
    E.ProviderUnavailable: 502,
    E.UpstreamError: 502,
    E.ClassifierUnavailable: 502,
    E.MalformedPayload: 502,
    E.ArityViolation: 502,
    E.SchemaViolation: 502,
    E.ContractViolation: 502,
    E.IdeamapError: 400,
}


def status_for(exc: E.IdeamapError) -> int:
    for klass in type(exc).__mro__:
        if klass in ERROR_STATUS:
            return ERROR_STATUS[klass]
    return 400


def _edit_event_dict(event) -> dict:
    return {
        "node": event.node,
        "field_path": event.field_path,
        "old_value": event.old_value,
        "new_value": event.new_value,
        "timestamp": event.timestamp,
    }


def _rating_dict(rating) -> dict:
    return {
        "node": rating.node,
        "dimensions": dict(rating.dimensions),
        "submitted_at": rating.submitted_at,
    }


def _require(body: dict, key: str) -> Any:
    if not isinstance(body, dict) or key not in body:
        raise E.PreconditionError(f"request body must include {key!r}")
    return body[key]


def create_app(runtime: Runtime) -> FastAPI:
    app = FastAPI(title="ideamap", docs_url=None, redoc_url=None)
    app.state.runtime = runtime

    if runtime.config.cors_origins:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=list(runtime.config.cors_origins),
            allow_methods=["*"],
            allow_headers=["authorization", "content-type"],
        )

    @app.exception_handler(E.IdeamapError)
    async def domain_error(request: Request, exc: E.IdeamapError):
        return JSONResponse(
            status_code=status_for(exc),
            content={"error": type(exc).__name__, "detail": str(exc)},
        )

    @app.exception_handler(RequestValidationError)
    async def body_error(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"error": "PreconditionError", "detail": "invalid request body"},
        )

    @app.middleware("http")
    async def check_auth(request: Request, call_next):
        token = runtime.config.auth_token
        if token and request.url.path != "/health":
            supplied = request.headers.get("authorization", "")
            if supplied != f"Bearer {token}":
                return JSONResponse(status_code=401, content={"error": "Unauthorized", "detail": "missing or invalid bearer token"})
        return await call_next(request)

    @app.get("/health")
    def health():
        return {"status": "ok"}

    # -- flows ---------------------------------------------------------------

    @app.get("/flows")
    def list_flows():
        return runtime.store.flow_ids()

    @app.post("/flows", status_code=201)
    def create_flow():
        return {"flow_id": runtime.create_flow()}

    @app.get("/flows/{flow_id}")
    def get_flow(flow_id: str):
        return runtime.store.document(flow_id)

    @app.delete("/flows/{flow_id}", status_code=204)
    def delete_flow(flow_id: str):
        runtime.delete_flow(flow_id)
        return Response(status_code=204)

    @app.get("/flows/{flow_id}/export")
    def export_flow(flow_id: str):
        # Raw canonical string so exported bytes are stable across transports.
        return Response(content=runtime.store.snapshot(flow_id), media_type="application/json")

    @app.post("/flows/import", status_code=201)
    def import_flow(document: dict = Body(...)):
        return {"flow_id": runtime.import_flow(document)}

    @app.get("/flows/{flow_id}/metrics")
    def metrics(flow_id: str):
        return runtime.store.compute_metrics(flow_id)

    # -- nodes ----------------------------------------------------------------

    @app.post("/flows/{flow_id}/nodes", status_code=201)
    def add_node(flow_id: str, body: dict = Body(...)):
        kind = _require(body, "kind")
        payload = _require(body, "payload")
        node_id = runtime.store.add_node(
            flow_id,
            kind,
            payload,
            parent=body.get("parent"),
            origin=body.get("origin", "manual"),
        )
        runtime.persist(flow_id)
        return runtime.node_dict(flow_id, node_id)

    @app.get("/flows/{flow_id}/nodes/{node_id}")
    def get_node(flow_id: str, node_id: str):
        return runtime.node_dict(flow_id, node_id)

    @app.patch("/flows/{flow_id}/nodes/{node_id}")
    def edit_node(flow_id: str, node_id: str, body: dict = Body(...)):
        field_path = _require(body, "field_path")
        value = _require(body, "value")
        event = runtime.store.edit_node(flow_id, node_id, field_path, value)
        runtime.persist(flow_id)
        return _edit_event_dict(event)

    @app.delete("/flows/{flow_id}/nodes/{node_id}", status_code=204)
    def delete_node(flow_id: str, node_id: str):
        runtime.store.delete_node(flow_id, node_id)
        runtime.persist(flow_id)
        return Response(status_code=204)

    @app.post("/flows/{flow_id}/nodes/{node_id}/connect", status_code=201)
    def connect(flow_id: str, node_id: str, body: dict = Body(...)):
        target = _require(body, "target")
        runtime.store.connect(flow_id, node_id, target)
        runtime.persist(flow_id)
        return {"source": node_id, "target": target}

    @app.post("/flows/{flow_id}/nodes/{node_id}/ratings", status_code=201)
    def rate_node(flow_id: str, node_id: str, body: dict = Body(...)):
        dimensions = _require(body, "dimensions")
        rating = runtime.store.record_rating(flow_id, node_id, dimensions)
        runtime.persist(flow_id)
        return _rating_dict(rating)

    # -- generation -------------------------------------------------------------

    @app.post("/flows/{flow_id}/nodes/{node_id}/generate", status_code=201)
    def generate(flow_id: str, node_id: str, response: Response, body: dict | None = Body(None)):
        body = body or {}
        target_kind = body.get("target_kind")
        options = body.get("options") or {}
        if runtime.config.async_generation:
            job_id = runtime.submit_job(runtime.generate, flow_id, node_id, target_kind, options)
            response.status_code = 202
            return {"job_id": job_id}
        created = runtime.generate(flow_id, node_id, target_kind, options)
        return [runtime.node_dict(flow_id, nid) for nid in created]

    @app.get("/jobs/{job_id}")
    def job_state(job_id: str):
        state = runtime.job_state(job_id)
        if state is None:
            return JSONResponse(
                status_code=404,
                content={"error": "UnknownJob", "detail": f"no job {job_id}"},
            )
        return state

    # -- outline --------------------------------------------------------------

    @app.post("/flows/{flow_id}/nodes/{node_id}/outline", status_code=201)
    def build_outline(flow_id: str, node_id: str, body: dict | None = Body(None)):
        scenario = (body or {}).get("scenario")
        return runtime.generate_outline(flow_id, node_id, scenario)

    @app.get("/flows/{flow_id}/nodes/{node_id}/outline")
    def get_outline(flow_id: str, node_id: str):
        panel = runtime.store.get_panel(flow_id, node_id)
        if panel is None:
            raise E.UnknownNode(f"node {node_id} has no outline panel yet")
        return panel

    # -- paper search ------------------------------------------------------------

    @app.get("/flows/{flow_id}/nodes/{node_id}/papers/search")
    def paper_search(flow_id: str, node_id: str, q: str = Query(...), limit: int = Query(20)):
        runtime.store.get(flow_id).node(node_id)
        papers = runtime.scholar.search(q, limit=limit)
        return [p.to_dict() for p in papers]

    return app


def create_default_app() -> FastAPI:
    """Uvicorn-friendly factory using environment-driven configuration."""
    from .config import Config

    return create_app(Runtime(Config().apply_env()))
