"""Application factory: wires the store, execution, sharing, and metrics
behind the management API and the embedded TAXII server."""

from __future__ import annotations

import json
import logging
from contextlib import asynccontextmanager
from pathlib import Path
from typing import Any

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from starlette.exceptions import HTTPException as StarletteHTTPException
from starlette.staticfiles import StaticFiles

from cacao_kms import __version__
from cacao_kms.api.config import ServiceConfig
from cacao_kms.api.errors import CODE_TO_STATUS, envelope_response, error_response
from cacao_kms.api.reqlog import RequestLog, RequestLogMiddleware
from cacao_kms.core.model import parse_playbook
from cacao_kms.errors import BadQuery, IdMismatch, KmsError, MalformedJson
from cacao_kms.execution import ExecutionService, MonitorAgent, RemoteExecutor, SimulatorExecutor
from cacao_kms.metrics import compute_kpis
from cacao_kms.sharing import SharingService, TaxiiRepository
from cacao_kms.sharing.taxii import TAXII_MEDIA_TYPE
from cacao_kms.store import DocumentStore, PlaybookStore, SearchQuery
from cacao_kms.store.playbooks import DEFAULT_PAGE_LIMIT, MAX_PAGE_LIMIT

logger = logging.getLogger(__name__)

API_PREFIX = "/api/v1"
TAXII_ROOT = "cti"
FAILURE_INJECTION_HEADER = "X-Simulate-Failure"

REQUEST_LOG_FILE = "request_log.jsonl"


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()

    docs = DocumentStore(config.data_dir)
    playbooks = PlaybookStore(docs)
    repo = TaxiiRepository(docs)
    default_collection_id = repo.ensure_default_collection()
    if config.executor == "remote":
        executor = RemoteExecutor(config.executor_url)
    else:
        executor = SimulatorExecutor()
    executions = ExecutionService(docs, playbooks, executor)
    sharing = SharingService(docs, playbooks, repo)
    monitor = MonitorAgent(executions, poll_interval_ms=config.poll_interval_ms)
    log_path = Path(config.data_dir) / REQUEST_LOG_FILE if config.data_dir else None
    request_log = RequestLog(path=log_path)

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        monitor.start()
        try:
            yield
        finally:
            monitor.stop()
            request_log.close()
            docs.close()

    app = FastAPI(
        title="CACAO Playbook KMS",
        version=__version__,
        lifespan=lifespan,
        docs_url="/api/docs",
        openapi_url="/api/openapi.json",
    )
    app.state.docs = docs
    app.state.playbooks = playbooks
    app.state.taxii = repo
    app.state.sharing = sharing
    app.state.executions = executions
    app.state.monitor = monitor
    app.state.request_log = request_log
    app.state.default_collection_id = default_collection_id

    @app.exception_handler(KmsError)
    async def kms_error_handler(request: Request, exc: KmsError):
        return error_response(exc)

    @app.exception_handler(StarletteHTTPException)
    async def http_error_handler(request: Request, exc: StarletteHTTPException):
        code = {404: "NOT_FOUND", 405: "METHOD_NOT_ALLOWED", 406: "NOT_ACCEPTABLE"}.get(
            exc.status_code, "INTERNAL"
        )
        message = exc.detail if isinstance(exc.detail, str) else "request failed"
        return envelope_response(code, message)

    @app.exception_handler(RequestValidationError)
    async def request_validation_handler(request: Request, exc: RequestValidationError):
        return envelope_response("BAD_QUERY", "malformed request parameters", exc.errors())

    @app.exception_handler(Exception)
    async def unhandled_error_handler(request: Request, exc: Exception):
        logger.exception("unhandled error on %s %s", request.method, request.url.path)
        return envelope_response("INTERNAL", "internal error")

    _management_routes(app)
    _taxii_routes(app)

    @app.get("/config.json", include_in_schema=False)
    async def ui_config():
        return {"apiBase": ""}

    if config.ui_dir is not None and Path(config.ui_dir).is_dir():
        app.mount("/", _SpaStaticFiles(directory=config.ui_dir, html=True), name="ui")

    app.add_middleware(RequestLogMiddleware, log=request_log)
    return app


# -- request plumbing -----------------------------------------------------------


def _require_json(request: Request) -> None:
    content_type = request.headers.get("content-type", "")
    if not content_type.split(";")[0].strip().lower() == "application/json":
        raise _api_error(
            "UNSUPPORTED_MEDIA_TYPE", "management API bodies must be application/json"
        )


async def _json_body(request: Request, optional: bool = False) -> dict[str, Any]:
    raw = await request.body()
    if not raw:
        if optional:
            return {}
        raise MalformedJson("request body is empty")
    _require_json(request)
    try:
        body = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise MalformedJson(f"request body is not valid JSON: {exc}") from exc
    if not isinstance(body, dict):
        raise MalformedJson("request body must be a JSON object")
    return body


def _api_error(code: str, message: str, details: Any = None) -> KmsError:
    error = KmsError(message, details=details)
    error.code = code
    return error


def paginate(params: dict[str, Any]) -> tuple[int, int]:
    """Normalize offset/limit: defaults 0/50, limit clamped to [1, 200],
    negatives rejected."""
    try:
        offset = int(params.get("offset", 0))
        limit = int(params.get("limit", DEFAULT_PAGE_LIMIT))
    except (TypeError, ValueError) as exc:
        raise BadQuery(f"offset/limit must be integers: {exc}") from exc
    if offset < 0 or limit < 0:
        raise BadQuery("offset and limit must be non-negative")
    return offset, min(max(limit, 1), MAX_PAGE_LIMIT)


def _csv(value: str | None) -> list[str] | None:
    if value is None:
        return None
    items = [item.strip() for item in value.split(",") if item.strip()]
    return items or None


def _bool_param(value: str | None, name: str) -> bool | None:
    if value is None:
        return None
    lowered = value.lower()
    if lowered in ("true", "1"):
        return True
    if lowered in ("false", "0"):
        return False
    raise BadQuery(f"{name} must be true or false")


def _int_param(value: str | None, name: str) -> int | None:
    if value is None:
        return None
    try:
        return int(value)
    except ValueError as exc:
        raise BadQuery(f"{name} must be an integer") from exc


# -- management API ---------------------------------------------------------------


def _management_routes(app: FastAPI) -> None:
    state = app.state

    @app.get(f"{API_PREFIX}/healthz")
    @app.get("/healthz")
    async def healthz():
        return {"status": "ok"}

    @app.post(f"{API_PREFIX}/playbooks", status_code=201)
    async def create_playbook(request: Request):
        raw = await request.body()
        if not raw:
            raise MalformedJson("request body is empty")
        _require_json(request)
        playbook = parse_playbook(raw)
        return state.playbooks.save(playbook)

    @app.get(f"{API_PREFIX}/playbooks")
    async def list_playbooks(request: Request):
        params = request.query_params
        offset, limit = paginate(params)
        query = SearchQuery(
            name_contains=params.get("name_contains"),
            labels=_csv(params.get("labels")),
            playbook_types=_csv(params.get("playbook_types")),
            created_by=params.get("created_by"),
            severity_min=_int_param(params.get("severity_min"), "severity_min"),
            severity_max=_int_param(params.get("severity_max"), "severity_max"),
            created_after=params.get("created_after"),
            created_before=params.get("created_before"),
            revoked=_bool_param(params.get("revoked"), "revoked"),
            sort=params.get("sort", "modified_desc"),
            offset=offset,
            limit=limit,
        )
        return state.playbooks.list_current(query)

    @app.get(f"{API_PREFIX}/playbooks/{{playbook_id}}")
    async def get_playbook(playbook_id: str):
        return state.playbooks.get_current(playbook_id)

    @app.put(f"{API_PREFIX}/playbooks/{{playbook_id}}")
    async def put_playbook(playbook_id: str, request: Request):
        raw = await request.body()
        if not raw:
            raise MalformedJson("request body is empty")
        _require_json(request)
        playbook = parse_playbook(raw)
        if playbook.id != playbook_id:
            raise IdMismatch(
                f"body id {playbook.id!r} does not match path id {playbook_id!r}"
            )
        return state.playbooks.save(playbook)

    @app.delete(f"{API_PREFIX}/playbooks/{{playbook_id}}")
    async def delete_playbook(playbook_id: str):
        return state.playbooks.delete(playbook_id)

    @app.get(f"{API_PREFIX}/playbooks/{{playbook_id}}/history")
    async def playbook_history(playbook_id: str):
        history = state.playbooks.get_history(playbook_id)
        return {"items": history, "total": len(history)}

    @app.post(f"{API_PREFIX}/playbooks/{{playbook_id}}/restore")
    async def restore_playbook(playbook_id: str, request: Request):
        body = await _json_body(request)
        revision = body.get("revision")
        if not isinstance(revision, int) or isinstance(revision, bool) or revision < 1:
            raise BadQuery("revision must be a positive integer")
        return state.playbooks.restore_version(playbook_id, revision)

    @app.post(f"{API_PREFIX}/playbooks/{{playbook_id}}/execute", status_code=202)
    async def execute_playbook(playbook_id: str, request: Request):
        injection_header = request.headers.get(FAILURE_INJECTION_HEADER)
        failure_injection = (
            {step.strip(): True for step in injection_header.split(",") if step.strip()}
            if injection_header
            else None
        )
        return state.executions.start_execution(playbook_id, failure_injection)

    @app.get(f"{API_PREFIX}/executions")
    async def list_executions(request: Request):
        params = request.query_params
        offset, limit = paginate(params)
        return state.executions.list_executions(
            playbook_id=params.get("playbook_id"),
            status=params.get("status"),
            offset=offset,
            limit=limit,
        )

    @app.get(f"{API_PREFIX}/executions/{{execution_id}}")
    async def get_execution(execution_id: str):
        return state.executions.get_execution(execution_id)

    @app.post(f"{API_PREFIX}/playbooks/{{playbook_id}}/share", status_code=201)
    async def share_playbook(playbook_id: str, request: Request):
        body = await _json_body(request, optional=True)
        return state.sharing.publish(
            playbook_id,
            collection_id=body.get("collection_id"),
            target=body.get("target", "local"),
        )

    @app.post(f"{API_PREFIX}/sharing/import")
    async def import_playbooks(request: Request):
        body = await _json_body(request, optional=True)
        return state.sharing.import_remote(
            collection_id=body.get("collection_id"),
            source=body.get("source", "local"),
            added_after=body.get("added_after"),
        )

    @app.get(f"{API_PREFIX}/sharing/records")
    async def list_sharing_records(request: Request):
        params = request.query_params
        offset, limit = paginate(params)
        return state.sharing.list_records(
            playbook_id=params.get("playbook_id"),
            direction=params.get("direction"),
            offset=offset,
            limit=limit,
        )

    @app.get(f"{API_PREFIX}/stats")
    async def stats():
        return compute_kpis(state.docs).to_dict()


# -- TAXII 2.1 endpoints -----------------------------------------------------------


def _taxii_response(body: Any, status_code: int = 200) -> JSONResponse:
    return JSONResponse(content=body, status_code=status_code, media_type=TAXII_MEDIA_TYPE)


def _check_taxii_accept(request: Request) -> None:
    accept = request.headers.get("accept")
    if accept is None:
        return
    for part in accept.split(","):
        token = part.split(";", 1)[0].strip().lower()
        params = part.lower()
        if token in ("*/*", "application/*"):
            return
        if token == "application/taxii+json":
            if "version=" not in params or "version=2.1" in params:
                return
    raise _api_error("NOT_ACCEPTABLE", f"cannot serve Accept: {accept}")


def _check_taxii_content_type(request: Request) -> None:
    content_type = request.headers.get("content-type", "")
    token = content_type.split(";", 1)[0].strip().lower()
    if token != "application/taxii+json":
        raise _api_error(
            "UNSUPPORTED_MEDIA_TYPE",
            f"TAXII endpoints require Content-Type {TAXII_MEDIA_TYPE}",
        )
    if "version=" in content_type.lower() and "version=2.1" not in content_type.lower():
        raise _api_error(
            "UNSUPPORTED_MEDIA_TYPE", f"unsupported TAXII version in {content_type!r}"
        )


def _taxii_routes(app: FastAPI) -> None:
    state = app.state

    @app.get("/taxii2/")
    async def discovery(request: Request):
        _check_taxii_accept(request)
        return _taxii_response(
            {"title": "CACAO playbook sharing server", "api_roots": [f"/{TAXII_ROOT}/"]}
        )

    @app.get(f"/{TAXII_ROOT}/collections/")
    async def collections(request: Request):
        _check_taxii_accept(request)
        return _taxii_response({"collections": state.taxii.list_collections()})

    @app.get(f"/{TAXII_ROOT}/collections/{{collection_id}}/")
    async def collection(collection_id: str, request: Request):
        _check_taxii_accept(request)
        return _taxii_response(state.taxii.get_collection(collection_id))

    @app.get(f"/{TAXII_ROOT}/collections/{{collection_id}}/objects/")
    async def get_objects(collection_id: str, request: Request):
        _check_taxii_accept(request)
        params = request.query_params
        limit = _int_param(params.get("limit"), "limit")
        envelope = state.taxii.get_objects(
            collection_id,
            added_after=params.get("added_after"),
            limit=limit,
            next_token=params.get("next"),
        )
        return _taxii_response(envelope)

    @app.post(f"/{TAXII_ROOT}/collections/{{collection_id}}/objects/", status_code=202)
    async def add_objects(collection_id: str, request: Request):
        _check_taxii_accept(request)
        _check_taxii_content_type(request)
        raw = await request.body()
        try:
            body = json.loads(raw) if raw else None
        except json.JSONDecodeError:
            body = None
        if not isinstance(body, dict) or not isinstance(body.get("objects"), list):
            raise _api_error(
                "BAD_ENVELOPE", 'body must be a TAXII envelope: {"objects": [...]}'
            )
        status = state.taxii.add_objects(collection_id, body["objects"])
        return _taxii_response(status, status_code=202)

    @app.get(f"/{TAXII_ROOT}/status/{{status_id}}/")
    async def status(status_id: str, request: Request):
        _check_taxii_accept(request)
        return _taxii_response(state.taxii.get_status(status_id))


class _SpaStaticFiles(StaticFiles):
    """Static files with single-page-app fallback to index.html."""

    async def get_response(self, path: str, scope) -> Response:
        try:
            return await super().get_response(path, scope)
        except StarletteHTTPException as exc:
            if exc.status_code == 404 and scope["method"] in ("GET", "HEAD"):
                return await super().get_response("index.html", scope)
            raise


__all__ = ["create_app", "paginate", "CODE_TO_STATUS"]
