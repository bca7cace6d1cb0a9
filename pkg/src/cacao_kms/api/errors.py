"""Error envelopes and the fixed code-to-status table."""

from __future__ import annotations

from typing import Any

from fastapi.responses import JSONResponse

from cacao_kms.errors import KmsError

# Every module error code maps to exactly one HTTP status; the last three
# codes originate in the API layer itself.
CODE_TO_STATUS: dict[str, int] = {
    "MALFORMED_JSON": 400,
    "BAD_QUERY": 400,
    "NO_SIGNATURES": 400,
    "NOT_FOUND": 404,
    "METHOD_NOT_ALLOWED": 405,
    "NOT_ACCEPTABLE": 406,
    "STALE_WRITE": 409,
    "ID_MISMATCH": 409,
    "ALREADY_SHARED": 409,
    "UNSUPPORTED_MEDIA_TYPE": 415,
    "NOT_A_PLAYBOOK": 422,
    "VALIDATION_FAILED": 422,
    "INVALID_PLAYBOOK": 422,
    "BAD_ENVELOPE": 422,
    "METADATA_MISMATCH": 422,
    "EMBEDDED_VALIDATION_FAILED": 422,
    "STEP_BUDGET_EXCEEDED": 422,
    "MALFORMED_CONDITION": 422,
    "INTERNAL": 500,
    "EXECUTOR_UNAVAILABLE": 502,
    "REMOTE_UNAVAILABLE": 502,
    "REMOTE_REJECTED": 502,
}


def envelope(code: str, message: str, details: Any = None) -> dict[str, Any]:
    status = CODE_TO_STATUS.get(code, 500)
    body: dict[str, Any] = {"code": code, "message": message, "http_status": status}
    if details is not None:
        body["details"] = details
    return body


def envelope_response(code: str, message: str, details: Any = None) -> JSONResponse:
    body = envelope(code, message, details)
    return JSONResponse(status_code=body["http_status"], content=body)


def error_response(exc: KmsError) -> JSONResponse:
    return envelope_response(exc.code, exc.message, exc.details)
