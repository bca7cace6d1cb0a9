"""Shared exception hierarchy.

Every service error carries a stable machine-readable ``code``; the API
layer maps codes to HTTP statuses through a single table.
"""

from __future__ import annotations

from typing import Any


class KmsError(Exception):
    """Base class for all service errors."""

    code = "INTERNAL"

    def __init__(self, message: str, details: Any = None):
        super().__init__(message)
        self.message = message
        self.details = details


class MalformedJson(KmsError):
    code = "MALFORMED_JSON"


class NotAPlaybook(KmsError):
    code = "NOT_A_PLAYBOOK"


class InvalidPlaybook(KmsError):
    """Raised when signing is attempted on a playbook that fails validation."""

    code = "INVALID_PLAYBOOK"


class NoSignatures(KmsError):
    code = "NO_SIGNATURES"


class ValidationFailed(KmsError):
    """Raised by the store when a playbook with violations is submitted.

    ``details`` carries the validation report dict.
    """

    code = "VALIDATION_FAILED"


class StaleWrite(KmsError):
    """Optimistic-concurrency conflict: submitted ``modified`` is not newer."""

    code = "STALE_WRITE"


class NotFound(KmsError):
    code = "NOT_FOUND"


class BadQuery(KmsError):
    code = "BAD_QUERY"


class IdMismatch(KmsError):
    code = "ID_MISMATCH"


class ExecutorUnavailable(KmsError):
    code = "EXECUTOR_UNAVAILABLE"


class StepBudgetExceeded(KmsError):
    code = "STEP_BUDGET_EXCEEDED"


class MalformedCondition(KmsError):
    code = "MALFORMED_CONDITION"


class AlreadyShared(KmsError):
    code = "ALREADY_SHARED"


class RemoteUnavailable(KmsError):
    code = "REMOTE_UNAVAILABLE"


class RemoteRejected(KmsError):
    code = "REMOTE_REJECTED"


class BadEnvelope(KmsError):
    code = "BAD_ENVELOPE"


class MetadataMismatch(KmsError):
    code = "METADATA_MISMATCH"


class EmbeddedValidationFailed(KmsError):
    code = "EMBEDDED_VALIDATION_FAILED"
