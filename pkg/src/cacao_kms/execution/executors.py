"""Executor bindings.

Both kinds expose the same trigger/report pair the monitor polls:
``trigger`` starts a run and returns an engine reference, ``report`` is the
pull side. The builtin simulator runs each workflow on a daemon thread; the
remote kind adapts an external engine over HTTP (POST {base}/trigger/playbook
returning {"execution_id": ...}, GET {base}/report/{execution_id} returning
{"status": ..., "step_results": [...], "error": ...}).
"""

from __future__ import annotations

import logging
import threading
import uuid
from dataclasses import dataclass
from typing import Mapping, Protocol

import httpx

from cacao_kms.core.model import Playbook
from cacao_kms.errors import ExecutorUnavailable, KmsError
from cacao_kms.execution.simulator import run_workflow

logger = logging.getLogger(__name__)

STATUS_ONGOING = "ongoing"
STATUS_SUCCESS = "success"
STATUS_FAILED = "failed"
TERMINAL_STATUSES = (STATUS_SUCCESS, STATUS_FAILED)


@dataclass
class EngineReport:
    status: str
    step_results: list[dict] | None = None
    error: str | None = None


class Executor(Protocol):
    kind: str

    def trigger(self, playbook: Playbook, failure_injection: Mapping[str, bool]) -> str: ...

    def report(self, engine_ref: str) -> EngineReport: ...


class SimulatorExecutor:
    """Runs workflows in-process; reports are coarse (ongoing until done)."""

    kind = "builtin-simulator"

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._runs: dict[str, EngineReport] = {}

    def trigger(self, playbook: Playbook, failure_injection: Mapping[str, bool]) -> str:
        engine_ref = str(uuid.uuid4())
        with self._lock:
            self._runs[engine_ref] = EngineReport(status=STATUS_ONGOING)
        thread = threading.Thread(
            target=self._run,
            args=(engine_ref, playbook, dict(failure_injection)),
            name=f"simulator-{engine_ref[:8]}",
            daemon=True,
        )
        thread.start()
        return engine_ref

    def _run(self, engine_ref: str, playbook: Playbook, injection: dict) -> None:
        try:
            result = run_workflow(playbook, injection)
            report = EngineReport(
                status=STATUS_SUCCESS if result.success else STATUS_FAILED,
                step_results=result.to_dicts(),
                error=result.error,
            )
        except KmsError as exc:
            report = EngineReport(status=STATUS_FAILED, step_results=[], error=exc.message)
        except Exception:  # keep the monitor observable even on bugs
            logger.exception("simulator run %s crashed", engine_ref)
            report = EngineReport(status=STATUS_FAILED, step_results=[], error="internal error")
        with self._lock:
            self._runs[engine_ref] = report

    def report(self, engine_ref: str) -> EngineReport:
        with self._lock:
            report = self._runs.get(engine_ref)
        if report is None:
            return EngineReport(status=STATUS_FAILED, error="unknown execution reference")
        return report


class RemoteExecutor:
    """Adapter for an external orchestration engine's trigger/report API.

    The failure-injection map is a simulator-only testing input and is not
    part of the remote wire contract. Coarse status-only reports are
    accepted; step_results are filled only when the engine provides them.
    """

    kind = "remote"

    def __init__(self, base_url: str, client: httpx.Client | None = None, timeout: float = 10.0):
        self.base_url = base_url.rstrip("/")
        self._client = client or httpx.Client(timeout=timeout)

    def trigger(self, playbook: Playbook, failure_injection: Mapping[str, bool]) -> str:
        try:
            response = self._client.post(
                f"{self.base_url}/trigger/playbook", json=playbook.to_dict()
            )
            response.raise_for_status()
        except httpx.HTTPError as exc:
            raise ExecutorUnavailable(f"executor at {self.base_url} unavailable: {exc}") from exc
        body = response.json()
        engine_ref = body.get("execution_id")
        if not isinstance(engine_ref, str):
            raise ExecutorUnavailable("executor returned no execution_id")
        return engine_ref

    def report(self, engine_ref: str) -> EngineReport:
        # Network failures propagate: the monitor counts them per execution.
        response = self._client.get(f"{self.base_url}/report/{engine_ref}")
        response.raise_for_status()
        body = response.json()
        status = body.get("status", STATUS_ONGOING)
        if status not in (STATUS_ONGOING,) + TERMINAL_STATUSES:
            status = STATUS_ONGOING
        steps = body.get("step_results")
        return EngineReport(
            status=status,
            step_results=steps if isinstance(steps, list) else None,
            error=body.get("error") if isinstance(body.get("error"), str) else None,
        )
