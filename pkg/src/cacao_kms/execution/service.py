"""Execution records and the pull-based monitoring agent.

``start_execution`` persists an ongoing record and dispatches to the bound
executor; completion is observed asynchronously by ``monitor_tick``, which
polls the executor for every ongoing record and persists transitions.
Terminal records never change again.
"""

from __future__ import annotations

import logging
import threading
from typing import Any

from cacao_kms.core import ids
from cacao_kms.core.model import Playbook
from cacao_kms.core.timestamps import now_utc
from cacao_kms.core.validate import validate_playbook
from cacao_kms.errors import BadQuery, ExecutorUnavailable, NotFound, ValidationFailed
from cacao_kms.execution.executors import (
    STATUS_FAILED,
    STATUS_ONGOING,
    TERMINAL_STATUSES,
    EngineReport,
    Executor,
)
from cacao_kms.store.documents import DocumentStore
from cacao_kms.store.playbooks import PlaybookStore

logger = logging.getLogger(__name__)

# A remote engine that cannot be reached for this many consecutive polls has
# lost the execution; the record is failed so it cannot dangle forever.
MAX_CONSECUTIVE_POLL_FAILURES = 30

DEFAULT_POLL_INTERVAL_MS = 2000
MIN_POLL_INTERVAL_MS = 100

_PUBLIC_FIELDS = (
    "execution_id",
    "playbook_id",
    "playbook_revision",
    "status",
    "started_at",
    "ended_at",
    "step_results",
    "error",
)


def public_record(record: dict[str, Any]) -> dict[str, Any]:
    """Execution record without executor-internal bookkeeping fields."""
    return {key: record.get(key) for key in _PUBLIC_FIELDS}


class ExecutionService:
    def __init__(
        self,
        docs: DocumentStore,
        playbooks: PlaybookStore,
        executor: Executor,
    ):
        self.docs = docs
        self.playbooks = playbooks
        self.executor = executor

    def start_execution(
        self, playbook_id: str, failure_injection: dict[str, bool] | None = None
    ) -> dict[str, Any]:
        """Create an ongoing record and dispatch; returns immediately."""
        current = self.playbooks.get_current(playbook_id)
        playbook = Playbook.from_dict(current["playbook"])
        report = validate_playbook(playbook)
        if not report.valid:
            raise ValidationFailed(
                "stored playbook no longer validates", details=report.to_dict()
            )
        record = {
            "execution_id": ids.new_execution_id(),
            "playbook_id": playbook_id,
            "playbook_revision": current["revision"],
            "status": STATUS_ONGOING,
            "started_at": now_utc(),
            "ended_at": None,
            "step_results": [],
            "error": None,
            "engine_ref": None,
            "poll_failures": 0,
        }
        self.docs.put("executions", record["execution_id"], record)
        try:
            record["engine_ref"] = self.executor.trigger(playbook, failure_injection or {})
        except ExecutorUnavailable as exc:
            record.update(status=STATUS_FAILED, ended_at=now_utc(), error=exc.message)
            self.docs.put("executions", record["execution_id"], record)
            raise
        self.docs.put("executions", record["execution_id"], record)
        return public_record(record)

    def get_execution(self, execution_id: str) -> dict[str, Any]:
        record = self.docs.get("executions", execution_id)
        if record is None:
            raise NotFound(f"execution {execution_id} not found")
        return public_record(record)

    def list_executions(
        self,
        playbook_id: str | None = None,
        status: str | None = None,
        offset: int = 0,
        limit: int = 50,
    ) -> dict[str, Any]:
        if status is not None and status not in (STATUS_ONGOING,) + TERMINAL_STATUSES:
            raise BadQuery(f"unknown execution status {status!r}")
        if offset < 0 or limit < 1:
            raise BadQuery("offset must be >= 0 and limit >= 1")
        records = self.docs.scan("executions")
        if playbook_id is not None:
            records = [r for r in records if r["playbook_id"] == playbook_id]
        if status is not None:
            records = [r for r in records if r["status"] == status]
        records.sort(key=lambda r: (r["started_at"], r["execution_id"]))
        records.reverse()
        page = records[offset : offset + limit]
        return {"items": [public_record(r) for r in page], "total": len(records)}

    def monitor_tick(self) -> int:
        """Poll the executor for every ongoing record; persist transitions.

        Returns the number of records whose status or step results changed.
        Idempotent when the engine reports no progress.
        """
        updated = 0
        ongoing = [r for r in self.docs.scan("executions") if r["status"] == STATUS_ONGOING]
        for record in ongoing:
            try:
                report = self.executor.report(record["engine_ref"])
            except Exception as exc:
                updated += self._register_poll_failure(record, exc)
                continue
            changed = self._apply_report(record, report)
            if changed:
                updated += 1
        return updated

    def _register_poll_failure(self, record: dict, exc: Exception) -> int:
        record["poll_failures"] = record.get("poll_failures", 0) + 1
        logger.warning(
            "poll for execution %s failed (%d consecutive): %s",
            record["execution_id"],
            record["poll_failures"],
            exc,
        )
        if record["poll_failures"] >= MAX_CONSECUTIVE_POLL_FAILURES:
            record.update(status=STATUS_FAILED, ended_at=now_utc(), error="executor unreachable")
            self.docs.put("executions", record["execution_id"], record)
            return 1
        self.docs.put("executions", record["execution_id"], record)
        return 0

    def _apply_report(self, record: dict, report: EngineReport) -> bool:
        changed = False
        if record.get("poll_failures"):
            record["poll_failures"] = 0
            self.docs.put("executions", record["execution_id"], record)
        if report.step_results is not None and report.step_results != record["step_results"]:
            record["step_results"] = report.step_results
            changed = True
        if report.status != record["status"] and report.status in TERMINAL_STATUSES:
            record["status"] = report.status
            record["ended_at"] = now_utc()
            record["error"] = report.error
            changed = True
        if changed:
            self.docs.put("executions", record["execution_id"], record)
        return changed


class MonitorAgent:
    """Single background thread; at most one tick in flight at a time."""

    def __init__(self, service: ExecutionService, poll_interval_ms: int = DEFAULT_POLL_INTERVAL_MS):
        if poll_interval_ms < MIN_POLL_INTERVAL_MS:
            raise ValueError(f"poll interval must be >= {MIN_POLL_INTERVAL_MS} ms")
        self.service = service
        self.poll_interval_ms = poll_interval_ms
        self._stop = threading.Event()
        self._thread: threading.Thread | None = None

    def start(self) -> None:
        if self._thread is not None:
            return
        self._stop.clear()
        self._thread = threading.Thread(target=self._loop, name="execution-monitor", daemon=True)
        self._thread.start()

    def stop(self) -> None:
        if self._thread is None:
            return
        self._stop.set()
        self._thread.join(timeout=5)
        self._thread = None

    def _loop(self) -> None:
        while not self._stop.wait(self.poll_interval_ms / 1000.0):
            try:
                self.service.monitor_tick()
            except Exception:
                logger.exception("monitor tick crashed; continuing")
