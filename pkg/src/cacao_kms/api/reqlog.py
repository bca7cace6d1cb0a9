"""Request logging.

A pure ASGI middleware records one entry per request: method, the matched
route template (not the raw path, so ids do not explode the cardinality),
status, latency, and bytes sent. Entries land in an in-memory ring buffer
and, when a data directory is configured, in ``request_log.jsonl`` — the
stream the load harness replays to recompute latency percentiles offline.
"""

from __future__ import annotations

import json
import threading
import time
from collections import deque
from pathlib import Path
from typing import Any

from cacao_kms.core.timestamps import now_utc


class RequestLog:
    def __init__(self, path: Path | None = None, capacity: int = 200_000):
        self.entries: deque[dict[str, Any]] = deque(maxlen=capacity)
        self._lock = threading.Lock()
        self._file = open(path, "a", encoding="utf-8") if path is not None else None

    def record(self, entry: dict[str, Any]) -> None:
        with self._lock:
            self.entries.append(entry)
            if self._file is not None:
                self._file.write(json.dumps(entry) + "\n")
                self._file.flush()

    def close(self) -> None:
        with self._lock:
            if self._file is not None:
                self._file.close()
                self._file = None


class RequestLogMiddleware:
    def __init__(self, app: Any, log: RequestLog):
        self.app = app
        self.log = log

    async def __call__(self, scope: dict, receive: Any, send: Any) -> None:
        if scope["type"] != "http":
            await self.app(scope, receive, send)
            return
        started = time.perf_counter()
        timestamp = now_utc()
        status_holder = {"status": 0, "bytes_out": 0}

        async def sending(message: dict) -> None:
            if message["type"] == "http.response.start":
                status_holder["status"] = message["status"]
            elif message["type"] == "http.response.body":
                status_holder["bytes_out"] += len(message.get("body", b""))
            await send(message)

        try:
            await self.app(scope, receive, sending)
        finally:
            route = scope.get("route")
            path_template = getattr(route, "path", None) or scope.get("path", "")
            self.log.record(
                {
                    "timestamp": timestamp,
                    "method": scope.get("method", ""),
                    "path": path_template,
                    "status": status_holder["status"],
                    "latency_ms": round((time.perf_counter() - started) * 1000.0, 3),
                    "bytes_out": status_holder["bytes_out"],
                }
            )
