"""Synthetic load generation against a real service process.

Spawns the CLI-served app on a loopback port, drives concurrent synthetic
clients through create/retrieve/delete loops, and recomputes latency
percentiles offline from the service's request_log.jsonl stream using an
independent nearest-rank implementation.
"""

from __future__ import annotations

import asyncio
import json
import math
import os
import signal
import socket
import subprocess
import sys
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path

import httpx

from cacao_kms.seed import minimal_playbook


def free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


@dataclass
class ServerProcess:
    process: subprocess.Popen
    base_url: str
    data_dir: Path

    def stop(self) -> None:
        if self.process.poll() is None:
            self.process.send_signal(signal.SIGTERM)
            try:
                self.process.wait(timeout=15)
            except subprocess.TimeoutExpired:
                self.process.kill()
                self.process.wait(timeout=5)

    def request_log_entries(self) -> list[dict]:
        path = self.data_dir / "request_log.jsonl"
        entries = []
        with open(path, encoding="utf-8") as handle:
            for line in handle:
                if line.strip():
                    entries.append(json.loads(line))
        return entries


def start_server(data_dir: Path, extra_args: list[str] | None = None) -> ServerProcess:
    port = free_port()
    command = [
        sys.executable,
        "-m",
        "cacao_kms.cli",
        "serve",
        "--bind",
        f"127.0.0.1:{port}",
        "--data-dir",
        str(data_dir),
        "--poll-interval-ms",
        "250",
    ] + (extra_args or [])
    process = subprocess.Popen(
        command,
        stdout=subprocess.DEVNULL,
        stderr=subprocess.DEVNULL,
        env={**os.environ, "PYTHONUNBUFFERED": "1"},
    )
    server = ServerProcess(process=process, base_url=f"http://127.0.0.1:{port}", data_dir=data_dir)
    deadline = time.monotonic() + 30
    with httpx.Client(timeout=2.0) as probe:
        while time.monotonic() < deadline:
            if process.poll() is not None:
                raise RuntimeError("service process exited during startup")
            try:
                if probe.get(f"{server.base_url}/healthz").status_code == 200:
                    return server
            except httpx.HTTPError:
                time.sleep(0.1)
    server.stop()
    raise RuntimeError("service did not become healthy within 30s")


@dataclass
class LoadOutcome:
    requests: int = 0
    client_errors: int = 0
    started_at: float = 0.0
    ended_at: float = 0.0
    statuses: dict[int, int] = field(default_factory=dict)

    @property
    def duration_s(self) -> float:
        return self.ended_at - self.started_at

    @property
    def throughput_per_minute(self) -> float:
        return self.requests / self.duration_s * 60.0

    @property
    def error_rate(self) -> float:
        if not self.requests:
            return 0.0
        bad = sum(count for status, count in self.statuses.items() if status >= 400)
        return (bad + self.client_errors) / self.requests


async def _client_loop(
    base_url: str, stop_at: float, outcome: LoadOutcome, lock: asyncio.Lock
) -> None:
    async with httpx.AsyncClient(base_url=base_url, timeout=30.0) as client:
        while time.monotonic() < stop_at:
            doc = minimal_playbook(name=f"load {uuid.uuid4().hex[:8]}")
            steps = [
                ("POST", "/api/v1/playbooks", doc),
                ("GET", f"/api/v1/playbooks/{doc['id']}", None),
                ("DELETE", f"/api/v1/playbooks/{doc['id']}", None),
            ]
            for method, path, body in steps:
                try:
                    response = await client.request(method, path, json=body)
                    status = response.status_code
                    failed = False
                except httpx.HTTPError:
                    status, failed = 0, True
                async with lock:
                    outcome.requests += 1
                    if failed:
                        outcome.client_errors += 1
                    else:
                        outcome.statuses[status] = outcome.statuses.get(status, 0) + 1
                if time.monotonic() >= stop_at:
                    break


def run_load(base_url: str, clients: int, seconds: float) -> LoadOutcome:
    outcome = LoadOutcome()

    async def main() -> None:
        lock = asyncio.Lock()
        outcome.started_at = time.monotonic()
        stop_at = outcome.started_at + seconds
        await asyncio.gather(
            *(_client_loop(base_url, stop_at, outcome, lock) for _ in range(clients))
        )
        outcome.ended_at = time.monotonic()

    asyncio.run(main())
    return outcome


def nearest_rank_percentile(values: list[float], q: float) -> float:
    """Independent oracle: ceil(q*N)-th order statistic of the sorted list."""
    assert values, "no samples"
    ordered = sorted(values)
    return ordered[math.ceil(q * len(ordered)) - 1]


def latencies_between(entries: list[dict], start_ts: str, end_ts: str) -> list[float]:
    return [
        entry["latency_ms"]
        for entry in entries
        if start_ts <= entry["timestamp"] <= end_ts
    ]
