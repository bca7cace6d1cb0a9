"""Service configuration: CLI flags mirrored by CACAO_KMS_* env vars."""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

ENV_PREFIX = "CACAO_KMS_"

EXECUTOR_KINDS = ("simulator", "remote")
LOG_FORMATS = ("json", "text")


@dataclass
class ServiceConfig:
    bind: str = "127.0.0.1:8080"
    data_dir: Path | None = None
    executor: str = "simulator"
    executor_url: str | None = None
    poll_interval_ms: int = 2000
    log_format: str = "text"
    ui_dir: Path | None = None

    @property
    def host(self) -> str:
        return self.bind.rsplit(":", 1)[0]

    @property
    def port(self) -> int:
        return int(self.bind.rsplit(":", 1)[1])

    def validate(self) -> None:
        if self.executor not in EXECUTOR_KINDS:
            raise ValueError(f"executor must be one of {EXECUTOR_KINDS}")
        if self.executor == "remote" and not self.executor_url:
            raise ValueError("--executor-url is required with --executor remote")
        if self.log_format not in LOG_FORMATS:
            raise ValueError(f"log format must be one of {LOG_FORMATS}")
        if ":" not in self.bind:
            raise ValueError("--bind must look like host:port")
        int(self.bind.rsplit(":", 1)[1])


def env_default(name: str, fallback: str | None = None) -> str | None:
    return os.environ.get(ENV_PREFIX + name, fallback)
