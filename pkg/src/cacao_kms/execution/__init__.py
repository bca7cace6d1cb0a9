"""Playbook execution: builtin simulator, remote executor adapter, and the
pull-based progress monitor."""

from cacao_kms.execution.simulator import WalkResult, run_workflow
from cacao_kms.execution.executors import (
    EngineReport,
    Executor,
    RemoteExecutor,
    SimulatorExecutor,
)
from cacao_kms.execution.service import ExecutionService, MonitorAgent

__all__ = [
    "EngineReport",
    "ExecutionService",
    "Executor",
    "MonitorAgent",
    "RemoteExecutor",
    "SimulatorExecutor",
    "WalkResult",
    "run_workflow",
]
