"""Deterministic workflow walker.

Semantics of the builtin simulator:

* The walk begins at ``workflow_start``. start and end steps succeed
  instantly; action and playbook-action steps succeed after ``delay_ms``
  (default 0) unless named in the failure-injection map.
* After a successful step the walk follows ``on_success`` (if declared)
  or ``on_completion``. After a failed step it follows ``on_failure``;
  with no failure handler the execution fails.
* ``parallel`` runs every ``next_steps`` branch as a sequential sub-walk in
  declared order (appending each branch's results as it goes) and succeeds
  iff all branches succeed. A branch terminates at an end step, at a step
  with no onward edge, or on unrecovered failure.
* ``if-condition`` evaluates its condition and jumps to ``on_true`` /
  ``on_false`` (falling back to ``on_completion`` when the chosen branch is
  absent). ``while-condition`` jumps to ``on_true`` while true — loops are
  expressed as graph cycles back to the condition step — and continues via
  ``on_completion`` once false; each condition step is capped at 1000
  evaluations. ``switch-condition`` reads the variable named by its
  ``condition``, stringifies the value, and jumps to the matching ``cases``
  entry or ``"default"``.
* A global budget of 10000 step executions guards against cycles; crossing
  either cap raises StepBudgetExceeded.

Conditions use the grammar ``<variable> <op> <literal>`` with op in
{==, !=, <, <=, >, >=}; variables resolve from the playbook's
``playbook_variables`` values and literals are quoted strings, numbers, or
true/false. Anything else raises MalformedCondition.
"""

from __future__ import annotations

import re
import time
from dataclasses import dataclass, field
from typing import Any, Mapping

from cacao_kms.core.model import Playbook
from cacao_kms.core.timestamps import now_utc
from cacao_kms.errors import MalformedCondition, StepBudgetExceeded

STEP_BUDGET = 10_000
CONDITION_VISIT_CAP = 1_000

_CONDITION_RE = re.compile(r"^\s*(.+?)\s*(==|!=|<=|>=|<|>)\s*(.+?)\s*$")


@dataclass
class StepResult:
    step_id: str
    status: str  # success | failed | skipped
    started_at: str
    ended_at: str

    def to_dict(self) -> dict[str, str]:
        return {
            "step_id": self.step_id,
            "status": self.status,
            "started_at": self.started_at,
            "ended_at": self.ended_at,
        }


@dataclass
class WalkResult:
    success: bool
    step_results: list[StepResult] = field(default_factory=list)
    error: str | None = None

    def to_dicts(self) -> list[dict[str, str]]:
        return [r.to_dict() for r in self.step_results]


def run_workflow(
    playbook: Playbook, failure_injection: Mapping[str, bool] | None = None
) -> WalkResult:
    """Walk the workflow graph deterministically.

    Identical playbook and injection map always produce the identical
    ordered step-result sequence.
    """
    walker = _Walker(playbook, failure_injection or {})
    completed = walker.walk(playbook.workflow_start)
    return WalkResult(
        success=completed and walker.error is None,
        step_results=walker.results,
        error=walker.error,
    )


class _Walker:
    def __init__(self, playbook: Playbook, injection: Mapping[str, bool]):
        self.workflow = playbook.workflow
        self.variables = playbook.variables
        self.injection = injection
        self.results: list[StepResult] = []
        self.error: str | None = None
        self.budget = STEP_BUDGET
        self.condition_visits: dict[str, int] = {}

    def walk(self, step_id: str | None) -> bool:
        """Run one branch until an end step, a missing edge, or failure."""
        current = step_id
        while current is not None:
            step = self.workflow.get(current)
            if step is None:
                self.error = f"step {current} is not defined in the workflow"
                return False
            self._spend(current)
            step_type = step.get("type")

            if step_type == "end":
                self._record(current, "success")
                return True
            if step_type in ("start",):
                self._record(current, "success")
                current = self._next_on_success(step)
                continue
            if step_type in ("action", "playbook-action"):
                current = self._run_action(current, step)
                if current is _FAILED:
                    return False
                continue
            if step_type == "parallel":
                current = self._run_parallel(current, step)
                if current is _FAILED:
                    return False
                continue
            if step_type == "if-condition":
                verdict = self._evaluate(current, step)
                self._record(current, "success")
                branch = step.get("on_true") if verdict else step.get("on_false")
                current = branch if branch is not None else step.get("on_completion")
                continue
            if step_type == "while-condition":
                verdict = self._evaluate(current, step)
                self._record(current, "success")
                current = step.get("on_true") if verdict else step.get("on_completion")
                continue
            if step_type == "switch-condition":
                current = self._run_switch(current, step)
                continue
            self.error = f"step {current} has unsupported type {step_type!r}"
            return False
        return True

    # -- step kinds ---------------------------------------------------------

    def _run_action(self, step_id: str, step: dict) -> Any:
        started = now_utc()
        delay_ms = step.get("delay_ms")
        if isinstance(delay_ms, (int, float)) and delay_ms > 0:
            time.sleep(delay_ms / 1000.0)
        if self.injection.get(step_id):
            self._record(step_id, "failed", started_at=started)
            handler = step.get("on_failure")
            if handler is None:
                self.error = f"step {step_id} failed with no failure handler"
                return _FAILED
            return handler
        self._record(step_id, "success", started_at=started)
        return self._next_on_success(step)

    def _run_parallel(self, step_id: str, step: dict) -> Any:
        started = now_utc()
        all_ok = True
        for branch in step.get("next_steps", []):
            all_ok = self.walk(branch) and all_ok
        if all_ok:
            self._record(step_id, "success", started_at=started)
            return self._next_on_success(step)
        self._record(step_id, "failed", started_at=started)
        handler = step.get("on_failure")
        if handler is None:
            if self.error is None:
                self.error = f"parallel step {step_id} failed with no failure handler"
            return _FAILED
        self.error = None  # recovered
        return handler

    def _run_switch(self, step_id: str, step: dict) -> str | None:
        variable = step.get("condition")
        if not isinstance(variable, str) or not variable.strip():
            raise MalformedCondition(f"switch step {step_id} names no variable")
        value = self._resolve_variable(variable.strip(), step_id)
        self._record(step_id, "success")
        cases = step.get("cases") if isinstance(step.get("cases"), dict) else {}
        key = _stringify(value)
        if key in cases:
            return cases[key]
        if "default" in cases:
            return cases["default"]
        return step.get("on_completion")

    # -- plumbing -----------------------------------------------------------

    def _spend(self, step_id: str) -> None:
        self.budget -= 1
        if self.budget < 0:
            raise StepBudgetExceeded(
                f"workflow exceeded the {STEP_BUDGET}-step execution budget at {step_id}"
            )
        step_type = self.workflow.get(step_id, {}).get("type")
        if step_type in ("if-condition", "while-condition", "switch-condition"):
            visits = self.condition_visits.get(step_id, 0) + 1
            self.condition_visits[step_id] = visits
            if visits > CONDITION_VISIT_CAP:
                raise StepBudgetExceeded(
                    f"condition step {step_id} exceeded {CONDITION_VISIT_CAP} iterations"
                )

    def _record(self, step_id: str, status: str, started_at: str | None = None) -> None:
        now = now_utc()
        self.results.append(
            StepResult(
                step_id=step_id,
                status=status,
                started_at=started_at or now,
                ended_at=now,
            )
        )

    def _next_on_success(self, step: dict) -> str | None:
        return step.get("on_success") or step.get("on_completion")

    def _evaluate(self, step_id: str, step: dict) -> bool:
        expression = step.get("condition")
        if not isinstance(expression, str):
            raise MalformedCondition(f"condition step {step_id} has no condition")
        match = _CONDITION_RE.match(expression)
        if not match:
            raise MalformedCondition(f"cannot parse condition {expression!r}")
        variable, op, literal_text = match.groups()
        left = self._resolve_variable(variable, step_id)
        right = _parse_literal(literal_text)

        left_num, right_num = _as_number(left), _as_number(right)
        if left_num is not None and right_num is not None:
            left, right = left_num, right_num
        elif op not in ("==", "!="):
            raise MalformedCondition(
                f"ordering comparison needs numeric operands in {expression!r}"
            )
        else:
            left, right = _stringify(left), _stringify(right)

        if op == "==":
            return left == right
        if op == "!=":
            return left != right
        if op == "<":
            return left < right
        if op == "<=":
            return left <= right
        if op == ">":
            return left > right
        return left >= right

    def _resolve_variable(self, name: str, step_id: str) -> Any:
        if name not in self.variables:
            raise MalformedCondition(f"step {step_id} references unknown variable {name!r}")
        definition = self.variables[name]
        return definition.get("value") if isinstance(definition, dict) else definition


_FAILED = object()


def _parse_literal(text: str) -> Any:
    if len(text) >= 2 and text[0] == text[-1] and text[0] in ("'", '"'):
        return text[1:-1]
    if text == "true":
        return True
    if text == "false":
        return False
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        raise MalformedCondition(f"cannot parse literal {text!r}") from None


def _as_number(value: Any) -> float | None:
    if isinstance(value, bool):
        return None
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        try:
            return float(value)
        except ValueError:
            return None
    return None


def _stringify(value: Any) -> str:
    if value is True:
        return "true"
    if value is False:
        return "false"
    if isinstance(value, float) and value.is_integer():
        return str(int(value))
    return str(value)
