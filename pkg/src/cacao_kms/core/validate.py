"""Structural and referential validation of playbooks.

Violations are data, not exceptions: every broken invariant is reported with
a stable code and a JSON path, sorted (path, code) so reports are
deterministic. Checks are guarded so a single defect yields a single
violation instead of a cascade (deleting ``workflow`` must not also report
a dangling ``workflow_start``, and so on).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from cacao_kms.core import ids
from cacao_kms.core.model import (
    PLAYBOOK_TYPE,
    SPEC_VERSION,
    STEP_TYPES,
    Playbook,
)
from cacao_kms.core.timestamps import parse_timestamp

MISSING_PROPERTY = "MISSING_PROPERTY"
INVALID_TYPE = "INVALID_TYPE"
INVALID_SPEC_VERSION = "INVALID_SPEC_VERSION"
INVALID_IDENTIFIER = "INVALID_IDENTIFIER"
INVALID_TIMESTAMP = "INVALID_TIMESTAMP"
MODIFIED_BEFORE_CREATED = "MODIFIED_BEFORE_CREATED"
EMPTY_NAME = "EMPTY_NAME"
INVALID_WORKFLOW = "INVALID_WORKFLOW"
DANGLING_WORKFLOW_START = "DANGLING_WORKFLOW_START"
WORKFLOW_START_NOT_START = "WORKFLOW_START_NOT_START"
INVALID_STEP = "INVALID_STEP"
MISSING_STEP_TYPE = "MISSING_STEP_TYPE"
INVALID_STEP_TYPE = "INVALID_STEP_TYPE"
COMMANDS_ON_TERMINAL_STEP = "COMMANDS_ON_TERMINAL_STEP"
EMPTY_COMMAND = "EMPTY_COMMAND"
PARALLEL_WITHOUT_BRANCHES = "PARALLEL_WITHOUT_BRANCHES"
DANGLING_STEP_REFERENCE = "DANGLING_STEP_REFERENCE"
DANGLING_MARKING_REFERENCE = "DANGLING_MARKING_REFERENCE"
VALUE_OUT_OF_RANGE = "VALUE_OUT_OF_RANGE"
INVALID_VALUE = "INVALID_VALUE"

MANDATORY_PROPERTIES = (
    "type",
    "spec_version",
    "id",
    "name",
    "created",
    "modified",
    "created_by",
    "workflow_start",
    "workflow",
)

_SCORE_PROPERTIES = ("priority", "severity", "impact")
_STRING_LIST_PROPERTIES = ("labels", "playbook_types", "playbook_activities", "industry_sectors")


@dataclass(frozen=True)
class Violation:
    code: str
    path: str
    message: str

    def to_dict(self) -> dict:
        return {"code": self.code, "path": self.path, "message": self.message}


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {"valid": self.valid, "violations": [v.to_dict() for v in self.violations]}


def validate_playbook(playbook: Playbook) -> ValidationReport:
    checker = _Checker(playbook)
    checker.run()
    violations = sorted(checker.violations, key=lambda v: (v.path, v.code))
    return ValidationReport(violations=violations)


class _Checker:
    def __init__(self, playbook: Playbook):
        self.raw = dict(playbook.raw)
        self.violations: list[Violation] = []

    def flag(self, code: str, path: str, message: str) -> None:
        self.violations.append(Violation(code=code, path=path, message=message))

    def run(self) -> None:
        self._check_mandatory_presence()
        self._check_literals()
        self._check_identifiers()
        self._check_timestamps()
        self._check_name()
        self._check_optional_values()
        self._check_markings()
        workflow_ok = self._check_workflow_shape()
        if workflow_ok:
            self._check_workflow_start()
            self._check_steps()
            self._check_step_references()

    def _check_mandatory_presence(self) -> None:
        for prop in MANDATORY_PROPERTIES:
            if prop not in self.raw:
                self.flag(MISSING_PROPERTY, f"$.{prop}", f"mandatory property {prop} is absent")

    def _check_literals(self) -> None:
        if "type" in self.raw and self.raw["type"] != PLAYBOOK_TYPE:
            self.flag(INVALID_TYPE, "$.type", f'type must be "{PLAYBOOK_TYPE}"')
        if "spec_version" in self.raw and self.raw["spec_version"] != SPEC_VERSION:
            self.flag(
                INVALID_SPEC_VERSION, "$.spec_version", f'spec_version must be "{SPEC_VERSION}"'
            )

    def _check_identifiers(self) -> None:
        if "id" in self.raw and not ids.is_playbook_id(self.raw["id"]):
            self.flag(INVALID_IDENTIFIER, "$.id", "id must match playbook--<UUIDv4>")
        if "created_by" in self.raw and not ids.is_identity_id(self.raw["created_by"]):
            self.flag(
                INVALID_IDENTIFIER, "$.created_by", "created_by must match identity--<UUIDv4>"
            )

    def _check_timestamps(self) -> None:
        parsed = {}
        for prop in ("created", "modified"):
            if prop not in self.raw:
                continue
            parsed[prop] = parse_timestamp(self.raw[prop])
            if parsed[prop] is None:
                self.flag(
                    INVALID_TIMESTAMP,
                    f"$.{prop}",
                    f"{prop} must be an RFC 3339 UTC timestamp",
                )
        created, modified = parsed.get("created"), parsed.get("modified")
        if created is not None and modified is not None and modified < created:
            self.flag(MODIFIED_BEFORE_CREATED, "$.modified", "modified precedes created")

    def _check_name(self) -> None:
        if "name" in self.raw:
            name = self.raw["name"]
            if not isinstance(name, str) or not name:
                self.flag(EMPTY_NAME, "$.name", "name must be a non-empty string")

    def _check_optional_values(self) -> None:
        for prop in _SCORE_PROPERTIES:
            if prop not in self.raw:
                continue
            value = self.raw[prop]
            if not isinstance(value, int) or isinstance(value, bool) or not 0 <= value <= 100:
                self.flag(
                    VALUE_OUT_OF_RANGE, f"$.{prop}", f"{prop} must be an integer in [0, 100]"
                )
        for prop in _STRING_LIST_PROPERTIES:
            if prop not in self.raw:
                continue
            value = self.raw[prop]
            if not isinstance(value, list) or any(not isinstance(item, str) for item in value):
                self.flag(INVALID_VALUE, f"$.{prop}", f"{prop} must be a list of strings")
        if "revoked" in self.raw and not isinstance(self.raw["revoked"], bool):
            self.flag(INVALID_VALUE, "$.revoked", "revoked must be a boolean")
        if "signatures" in self.raw and not isinstance(self.raw["signatures"], list):
            self.flag(INVALID_VALUE, "$.signatures", "signatures must be a list")

    def _check_markings(self) -> None:
        if "markings" not in self.raw:
            return
        markings = self.raw["markings"]
        if not isinstance(markings, list):
            self.flag(INVALID_VALUE, "$.markings", "markings must be a list")
            return
        definitions = self.raw.get("data_marking_definitions")
        defined = set(definitions) if isinstance(definitions, dict) else set()
        for index, marking in enumerate(markings):
            path = f"$.markings[{index}]"
            if not ids.is_marking_id(marking):
                self.flag(
                    INVALID_IDENTIFIER, path, "marking reference must match marking-<type>--<UUIDv4>"
                )
            elif marking not in defined:
                self.flag(
                    DANGLING_MARKING_REFERENCE,
                    path,
                    f"marking {marking} is not defined in data_marking_definitions",
                )

    def _check_workflow_shape(self) -> bool:
        if "workflow" not in self.raw:
            return False
        workflow = self.raw["workflow"]
        if not isinstance(workflow, dict) or not workflow:
            self.flag(INVALID_WORKFLOW, "$.workflow", "workflow must be a non-empty object")
            return False
        return True

    def _check_workflow_start(self) -> None:
        # Grammar, membership, then step-type: checked as a chain so one
        # defective value reports exactly one violation.
        if "workflow_start" not in self.raw:
            return
        start = self.raw["workflow_start"]
        if not ids.is_start_step_id(start):
            self.flag(
                INVALID_IDENTIFIER, "$.workflow_start", "workflow_start must match start--<UUIDv4>"
            )
            return
        workflow = self.raw["workflow"]
        if start not in workflow:
            self.flag(
                DANGLING_WORKFLOW_START,
                "$.workflow_start",
                f"workflow_start {start} is not a workflow step",
            )
            return
        step = workflow[start]
        if isinstance(step, dict) and step.get("type") != "start":
            self.flag(
                WORKFLOW_START_NOT_START,
                "$.workflow_start",
                "workflow_start must reference a step of type start",
            )

    def _check_steps(self) -> None:
        for step_id, step in self.raw["workflow"].items():
            base = f"$.workflow.{step_id}"
            if not isinstance(step, dict):
                self.flag(INVALID_STEP, base, "workflow step must be an object")
                continue
            step_type = step.get("type")
            if step_type is None:
                self.flag(MISSING_STEP_TYPE, f"{base}.type", "step has no type")
                continue
            if step_type not in STEP_TYPES:
                self.flag(INVALID_STEP_TYPE, f"{base}.type", f"unknown step type {step_type!r}")
                continue
            commands = step.get("commands")
            if step_type in ("start", "end") and commands:
                self.flag(
                    COMMANDS_ON_TERMINAL_STEP,
                    f"{base}.commands",
                    f"{step_type} steps carry no commands",
                )
            if step_type in ("action", "playbook-action") and commands is not None:
                if not _has_nonempty_command(commands):
                    self.flag(
                        EMPTY_COMMAND,
                        f"{base}.commands",
                        "action step needs at least one command with non-empty text",
                    )
            if step_type == "parallel":
                next_steps = step.get("next_steps")
                if not isinstance(next_steps, list) or not next_steps:
                    self.flag(
                        PARALLEL_WITHOUT_BRANCHES,
                        f"{base}.next_steps",
                        "parallel step must declare at least one branch",
                    )

    def _check_step_references(self) -> None:
        workflow = self.raw["workflow"]
        playbook = Playbook(raw=self.raw)
        for step_id, suffix, target in playbook.iter_step_references():
            if target not in workflow:
                self.flag(
                    DANGLING_STEP_REFERENCE,
                    f"$.workflow.{step_id}.{suffix}",
                    f"referenced step {target} does not exist",
                )


def _has_nonempty_command(commands: object) -> bool:
    if not isinstance(commands, list) or not commands:
        return False
    for command in commands:
        if isinstance(command, dict) and isinstance(command.get("command"), str):
            if command["command"].strip():
                return True
    return False
