"""Single-defect playbook fixtures.

Each fixture takes a known-valid base document, applies exactly one mutation
(deleting a mandatory property, breaking a reference, or corrupting a value),
and names the one violation the validator must report for it.
"""

from __future__ import annotations

import copy
import random
import uuid
from dataclasses import dataclass
from typing import Any, Callable

from cacao_kms.seed import _uuid4


@dataclass(frozen=True)
class MutationCase:
    name: str
    document: dict[str, Any]
    expected_code: str
    expected_path: str


def base_document() -> dict[str, Any]:
    """A valid playbook exercising every reference-bearing field."""
    rng = random.Random(424242)

    def sid(prefix: str) -> str:
        return f"{prefix}--{_uuid4(rng)}"

    start, end = sid("start"), sid("end")
    act_a, act_b, act_c = sid("action"), sid("action"), sid("action")
    par, iff, sw = sid("parallel"), sid("if-condition"), sid("switch-condition")
    marking = f"marking-tlp--{_uuid4(rng)}"
    return {
        "type": "playbook",
        "spec_version": "cacao-2.0",
        "id": f"playbook--{_uuid4(rng)}",
        "name": "Reference coverage fixture",
        "description": "Exercises every edge-reference field.",
        "created": "2025-03-01T10:00:00.000Z",
        "modified": "2025-03-02T10:00:00.000Z",
        "created_by": f"identity--{_uuid4(rng)}",
        "labels": ["fixture"],
        "severity": 40,
        "markings": [marking],
        "data_marking_definitions": {
            marking: {"type": "marking-tlp", "tlpv2_level": "TLP:GREEN"}
        },
        "playbook_variables": {"__x__": {"type": "integer", "value": 1}},
        "workflow_start": start,
        "workflow": {
            start: {"type": "start", "on_completion": act_a},
            act_a: {
                "type": "action",
                "commands": [{"type": "manual", "command": "triage alert"}],
                "on_success": par,
                "on_failure": end,
            },
            par: {"type": "parallel", "next_steps": [act_b, act_c], "on_completion": iff},
            act_b: {
                "type": "action",
                "commands": [{"type": "manual", "command": "isolate host"}],
            },
            act_c: {
                "type": "action",
                "commands": [{"type": "manual", "command": "collect evidence"}],
            },
            iff: {
                "type": "if-condition",
                "condition": "__x__ == 1",
                "on_true": act_b,
                "on_false": act_c,
                "on_completion": sw,
            },
            sw: {
                "type": "switch-condition",
                "condition": "__x__",
                "cases": {"1": act_b, "default": act_c},
                "on_completion": end,
            },
            end: {"type": "end"},
        },
    }


def _find_step(doc: dict, step_type: str) -> str:
    return next(sid for sid, step in doc["workflow"].items() if step["type"] == step_type)


def _case(
    name: str,
    mutate: Callable[[dict], tuple[str, str]],
) -> MutationCase:
    doc = copy.deepcopy(base_document())
    code, path = mutate(doc)
    return MutationCase(name=name, document=doc, expected_code=code, expected_path=path)


def build_mutation_cases() -> list[MutationCase]:
    fresh = f"action--{uuid.uuid4()}"
    cases: list[MutationCase] = []

    def deleted(prop: str):
        def mutate(doc):
            del doc[prop]
            return "MISSING_PROPERTY", f"$.{prop}"

        return mutate

    for prop in (
        "type",
        "spec_version",
        "id",
        "name",
        "created",
        "modified",
        "created_by",
        "workflow_start",
        "workflow",
    ):
        cases.append(_case(f"delete_{prop}", deleted(prop)))

    def set_top(prop: str, value: Any, code: str):
        def mutate(doc):
            doc[prop] = value
            return code, f"$.{prop}"

        return mutate

    cases.append(_case("wrong_type", set_top("type", "course-of-action", "INVALID_TYPE")))
    cases.append(
        _case("wrong_spec_version", set_top("spec_version", "cacao-1.1", "INVALID_SPEC_VERSION"))
    )
    cases.append(_case("bad_id", set_top("id", "playbook-123", "INVALID_IDENTIFIER")))
    cases.append(
        _case("bad_created_by", set_top("created_by", "identity--zzz", "INVALID_IDENTIFIER"))
    )
    cases.append(
        _case(
            "bad_workflow_start_format",
            set_top("workflow_start", "not-a-step-id", "INVALID_IDENTIFIER"),
        )
    )
    cases.append(
        _case(
            "dangling_workflow_start",
            set_top("workflow_start", f"start--{uuid.uuid4()}", "DANGLING_WORKFLOW_START"),
        )
    )
    cases.append(
        _case("bad_created_format", set_top("created", "yesterday", "INVALID_TIMESTAMP"))
    )
    cases.append(
        _case(
            "modified_before_created",
            set_top("modified", "2025-02-28T10:00:00.000Z", "MODIFIED_BEFORE_CREATED"),
        )
    )
    cases.append(_case("empty_name", set_top("name", "", "EMPTY_NAME")))
    cases.append(_case("severity_out_of_range", set_top("severity", 250, "VALUE_OUT_OF_RANGE")))
    cases.append(_case("labels_not_a_list", set_top("labels", "oops", "INVALID_VALUE")))

    def start_not_start(doc):
        doc["workflow"][doc["workflow_start"]]["type"] = "action"
        return "WORKFLOW_START_NOT_START", "$.workflow_start"

    cases.append(_case("workflow_start_not_start", start_not_start))

    def dangling_single(field: str, step_type: str):
        def mutate(doc):
            step_id = _find_step(doc, step_type)
            doc["workflow"][step_id][field] = fresh
            return "DANGLING_STEP_REFERENCE", f"$.workflow.{step_id}.{field}"

        return mutate

    cases.append(_case("dangling_on_completion", dangling_single("on_completion", "start")))
    cases.append(_case("dangling_on_success", dangling_single("on_success", "action")))
    cases.append(_case("dangling_on_failure", dangling_single("on_failure", "action")))
    cases.append(_case("dangling_on_true", dangling_single("on_true", "if-condition")))
    cases.append(_case("dangling_on_false", dangling_single("on_false", "if-condition")))

    def dangling_branch(doc):
        step_id = _find_step(doc, "parallel")
        doc["workflow"][step_id]["next_steps"][1] = fresh
        return "DANGLING_STEP_REFERENCE", f"$.workflow.{step_id}.next_steps[1]"

    cases.append(_case("dangling_next_steps_entry", dangling_branch))

    def dangling_case(doc):
        step_id = _find_step(doc, "switch-condition")
        doc["workflow"][step_id]["cases"]["default"] = fresh
        return "DANGLING_STEP_REFERENCE", f"$.workflow.{step_id}.cases.default"

    cases.append(_case("dangling_switch_case", dangling_case))

    def dangling_marking(doc):
        doc["markings"][0] = f"marking-tlp--{uuid.uuid4()}"
        return "DANGLING_MARKING_REFERENCE", "$.markings[0]"

    cases.append(_case("dangling_marking_reference", dangling_marking))

    def commands_on_start(doc):
        step_id = _find_step(doc, "start")
        doc["workflow"][step_id]["commands"] = [{"type": "manual", "command": "boom"}]
        return "COMMANDS_ON_TERMINAL_STEP", f"$.workflow.{step_id}.commands"

    cases.append(_case("commands_on_start_step", commands_on_start))

    def blank_command(doc):
        step_id = _find_step(doc, "action")
        doc["workflow"][step_id]["commands"] = [{"type": "manual", "command": "   "}]
        return "EMPTY_COMMAND", f"$.workflow.{step_id}.commands"

    cases.append(_case("action_with_blank_command", blank_command))

    def no_branches(doc):
        step_id = _find_step(doc, "parallel")
        doc["workflow"][step_id]["next_steps"] = []
        return "PARALLEL_WITHOUT_BRANCHES", f"$.workflow.{step_id}.next_steps"

    cases.append(_case("parallel_without_branches", no_branches))

    def unknown_step_type(doc):
        step_id = _find_step(doc, "switch-condition")
        doc["workflow"][step_id]["type"] = "magic"
        return "INVALID_STEP_TYPE", f"$.workflow.{step_id}.type"

    cases.append(_case("unknown_step_type", unknown_step_type))

    return cases
