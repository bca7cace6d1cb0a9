"""Identifier grammars and generators for the object types the service owns."""

from __future__ import annotations

import re
import uuid

_UUID4 = r"[0-9a-f]{8}-[0-9a-f]{4}-4[0-9a-f]{3}-[89ab][0-9a-f]{3}-[0-9a-f]{12}"

PLAYBOOK_ID_RE = re.compile(rf"^playbook--{_UUID4}$")
IDENTITY_ID_RE = re.compile(rf"^identity--{_UUID4}$")
START_STEP_ID_RE = re.compile(rf"^start--{_UUID4}$")
EXECUTION_ID_RE = re.compile(rf"^execution--{_UUID4}$")
MARKING_ID_RE = re.compile(rf"^marking-[a-z][a-z0-9-]*--{_UUID4}$")


def new_playbook_id() -> str:
    return f"playbook--{uuid.uuid4()}"


def new_identity_id() -> str:
    return f"identity--{uuid.uuid4()}"


def new_step_id(step_type: str) -> str:
    return f"{step_type}--{uuid.uuid4()}"


def new_execution_id() -> str:
    return f"execution--{uuid.uuid4()}"


def is_playbook_id(value: object) -> bool:
    return isinstance(value, str) and bool(PLAYBOOK_ID_RE.match(value))


def is_identity_id(value: object) -> bool:
    return isinstance(value, str) and bool(IDENTITY_ID_RE.match(value))


def is_start_step_id(value: object) -> bool:
    return isinstance(value, str) and bool(START_STEP_ID_RE.match(value))


def is_marking_id(value: object) -> bool:
    return isinstance(value, str) and bool(MARKING_ID_RE.match(value))
