"""Playbook document model.

A playbook is carried as its raw JSON object so unknown properties survive
every round trip byte-for-byte; typed accessors cover the properties the
service itself interprets. Workflow steps stay plain dicts keyed by step id.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass
from typing import Any, Iterator, Mapping

from cacao_kms.core.timestamps import normalize_timestamp
from cacao_kms.errors import MalformedJson, NotAPlaybook

PLAYBOOK_TYPE = "playbook"
SPEC_VERSION = "cacao-2.0"

STEP_TYPES = frozenset(
    {
        "start",
        "end",
        "action",
        "playbook-action",
        "parallel",
        "if-condition",
        "while-condition",
        "switch-condition",
    }
)

# Step properties holding a single step-id reference, plus the two list/map
# shaped ones (next_steps, cases) that are handled separately.
STEP_REFERENCE_FIELDS = ("on_completion", "on_success", "on_failure", "on_true", "on_false")


@dataclass(frozen=True)
class Playbook:
    """Immutable view over a playbook JSON object."""

    raw: Mapping[str, Any]

    @classmethod
    def from_dict(cls, data: Mapping[str, Any], normalize: bool = True) -> "Playbook":
        """Wrap a JSON object, optionally normalizing created/modified to
        millisecond-UTC form. The input is copied, never aliased."""
        owned = copy.deepcopy(dict(data))
        if normalize:
            for field in ("created", "modified"):
                value = owned.get(field)
                if isinstance(value, str):
                    owned[field] = normalize_timestamp(value)
        return cls(raw=owned)

    @property
    def id(self) -> str | None:
        return self.raw.get("id")

    @property
    def name(self) -> str | None:
        return self.raw.get("name")

    @property
    def description(self) -> str | None:
        return self.raw.get("description")

    @property
    def created(self) -> str | None:
        return self.raw.get("created")

    @property
    def modified(self) -> str | None:
        return self.raw.get("modified")

    @property
    def created_by(self) -> str | None:
        return self.raw.get("created_by")

    @property
    def workflow_start(self) -> str | None:
        return self.raw.get("workflow_start")

    @property
    def workflow(self) -> dict[str, Any]:
        workflow = self.raw.get("workflow")
        return workflow if isinstance(workflow, dict) else {}

    @property
    def labels(self) -> list[str]:
        labels = self.raw.get("labels")
        return list(labels) if isinstance(labels, list) else []

    @property
    def playbook_types(self) -> list[str]:
        values = self.raw.get("playbook_types")
        return list(values) if isinstance(values, list) else []

    @property
    def severity(self) -> int | None:
        value = self.raw.get("severity")
        return value if isinstance(value, int) and not isinstance(value, bool) else None

    @property
    def revoked(self) -> bool:
        return self.raw.get("revoked") is True

    @property
    def signatures(self) -> list[dict]:
        signatures = self.raw.get("signatures")
        return list(signatures) if isinstance(signatures, list) else []

    @property
    def variables(self) -> dict[str, Any]:
        variables = self.raw.get("playbook_variables")
        return variables if isinstance(variables, dict) else {}

    def to_dict(self) -> dict[str, Any]:
        return copy.deepcopy(dict(self.raw))

    def replace(self, **updates: Any) -> "Playbook":
        """New playbook with top-level properties replaced (None deletes)."""
        data = self.to_dict()
        for key, value in updates.items():
            if value is None:
                data.pop(key, None)
            else:
                data[key] = value
        return Playbook(raw=data)

    def without_signatures(self) -> "Playbook":
        return self.replace(signatures=None)

    def iter_step_references(self) -> Iterator[tuple[str, str, str]]:
        """Yield (step_id, json-path-suffix, referenced-step-id) for every
        step reference declared in the workflow."""
        for step_id, step in self.workflow.items():
            if not isinstance(step, dict):
                continue
            for field in STEP_REFERENCE_FIELDS:
                target = step.get(field)
                if isinstance(target, str):
                    yield step_id, field, target
            next_steps = step.get("next_steps")
            if isinstance(next_steps, list):
                for index, target in enumerate(next_steps):
                    if isinstance(target, str):
                        yield step_id, f"next_steps[{index}]", target
            cases = step.get("cases")
            if isinstance(cases, dict):
                for literal, target in cases.items():
                    if isinstance(target, str):
                        yield step_id, f"cases.{literal}", target


def parse_playbook(data: bytes | str) -> Playbook:
    """Parse UTF-8 JSON bytes into a playbook.

    Unknown top-level properties are preserved verbatim. Raises
    MalformedJson for undecodable input and NotAPlaybook when the document
    is not an object with ``type == "playbook"``.
    """
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedJson(f"input is not valid UTF-8: {exc}") from exc
    else:
        text = data
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedJson(f"input is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict) or obj.get("type") != PLAYBOOK_TYPE:
        raise NotAPlaybook('document has no type property equal to "playbook"')
    return Playbook.from_dict(obj)
