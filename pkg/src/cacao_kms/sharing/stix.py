"""STIX 2.1 Course-of-Action envelopes carrying serialized playbooks.

The interchange contract: a ``course-of-action`` object whose ``extensions``
map holds, under the fixed extension-definition id below, a
property-extension with the playbook's id/format/created/modified and the
base64 of its canonical bytes. Course-of-action ids are UUIDv5-derived from
the playbook id and modified timestamp, so converting the same playbook
version always yields the same STIX id and republishing is deduplicable.
"""

from __future__ import annotations

import base64
import binascii
import uuid
from typing import Any

from cacao_kms.core.canonical import canonicalize
from cacao_kms.core.model import Playbook, parse_playbook
from cacao_kms.core.validate import validate_playbook
from cacao_kms.errors import (
    BadEnvelope,
    EmbeddedValidationFailed,
    KmsError,
    MetadataMismatch,
    ValidationFailed,
)

# Fixed at build time; documented as part of the interchange contract.
EXTENSION_DEFINITION_ID = "extension-definition--4243b1c5-2951-43f2-ac8f-b9b1a5c83773"

# Namespace for deriving deterministic course-of-action ids.
_COA_NAMESPACE = uuid.UUID("456bb7ea-f032-4e25-8030-33b4f5c04c11")

STIX_SPEC_VERSION = "2.1"
PLAYBOOK_FORMAT = "cacao-2.0"


def coa_id_for(playbook_id: str, modified: str) -> str:
    return f"course-of-action--{uuid.uuid5(_COA_NAMESPACE, f'{playbook_id}|{modified}')}"


def to_stix_coa(playbook: Playbook) -> dict[str, Any]:
    """Wrap a valid playbook in a deterministic course-of-action envelope."""
    report = validate_playbook(playbook)
    if not report.valid:
        raise ValidationFailed(
            "cannot convert an invalid playbook", details=report.to_dict()
        )
    envelope: dict[str, Any] = {
        "type": "course-of-action",
        "spec_version": STIX_SPEC_VERSION,
        "id": coa_id_for(playbook.id, playbook.modified),
        "created": playbook.created,
        "modified": playbook.modified,
        "name": playbook.name,
        "extensions": {
            EXTENSION_DEFINITION_ID: {
                "extension_type": "property-extension",
                "playbook_id": playbook.id,
                "playbook_format": PLAYBOOK_FORMAT,
                "playbook_created": playbook.created,
                "playbook_modified": playbook.modified,
                "playbook_base64": base64.b64encode(canonicalize(playbook)).decode("ascii"),
            }
        },
    }
    if playbook.description is not None:
        envelope["description"] = playbook.description
    return envelope


def from_stix_coa(envelope: dict[str, Any]) -> Playbook:
    """Extract and validate the embedded playbook.

    Raises BadEnvelope for structural problems, MetadataMismatch when the
    extension metadata disagrees with the embedded document, and
    EmbeddedValidationFailed when the playbook itself is invalid.
    """
    if not isinstance(envelope, dict):
        raise BadEnvelope("envelope is not an object")
    if envelope.get("type") != "course-of-action":
        raise BadEnvelope('envelope type must be "course-of-action"')
    if envelope.get("spec_version") != STIX_SPEC_VERSION:
        raise BadEnvelope(f'envelope spec_version must be "{STIX_SPEC_VERSION}"')
    extensions = envelope.get("extensions")
    if not isinstance(extensions, dict) or EXTENSION_DEFINITION_ID not in extensions:
        raise BadEnvelope(f"envelope carries no {EXTENSION_DEFINITION_ID} extension")
    extension = extensions[EXTENSION_DEFINITION_ID]
    if not isinstance(extension, dict):
        raise BadEnvelope("playbook extension is not an object")
    if extension.get("playbook_format") != PLAYBOOK_FORMAT:
        raise BadEnvelope(f'extension playbook_format must be "{PLAYBOOK_FORMAT}"')
    encoded = extension.get("playbook_base64")
    if not isinstance(encoded, str):
        raise BadEnvelope("extension carries no playbook_base64")
    try:
        raw = base64.b64decode(encoded, validate=True)
    except (binascii.Error, ValueError) as exc:
        raise BadEnvelope(f"playbook_base64 is not valid base64: {exc}") from exc
    try:
        playbook = parse_playbook(raw)
    except KmsError as exc:
        raise BadEnvelope(f"embedded document is not a playbook: {exc.message}") from exc

    for field, value in (
        ("playbook_id", playbook.id),
        ("playbook_created", playbook.created),
        ("playbook_modified", playbook.modified),
    ):
        if extension.get(field) != value:
            raise MetadataMismatch(
                f"extension {field}={extension.get(field)!r} disagrees with the "
                f"embedded playbook's {value!r}"
            )

    report = validate_playbook(playbook)
    if not report.valid:
        raise EmbeddedValidationFailed(
            "embedded playbook failed validation", details=report.to_dict()
        )
    return playbook
