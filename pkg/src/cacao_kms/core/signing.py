"""Embedded playbook signatures.

The signature value is a keyed digest (HMAC-SHA-256, lowercase hex) over the
canonical bytes of the playbook with the ``signatures`` property removed, so
any number of signatures can coexist without invalidating each other.
"""

from __future__ import annotations

import hashlib
import hmac

from cacao_kms.core.canonical import canonicalize
from cacao_kms.core.model import Playbook
from cacao_kms.core.timestamps import now_utc
from cacao_kms.core.validate import validate_playbook
from cacao_kms.errors import InvalidPlaybook, NoSignatures

SIGNATURE_ALGORITHM = "hmac-sha-256"


def signing_payload(playbook: Playbook) -> bytes:
    """Canonical bytes the signature is computed over."""
    return canonicalize(playbook.without_signatures())


def _digest(payload: bytes, key: bytes | str) -> str:
    if isinstance(key, str):
        key = key.encode("utf-8")
    return hmac.new(key, payload, hashlib.sha256).hexdigest()


def sign_playbook(playbook: Playbook, signee: str, key: bytes | str) -> Playbook:
    """Return the playbook with one signature appended.

    Raises InvalidPlaybook when the playbook fails validation; the report is
    attached as details.
    """
    report = validate_playbook(playbook)
    if not report.valid:
        raise InvalidPlaybook("cannot sign an invalid playbook", details=report.to_dict())
    signature = {
        "algorithm": SIGNATURE_ALGORITHM,
        "signee": signee,
        "value": _digest(signing_payload(playbook), key),
        "created": now_utc(),
    }
    return playbook.replace(signatures=playbook.signatures + [signature])


def verify_signature(playbook: Playbook, key: bytes | str) -> list[bool]:
    """Verify every embedded signature against the canonical content.

    One boolean per signature, in embedded order. Signatures with an
    unsupported algorithm or a missing value verify as False. Raises
    NoSignatures when the playbook carries none.
    """
    signatures = playbook.signatures
    if not signatures:
        raise NoSignatures("playbook carries no signatures")
    expected = _digest(signing_payload(playbook), key)
    results = []
    for signature in signatures:
        if not isinstance(signature, dict):
            results.append(False)
            continue
        if signature.get("algorithm") != SIGNATURE_ALGORITHM:
            results.append(False)
            continue
        value = signature.get("value")
        ok = isinstance(value, str) and hmac.compare_digest(value, expected)
        results.append(ok)
    return results
