from __future__ import annotations

import json

import pytest

from cacao_kms import canonicalize, parse_playbook
from cacao_kms.core.timestamps import (
    bump_millisecond,
    duration_ms,
    normalize_timestamp,
    parse_timestamp,
)
from cacao_kms.errors import MalformedJson, NotAPlaybook
from cacao_kms.seed import minimal_playbook


def test_parse_minimal_playbook():
    playbook = parse_playbook(json.dumps(minimal_playbook()).encode("utf-8"))
    assert playbook.id.startswith("playbook--")
    assert len(playbook.workflow) == 2


def test_malformed_json():
    with pytest.raises(MalformedJson):
        parse_playbook(b"{")
    with pytest.raises(MalformedJson):
        parse_playbook(b"\xff\xfe")


def test_not_a_playbook():
    with pytest.raises(NotAPlaybook):
        parse_playbook(b'{"type": "indicator"}')
    with pytest.raises(NotAPlaybook):
        parse_playbook(b'{"name": "no type at all"}')
    with pytest.raises(NotAPlaybook):
        parse_playbook(b"[1, 2, 3]")


def test_unknown_properties_survive_canonical_round_trip():
    doc = minimal_playbook()
    doc["x_org_custom"] = {"nested": [1, 2, {"deep": "value"}], "flag": True}
    doc["zz_last"] = "kept"
    first = canonicalize(parse_playbook(json.dumps(doc)))
    second = canonicalize(parse_playbook(first))
    assert first == second
    assert json.loads(first)["x_org_custom"] == doc["x_org_custom"]
    assert json.loads(first)["zz_last"] == "kept"


def test_timestamps_normalized_on_ingest():
    doc = minimal_playbook(
        created="2025-03-01T12:00:00+02:00", modified="2025-03-01T12:00:00.5Z"
    )
    playbook = parse_playbook(json.dumps(doc))
    assert playbook.created == "2025-03-01T10:00:00.000Z"
    assert playbook.modified == "2025-03-01T12:00:00.500Z"


def test_replace_and_without_signatures():
    playbook = parse_playbook(json.dumps(minimal_playbook()))
    signed = playbook.replace(signatures=[{"algorithm": "x", "value": "y"}])
    assert signed.signatures and not playbook.signatures
    assert signed.without_signatures().raw == playbook.raw


def test_timestamp_helpers():
    assert normalize_timestamp("2025-01-01t00:00:00z") == "2025-01-01T00:00:00.000Z"
    assert normalize_timestamp("not a date") == "not a date"
    assert parse_timestamp("2025-13-01T00:00:00Z") is None
    assert bump_millisecond("2025-01-01T00:00:00.999Z") == "2025-01-01T00:00:01.000Z"
    assert duration_ms("2025-01-01T00:00:00.000Z", "2025-01-01T00:00:01.250Z") == 1250.0
