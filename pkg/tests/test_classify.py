from __future__ import annotations

import random

from cacao_kms import classify_metadata
from cacao_kms.core.classify import (
    ADMINISTRATIVE_PROPERTIES,
    DESCRIPTIVE_PROPERTIES,
    OPERATIONAL_PROPERTIES,
    TECHNICAL_PROPERTIES,
)
from cacao_kms.core.model import Playbook
from cacao_kms.seed import sample_playbook


def test_category_lists_are_pairwise_disjoint():
    lists = [
        set(ADMINISTRATIVE_PROPERTIES),
        set(DESCRIPTIVE_PROPERTIES),
        set(TECHNICAL_PROPERTIES),
        set(OPERATIONAL_PROPERTIES),
    ]
    for i, a in enumerate(lists):
        for b in lists[i + 1 :]:
            assert not a & b


def test_created_by_is_administrative():
    doc = sample_playbook(random.Random(1))
    result = classify_metadata(Playbook.from_dict(doc))
    assert result.administrative["created_by"] == doc["created_by"]


def test_labels_are_descriptive():
    doc = sample_playbook(random.Random(2))
    result = classify_metadata(Playbook.from_dict(doc))
    assert result.descriptive["labels"] == doc["labels"]


def test_priority_and_sectors_are_operational():
    doc = sample_playbook(random.Random(3))
    doc["industry_sectors"] = ["energy"]
    result = classify_metadata(Playbook.from_dict(doc))
    assert result.operational["priority"] == doc["priority"]
    assert result.operational["industry_sectors"] == ["energy"]


def test_unlisted_properties_excluded_and_union_within_document():
    rng = random.Random(4)
    for _ in range(20):
        doc = sample_playbook(rng)
        result = classify_metadata(Playbook.from_dict(doc))
        buckets = result.to_dict()
        seen: set[str] = set()
        for bucket in buckets.values():
            assert not seen & bucket.keys()
            seen |= bucket.keys()
        assert seen <= doc.keys()
        assert "workflow" not in seen
        assert "workflow_start" not in seen
        for prop in ("x_org_tracking",):
            assert prop not in seen


def test_every_present_listed_property_is_placed():
    doc = sample_playbook(random.Random(5))
    doc["playbook_processing_summary"] = {"manual_playbook": True}
    doc["external_references"] = [{"name": "ref"}]
    doc["markings"] = []
    result = classify_metadata(Playbook.from_dict(doc))
    merged = {
        **result.administrative,
        **result.descriptive,
        **result.technical,
        **result.operational,
    }
    all_listed = (
        set(ADMINISTRATIVE_PROPERTIES)
        | set(DESCRIPTIVE_PROPERTIES)
        | set(TECHNICAL_PROPERTIES)
        | set(OPERATIONAL_PROPERTIES)
    )
    assert merged.keys() == all_listed & doc.keys()
