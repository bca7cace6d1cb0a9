from __future__ import annotations

import json
import uuid

import pytest

from cacao_kms import validate_playbook
from cacao_kms.core.model import Playbook
from cacao_kms.seed import minimal_playbook
from mutation_corpus import base_document, build_mutation_cases


def _report(doc):
    return validate_playbook(Playbook.from_dict(doc))


def test_base_fixture_is_valid():
    report = _report(base_document())
    assert report.valid, report.to_dict()


def test_minimal_playbook_is_valid():
    assert _report(minimal_playbook()).valid


def test_dangling_workflow_start():
    doc = minimal_playbook()
    doc["workflow_start"] = f"start--{uuid.uuid4()}"
    report = _report(doc)
    assert [v.code for v in report.violations] == ["DANGLING_WORKFLOW_START"]
    assert report.violations[0].path == "$.workflow_start"


def test_modified_before_created():
    doc = minimal_playbook(
        created="2025-05-01T00:00:00.000Z", modified="2025-04-01T00:00:00.000Z"
    )
    report = _report(doc)
    assert [v.code for v in report.violations] == ["MODIFIED_BEFORE_CREATED"]


def test_report_shape_and_determinism():
    doc = minimal_playbook()
    del doc["name"]
    doc["severity"] = -3
    report = _report(doc)
    assert not report.valid
    assert report.to_dict()["valid"] is False
    codes = [(v.path, v.code) for v in report.violations]
    assert codes == sorted(codes)
    assert _report(doc).to_dict() == report.to_dict()


def test_valid_iff_no_violations():
    good = _report(minimal_playbook())
    assert good.valid and good.violations == []


@pytest.mark.parametrize("case", build_mutation_cases(), ids=lambda c: c.name)
def test_single_mutation_yields_single_violation(case):
    report = _report(case.document)
    found = [(v.code, v.path) for v in report.violations]
    assert found == [(case.expected_code, case.expected_path)], json.dumps(
        report.to_dict(), indent=2
    )


def test_mutation_corpus_size():
    assert len(build_mutation_cases()) >= 20
