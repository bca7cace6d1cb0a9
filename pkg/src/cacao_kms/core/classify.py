"""Metadata classification for indexing and search.

Top-level playbook properties fall into four disjoint categories;
properties outside the four lists (workflow, extensions, ...) are excluded.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from cacao_kms.core.model import Playbook

ADMINISTRATIVE_PROPERTIES = (
    "id",
    "type",
    "spec_version",
    "created_by",
    "created",
    "modified",
    "markings",
    "revoked",
)
DESCRIPTIVE_PROPERTIES = ("name", "description", "external_references", "labels")
TECHNICAL_PROPERTIES = ("playbook_processing_summary", "playbook_types", "playbook_activities")
OPERATIONAL_PROPERTIES = ("priority", "severity", "impact", "industry_sectors")


@dataclass
class MetadataClassification:
    administrative: dict[str, Any] = field(default_factory=dict)
    descriptive: dict[str, Any] = field(default_factory=dict)
    technical: dict[str, Any] = field(default_factory=dict)
    operational: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, dict[str, Any]]:
        return {
            "administrative": self.administrative,
            "descriptive": self.descriptive,
            "technical": self.technical,
            "operational": self.operational,
        }


def classify_metadata(playbook: Playbook) -> MetadataClassification:
    """Place each present, listed property into its category."""
    raw = playbook.raw
    return MetadataClassification(
        administrative={p: raw[p] for p in ADMINISTRATIVE_PROPERTIES if p in raw},
        descriptive={p: raw[p] for p in DESCRIPTIVE_PROPERTIES if p in raw},
        technical={p: raw[p] for p in TECHNICAL_PROPERTIES if p in raw},
        operational={p: raw[p] for p in OPERATIONAL_PROPERTIES if p in raw},
    )
