"""Deterministic sample-playbook generation.

Used by the CLI ``seed`` command to populate a demo instance and by the test
suite as a fixture factory. All randomness flows through an explicit
``random.Random`` so corpora are reproducible.
"""

from __future__ import annotations

import random
import uuid
from typing import Any

from cacao_kms.core.timestamps import format_timestamp, now_utc, parse_timestamp

_NAME_PREFIXES = (
    "Ransomware containment",
    "Phishing triage",
    "Credential reset",
    "Malware eradication",
    "DDoS mitigation",
    "Data exfiltration response",
    "Brute force lockdown",
    "Lateral movement hunt",
    "Patch rollout",
    "Log4j remediation",
)
_LABELS = ("ransomware", "phishing", "malware", "ddos", "bruteforce", "cloud", "windows", "linux")
_PLAYBOOK_TYPES = ("detection", "investigation", "mitigation", "remediation", "prevention")
_SECTORS = ("energy", "healthcare", "finance", "telecom", "retail")


def _uuid4(rng: random.Random | None = None) -> str:
    if rng is None:
        return str(uuid.uuid4())
    return str(uuid.UUID(int=rng.getrandbits(128), version=4))


def minimal_playbook(
    playbook_id: str | None = None,
    name: str = "Minimal playbook",
    created: str | None = None,
    modified: str | None = None,
    rng: random.Random | None = None,
) -> dict[str, Any]:
    """Smallest legal document: a start step chained to an end step."""
    start_id = f"start--{_uuid4(rng)}"
    end_id = f"end--{_uuid4(rng)}"
    created = created or now_utc()
    return {
        "type": "playbook",
        "spec_version": "cacao-2.0",
        "id": playbook_id or f"playbook--{_uuid4(rng)}",
        "name": name,
        "created": created,
        "modified": modified or created,
        "created_by": f"identity--{_uuid4(rng)}",
        "workflow_start": start_id,
        "workflow": {
            start_id: {"type": "start", "on_completion": end_id},
            end_id: {"type": "end"},
        },
    }


def action_playbook(
    n_actions: int = 1,
    delay_ms: int = 0,
    playbook_id: str | None = None,
    name: str = "Action chain",
    rng: random.Random | None = None,
) -> dict[str, Any]:
    """start -> n action steps -> end, each action carrying one command."""
    doc = minimal_playbook(playbook_id=playbook_id, name=name, rng=rng)
    start_id = doc["workflow_start"]
    end_id = next(sid for sid, s in doc["workflow"].items() if s["type"] == "end")
    previous = start_id
    for index in range(n_actions):
        action_id = f"action--{_uuid4(rng)}"
        doc["workflow"][previous]["on_completion"] = action_id
        doc["workflow"][action_id] = {
            "type": "action",
            "name": f"step {index + 1}",
            "commands": [{"type": "manual", "command": f"run task {index + 1}"}],
            "delay_ms": delay_ms,
            "on_completion": end_id,
        }
        previous = action_id
    return doc


_COMMAND_POOL = (
    "isolate host {h} from the production VLAN and move it to quarantine",
    "collect volatile memory and process listing from host {h}",
    "block outbound traffic to the flagged indicator set on the edge firewall",
    "reset credentials for all accounts observed on host {h} in the last 24h",
    "snapshot attached volumes of host {h} for forensic preservation",
    "notify the on-call incident commander with the collected context",
    "run the endpoint agent full scan on host {h} and attach the report",
)


def sample_playbook(rng: random.Random) -> dict[str, Any]:
    """A realistic, search-friendly playbook with varied metadata.

    Sized like real-world content (a few KB of canonical JSON) so storage
    figures measured over seeded corpora resemble production ones.
    """
    prefix = rng.choice(_NAME_PREFIXES)
    doc = action_playbook(
        n_actions=rng.randint(2, 6),
        name=f"{prefix} #{rng.randint(1, 999)}",
        rng=rng,
    )
    host = f"host-{rng.randint(1, 99):03d}"
    for step in doc["workflow"].values():
        if step["type"] != "action":
            continue
        step["description"] = rng.choice(_COMMAND_POOL).format(h=host)
        step["commands"] = [
            {"type": "bash", "command": rng.choice(_COMMAND_POOL).format(h=host)}
            for _ in range(rng.randint(1, 3))
        ]
    window_start = parse_timestamp("2025-01-01T00:00:00.000Z")
    window_mid = parse_timestamp("2025-06-01T00:00:00.000Z")
    window_end = parse_timestamp("2025-07-01T00:00:00.000Z")
    assert window_start and window_mid and window_end
    created = window_start + rng.random() * (window_mid - window_start)
    doc["created"] = format_timestamp(created)
    doc["modified"] = format_timestamp(created + rng.random() * (window_end - created))
    doc["description"] = (
        f"Automated response procedure for {prefix.lower()} incidents: triages the "
        f"alert, contains the affected asset, preserves evidence, and reports the "
        f"outcome to the incident channel."
    )
    doc["labels"] = rng.sample(_LABELS, rng.randint(1, 3))
    doc["playbook_types"] = rng.sample(_PLAYBOOK_TYPES, rng.randint(1, 2))
    doc["severity"] = rng.randint(0, 100)
    doc["priority"] = rng.randint(0, 100)
    doc["impact"] = rng.randint(0, 100)
    doc["external_references"] = [
        {
            "name": f"SOC runbook {rng.randint(100, 999)}",
            "url": f"https://soc.example/runbooks/{rng.randint(100, 999)}",
        }
    ]
    if rng.random() < 0.3:
        doc["industry_sectors"] = rng.sample(_SECTORS, rng.randint(1, 2))
    if rng.random() < 0.1:
        doc["revoked"] = True
    if rng.random() < 0.25:
        doc["x_org_tracking"] = {"ticket": f"IR-{rng.randint(1000, 9999)}"}
    return doc


def demo_corpus(count: int, seed: int = 20250101) -> list[dict[str, Any]]:
    rng = random.Random(seed)
    return [sample_playbook(rng) for _ in range(count)]
