"""KPI reporting over playbooks, executions, and sharings.

Computed on demand from one consistent store snapshot. Percentiles use the
nearest-rank method (the ceil(q*N)-th order statistic of the sorted
multiset), which is exactly reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Sequence

from cacao_kms.core.canonical import canonical_bytes
from cacao_kms.core.timestamps import duration_ms
from cacao_kms.store.documents import DocumentStore


@dataclass
class KpiReport:
    totals: dict[str, int] = field(default_factory=dict)
    executions_by_status: dict[str, int] = field(default_factory=dict)
    success_rate: float = 0.0
    duration_stats: dict[str, float] = field(default_factory=dict)
    top_executed: list[dict[str, Any]] = field(default_factory=list)
    label_histogram: dict[str, int] = field(default_factory=dict)
    storage: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "totals": self.totals,
            "executions_by_status": self.executions_by_status,
            "success_rate": self.success_rate,
            "duration_stats": self.duration_stats,
            "top_executed": self.top_executed,
            "label_histogram": self.label_histogram,
            "storage": self.storage,
        }


def percentile_nearest_rank(values: Sequence[float], q: float) -> float:
    """ceil(q*N)-th order statistic, 1-indexed over the sorted values."""
    if not values:
        return 0.0
    if not 0 < q <= 1:
        raise ValueError("q must be in (0, 1]")
    ordered = sorted(values)
    rank = math.ceil(q * len(ordered))
    return ordered[rank - 1]


def compute_kpis(docs: DocumentStore) -> KpiReport:
    snapshot = docs.snapshot()
    current = list(snapshot["current"].values())
    history = snapshot["history"]
    executions = list(snapshot["executions"].values())
    sharings = snapshot["sharings"]

    by_status: dict[str, int] = {}
    for record in executions:
        by_status[record["status"]] = by_status.get(record["status"], 0) + 1
    successes = by_status.get("success", 0)
    failures = by_status.get("failed", 0)
    terminal = successes + failures
    success_rate = successes / terminal if terminal else 0.0

    durations = []
    for record in executions:
        if record["status"] in ("success", "failed") and record.get("ended_at"):
            elapsed = duration_ms(record["started_at"], record["ended_at"])
            if elapsed is not None:
                durations.append(elapsed)
    duration_stats = {
        "mean_ms": round(sum(durations) / len(durations), 2) if durations else 0.0,
        "p50_ms": percentile_nearest_rank(durations, 0.5),
        "p95_ms": percentile_nearest_rank(durations, 0.95),
    }

    run_counts: dict[str, int] = {}
    for record in executions:
        run_counts[record["playbook_id"]] = run_counts.get(record["playbook_id"], 0) + 1
    top_executed = [
        {"playbook_id": pid, "count": count}
        for pid, count in sorted(run_counts.items(), key=lambda kv: (-kv[1], kv[0]))[:10]
    ]

    label_histogram: dict[str, int] = {}
    for record in current:
        for label in record["playbook"].get("labels", []):
            if isinstance(label, str):
                label_histogram[label] = label_histogram.get(label, 0) + 1

    sizes = [len(canonical_bytes(record["playbook"])) for record in current]
    avg_doc_bytes = round(sum(sizes) / len(sizes), 2) if sizes else 0.0

    return KpiReport(
        totals={
            "playbooks_current": len(current),
            "versions_total": len(current) + len(history),
            "executions_total": len(executions),
            "sharings_total": len(sharings),
        },
        executions_by_status=by_status,
        success_rate=success_rate,
        duration_stats=duration_stats,
        top_executed=top_executed,
        label_histogram=label_histogram,
        storage={"avg_current_doc_bytes": avg_doc_bytes},
    )
