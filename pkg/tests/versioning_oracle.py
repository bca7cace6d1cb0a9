"""Naive full-list versioning model used as the storage oracle.

The model keeps one ordered list of playbook documents per id; the real
store must agree with it exactly after any operation sequence. Operations
whose outputs embed store-generated timestamps (restore) feed the returned
document back into the model, keeping it exact without re-implementing the
store's clock.
"""

from __future__ import annotations

import copy
import random

from cacao_kms.core.canonical import canonical_bytes
from cacao_kms.core.model import Playbook
from cacao_kms.core.timestamps import bump_millisecond, parse_timestamp
from cacao_kms.errors import NotFound, StaleWrite
from cacao_kms.seed import sample_playbook
from cacao_kms.store.playbooks import PlaybookStore


class ListModel:
    def __init__(self) -> None:
        self.versions: dict[str, list[dict]] = {}

    def save(self, doc: dict) -> str:
        """Returns the expected outcome: stored | noop | stale."""
        pid = doc["id"]
        chain = self.versions.get(pid)
        if chain is None:
            self.versions[pid] = [copy.deepcopy(doc)]
            return "stored"
        if canonical_bytes(doc) == canonical_bytes(chain[-1]):
            return "noop"
        if parse_timestamp(doc["modified"]) <= parse_timestamp(chain[-1]["modified"]):
            return "stale"
        chain.append(copy.deepcopy(doc))
        return "stored"

    def record_restore(self, pid: str, returned_doc: dict) -> None:
        self.versions[pid].append(copy.deepcopy(returned_doc))

    def delete(self, pid: str) -> bool:
        return self.versions.pop(pid, None) is not None


def assert_core_invariants(store: PlaybookStore) -> None:
    """One-current and revision-contiguity, cheap enough to run per step."""
    snap = store.docs.snapshot()
    history_by_id: dict[str, list[int]] = {}
    for record in snap["history"].values():
        assert record["is_current"] is False
        history_by_id.setdefault(record["playbook"]["id"], []).append(record["revision"])
    for key, record in snap["current"].items():
        assert record["is_current"] is True
        assert record["playbook"]["id"] == key, "current record keyed by foreign id"
        past = sorted(history_by_id.pop(key, []))
        assert past == list(range(1, record["revision"])), "revision gap"
    assert not history_by_id, f"history without a current record: {set(history_by_id)}"


def assert_store_matches_model(store: PlaybookStore, model: ListModel) -> None:
    docs = store.docs
    current_ids = {record["playbook"]["id"] for record in docs.scan("current")}
    assert current_ids == set(model.versions), "current ids diverge from model"
    assert docs.count("current") == len(current_ids), "one-current invariant broken"

    history = docs.scan("history")
    by_id: dict[str, list[dict]] = {}
    for record in history:
        assert record["is_current"] is False
        by_id.setdefault(record["playbook"]["id"], []).append(record)
    for pid in by_id:
        assert pid in model.versions, f"orphan history for {pid}"

    for pid, chain in model.versions.items():
        current = store.get_current(pid)
        assert current["revision"] == len(chain)
        assert current["is_current"] is True
        assert canonical_bytes(current["playbook"]) == canonical_bytes(chain[-1])

        past = sorted(by_id.get(pid, []), key=lambda r: r["revision"])
        assert [r["revision"] for r in past] == list(range(1, len(chain))), (
            f"revisions not contiguous for {pid}"
        )
        for record, expected in zip(past, chain[:-1]):
            assert canonical_bytes(record["playbook"]) == canonical_bytes(expected)

        timestamps = [parse_timestamp(doc["modified"]) for doc in chain]
        assert all(a < b for a, b in zip(timestamps, timestamps[1:])), (
            f"modified not strictly increasing for {pid}"
        )


def mutate_next_version(doc: dict, rng: random.Random) -> dict:
    doc = copy.deepcopy(doc)
    doc["modified"] = bump_millisecond(doc["modified"])
    doc["name"] = f"{doc['name']} r{rng.randint(0, 999)}"
    if rng.random() < 0.3:
        doc["severity"] = rng.randint(0, 100)
    return doc


def run_random_operations(
    store: PlaybookStore,
    model: ListModel,
    n_ops: int,
    n_ids: int,
    seed: int,
    full_check_every: int = 1,
) -> dict[str, int]:
    """Drive identical random operations through store and model.

    The one-current/contiguity invariants are asserted after every
    operation; full model equivalence every ``full_check_every`` steps and
    at the end.
    """
    rng = random.Random(seed)
    id_pool = [sample_playbook(rng)["id"] for _ in range(n_ids)]
    outcomes = {"stored": 0, "noop": 0, "stale": 0, "restore": 0, "delete": 0, "notfound": 0}

    def fresh_doc(pid: str) -> dict:
        doc = sample_playbook(rng)
        doc["id"] = pid
        return doc

    for step in range(n_ops):
        pid = rng.choice(id_pool)
        known = pid in model.versions
        action = rng.random()
        if not known or action < 0.55:
            if known and action < 0.12:
                doc = copy.deepcopy(model.versions[pid][-1])  # identical resubmit
            elif known and action < 0.22:
                doc = mutate_next_version(model.versions[pid][-1], rng)
                doc["modified"] = model.versions[pid][-1]["modified"]  # stale on purpose
            elif known:
                doc = mutate_next_version(model.versions[pid][-1], rng)
            else:
                doc = fresh_doc(pid)
            expected = model.save(doc)
            try:
                record = store.save(Playbook.from_dict(doc))
            except StaleWrite:
                assert expected == "stale", f"unexpected StaleWrite at step {step}"
            else:
                assert expected in ("stored", "noop")
                if expected == "noop":
                    assert canonical_bytes(record["playbook"]) == canonical_bytes(
                        model.versions[pid][-1]
                    )
            outcomes[expected] += 1
        elif action < 0.8:
            revision = rng.randint(1, len(model.versions[pid]) + 1)
            try:
                record = store.restore_version(pid, revision)
            except NotFound:
                assert revision > len(model.versions[pid])
                outcomes["notfound"] += 1
            else:
                if revision != len(model.versions[pid]):
                    model.record_restore(pid, record["playbook"])
                outcomes["restore"] += 1
        else:
            try:
                store.delete(pid)
            except NotFound:
                assert not known
                outcomes["notfound"] += 1
            else:
                assert model.delete(pid)
                outcomes["delete"] += 1
        assert_core_invariants(store)
        if step % full_check_every == 0:
            assert_store_matches_model(store, model)
    assert_store_matches_model(store, model)
    return outcomes
