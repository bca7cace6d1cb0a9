"""Embedded on-disk document store.

Named collections of JSON documents with atomic multi-document batches.
Durability model: every batch is appended to a write-ahead log (flushed per
batch); compaction rewrites one newline-delimited canonical-JSON snapshot
file per collection via atomic rename and truncates the log. Replay is
idempotent, so a crash between those two steps is harmless.

Readers are never blocked: the whole state is an immutable mapping swapped
atomically under the writer lock, so ``snapshot()`` hands out a consistent
view of every collection at a single point in time.
"""

from __future__ import annotations

import copy
import hashlib
import json
import logging
import os
import threading
from pathlib import Path
from typing import Iterable, Iterator, Mapping

from cacao_kms.core.canonical import canonical_str

logger = logging.getLogger(__name__)

COLLECTIONS = (
    "current",
    "history",
    "executions",
    "sharings",
    "taxii_collections",
    "taxii_objects",
    "taxii_status",
)

_WAL_FILE = "wal.jsonl"

# (op, collection, key, doc-or-None)
Op = tuple[str, str, str, "dict | None"]


def put_op(collection: str, key: str, doc: dict) -> Op:
    return ("put", collection, key, doc)


def delete_op(collection: str, key: str) -> Op:
    return ("delete", collection, key, None)


class DocumentStore:
    """Thread-safe store; pass ``data_dir=None`` for a purely in-memory one."""

    def __init__(self, data_dir: str | Path | None = None, auto_compact_bytes: int = 32 << 20):
        self._lock = threading.RLock()
        self._state: dict[str, dict[str, dict]] = {name: {} for name in COLLECTIONS}
        self._data_dir = Path(data_dir) if data_dir is not None else None
        self._auto_compact_bytes = auto_compact_bytes
        self._wal = None
        self._wal_bytes = 0
        if self._data_dir is not None:
            self._data_dir.mkdir(parents=True, exist_ok=True)
            self._load()
            self._wal = open(self._data_dir / _WAL_FILE, "a", encoding="utf-8")
            self._wal_bytes = (self._data_dir / _WAL_FILE).stat().st_size

    # -- reads ------------------------------------------------------------

    def get(self, collection: str, key: str) -> dict | None:
        doc = self._state[collection].get(key)
        return copy.deepcopy(doc) if doc is not None else None

    def scan(self, collection: str) -> list[dict]:
        return [copy.deepcopy(doc) for doc in self._state[collection].values()]

    def items(self, collection: str) -> list[tuple[str, dict]]:
        return [(k, copy.deepcopy(d)) for k, d in self._state[collection].items()]

    def count(self, collection: str) -> int:
        return len(self._state[collection])

    def snapshot(self) -> Mapping[str, Mapping[str, dict]]:
        """Consistent point-in-time view of all collections. Do not mutate."""
        return self._state

    def state_hash(self) -> str:
        return hashlib.sha256(canonical_str(self._state).encode("utf-8")).hexdigest()

    # -- writes -----------------------------------------------------------

    def lock(self) -> threading.RLock:
        """Writer lock for read-modify-write sequences spanning apply()."""
        return self._lock

    def put(self, collection: str, key: str, doc: dict) -> None:
        self.apply([put_op(collection, key, doc)])

    def delete(self, collection: str, key: str) -> bool:
        existed = key in self._state[collection]
        if existed:
            self.apply([delete_op(collection, key)])
        return existed

    def apply(self, ops: Iterable[Op]) -> None:
        """Apply a batch atomically: readers observe all of it or none."""
        ops = list(ops)
        if not ops:
            return
        with self._lock:
            state = dict(self._state)
            touched: set[str] = set()
            for op, collection, key, doc in ops:
                if collection not in state:
                    raise KeyError(f"unknown collection {collection!r}")
                if collection not in touched:
                    state[collection] = dict(state[collection])
                    touched.add(collection)
                if op == "put":
                    state[collection][key] = copy.deepcopy(doc)
                elif op == "delete":
                    state[collection].pop(key, None)
                else:
                    raise ValueError(f"unknown op {op!r}")
            self._append_wal(ops)
            self._state = state
            if self._wal is not None and self._wal_bytes > self._auto_compact_bytes:
                self._compact_locked()

    def compact(self) -> None:
        with self._lock:
            self._compact_locked()

    def close(self) -> None:
        with self._lock:
            if self._wal is not None:
                self._compact_locked()
                self._wal.close()
                self._wal = None

    # -- persistence ------------------------------------------------------

    def _append_wal(self, ops: list[Op]) -> None:
        if self._wal is None:
            return
        entries = [
            {"op": op, "c": collection, "k": key, **({"d": doc} if doc is not None else {})}
            for op, collection, key, doc in ops
        ]
        line = canonical_str({"ops": entries}) + "\n"
        self._wal.write(line)
        self._wal.flush()
        self._wal_bytes += len(line.encode("utf-8"))

    def _load(self) -> None:
        assert self._data_dir is not None
        for name in COLLECTIONS:
            path = self._data_dir / f"{name}.jsonl"
            if not path.exists():
                continue
            with open(path, encoding="utf-8") as handle:
                for line in handle:
                    if not line.strip():
                        continue
                    row = json.loads(line)
                    self._state[name][row["k"]] = row["d"]
        wal_path = self._data_dir / _WAL_FILE
        if wal_path.exists():
            replayed = 0
            with open(wal_path, encoding="utf-8") as handle:
                for line in handle:
                    line = line.strip()
                    if not line:
                        continue
                    try:
                        batch = json.loads(line)
                    except json.JSONDecodeError:
                        logger.warning("discarding torn write-ahead record")
                        continue
                    for entry in batch.get("ops", []):
                        if entry["op"] == "put":
                            self._state[entry["c"]][entry["k"]] = entry["d"]
                        else:
                            self._state[entry["c"]].pop(entry["k"], None)
                    replayed += 1
            if replayed:
                logger.info("replayed %d write-ahead batches", replayed)

    def _compact_locked(self) -> None:
        if self._data_dir is None:
            return
        for name in COLLECTIONS:
            path = self._data_dir / f"{name}.jsonl"
            tmp = path.with_suffix(".jsonl.tmp")
            with open(tmp, "w", encoding="utf-8") as handle:
                for key, doc in self._state[name].items():
                    handle.write(canonical_str({"k": key, "d": doc}) + "\n")
                handle.flush()
                os.fsync(handle.fileno())
            os.replace(tmp, path)
        if self._wal is not None:
            self._wal.close()
        self._wal = open(self._data_dir / _WAL_FILE, "w", encoding="utf-8")
        self._wal_bytes = 0

    def __enter__(self) -> "DocumentStore":
        return self

    def __exit__(self, *exc_info: object) -> None:
        self.close()


def iter_export(store: DocumentStore, collection: str) -> Iterator[str]:
    """Newline-delimited canonical JSON export of one collection."""
    for key, doc in store.items(collection):
        yield canonical_str({"k": key, "d": doc})
