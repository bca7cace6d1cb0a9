"""Sharing management: publish/import flows plus the dedup ledger.

Every playbook version crosses a given (direction, collection) boundary at
most once; the ledger row is the proof and the dedup key is
(playbook_id, playbook_modified, direction, collection_id).
"""

from __future__ import annotations

import logging
from typing import Any, Callable, Iterable

from cacao_kms.core.model import Playbook
from cacao_kms.core.timestamps import now_utc, parse_timestamp
from cacao_kms.errors import (
    AlreadyShared,
    BadQuery,
    KmsError,
    RemoteRejected,
    StaleWrite,
)
from cacao_kms.sharing.client import TaxiiClient
from cacao_kms.sharing.stix import from_stix_coa, to_stix_coa
from cacao_kms.sharing.taxii import TaxiiRepository
from cacao_kms.store.documents import DocumentStore
from cacao_kms.store.playbooks import PlaybookStore

logger = logging.getLogger(__name__)

OUTBOUND = "outbound"
INBOUND = "inbound"

LOCAL_TARGET = "local"


def _ledger_key(playbook_id: str, modified: str, direction: str, collection_id: str) -> str:
    return f"{playbook_id}|{modified}|{direction}|{collection_id}"


class SharingService:
    def __init__(
        self,
        docs: DocumentStore,
        playbooks: PlaybookStore,
        repo: TaxiiRepository,
        client_factory: Callable[[str], TaxiiClient] = TaxiiClient,
    ):
        self.docs = docs
        self.playbooks = playbooks
        self.repo = repo
        self._client_factory = client_factory

    # -- outbound -------------------------------------------------------------

    def publish(
        self,
        playbook_id: str,
        collection_id: str | None = None,
        target: str = LOCAL_TARGET,
    ) -> dict[str, Any]:
        """Convert the current version and add it to a TAXII collection.

        ``target`` is either "local" (the embedded server) or the URL of a
        remote API root. Republishing the same version to the same
        collection raises AlreadyShared and leaves the collection unchanged.
        """
        current = self.playbooks.get_current(playbook_id)
        playbook = Playbook.from_dict(current["playbook"])
        collection_id = collection_id or self.repo.ensure_default_collection()
        key = _ledger_key(playbook_id, playbook.modified, OUTBOUND, collection_id)
        if self.docs.get("sharings", key) is not None:
            raise AlreadyShared(
                f"version {playbook.modified} of {playbook_id} was already shared "
                f"to collection {collection_id}"
            )
        envelope = to_stix_coa(playbook)
        if target == LOCAL_TARGET:
            status = self.repo.add_objects(collection_id, [envelope])
        else:
            status = self._client_factory(target).add_objects(collection_id, [envelope])
        if status.get("failure_count"):
            raise RemoteRejected(
                "TAXII server rejected the object", details=status.get("failures")
            )
        record = {
            "playbook_id": playbook_id,
            "playbook_modified": playbook.modified,
            "direction": OUTBOUND,
            "collection_id": collection_id,
            "stix_object_id": envelope["id"],
            "shared_at": now_utc(),
            "target": target,
        }
        self.docs.put("sharings", key, record)
        return record

    # -- inbound --------------------------------------------------------------

    def import_remote(
        self,
        collection_id: str | None = None,
        source: str = LOCAL_TARGET,
        added_after: str | None = None,
    ) -> dict[str, Any]:
        """Fetch envelopes, store unseen playbook versions, ledger them.

        Versions already present with an equal-or-newer ``modified`` are
        counted as skipped; per-object conversion failures are reported in
        the result detail without aborting the run.
        """
        collection_id = collection_id or self.repo.ensure_default_collection()
        if source == LOCAL_TARGET:
            envelopes = self._iter_local(collection_id, added_after)
        else:
            envelopes = self._client_factory(source).iter_objects(
                collection_id, added_after=added_after
            )
        imported = skipped = 0
        failures: list[dict[str, str]] = []
        for envelope in envelopes:
            object_id = envelope.get("id", "<unknown>") if isinstance(envelope, dict) else "<unknown>"
            try:
                playbook = from_stix_coa(envelope)
            except KmsError as exc:
                failures.append({"id": object_id, "code": exc.code, "message": exc.message})
                continue
            if self._already_known(playbook):
                skipped += 1
                continue
            try:
                self.playbooks.save(playbook)
            except StaleWrite:
                skipped += 1
                continue
            except KmsError as exc:
                failures.append({"id": object_id, "code": exc.code, "message": exc.message})
                continue
            ledger = {
                "playbook_id": playbook.id,
                "playbook_modified": playbook.modified,
                "direction": INBOUND,
                "collection_id": collection_id,
                "stix_object_id": object_id,
                "shared_at": now_utc(),
                "target": source,
            }
            self.docs.put(
                "sharings",
                _ledger_key(playbook.id, playbook.modified, INBOUND, collection_id),
                ledger,
            )
            imported += 1
        return {"imported": imported, "skipped": skipped, "failures": failures}

    def _iter_local(self, collection_id: str, added_after: str | None) -> Iterable[dict]:
        next_token = None
        while True:
            page = self.repo.get_objects(
                collection_id, added_after=added_after, limit=100, next_token=next_token
            )
            yield from page["objects"]
            if not page["more"]:
                return
            next_token = page["next"]

    def _already_known(self, playbook: Playbook) -> bool:
        current = self.docs.get("current", playbook.id)
        if current is None:
            return False
        incoming = parse_timestamp(playbook.modified)
        stored = parse_timestamp(current["playbook"]["modified"])
        return stored >= incoming

    # -- ledger -----------------------------------------------------------------

    def list_records(
        self,
        playbook_id: str | None = None,
        direction: str | None = None,
        offset: int = 0,
        limit: int = 50,
    ) -> dict[str, Any]:
        if direction is not None and direction not in (OUTBOUND, INBOUND):
            raise BadQuery(f"unknown direction {direction!r}")
        if offset < 0 or limit < 1:
            raise BadQuery("offset must be >= 0 and limit >= 1")
        records = self.docs.scan("sharings")
        if playbook_id is not None:
            records = [r for r in records if r["playbook_id"] == playbook_id]
        if direction is not None:
            records = [r for r in records if r["direction"] == direction]
        records.sort(key=lambda r: (r["shared_at"], r["stix_object_id"]))
        records.reverse()
        return {"items": records[offset : offset + limit], "total": len(records)}
