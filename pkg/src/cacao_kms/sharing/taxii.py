"""TAXII 2.1 collection repository (transport-independent).

Objects are keyed by (collection, STIX id, modified) so each object version
exists once per collection; the server assigns  'date_added' monotonically
non-decreasing in insertion order. Pagination is stable over the total
order (date_added, id, modified) with an opaque resume cursor, and
``added_after`` filters strictly greater date_added values.
"""

from __future__ import annotations

import base64
import uuid
from typing import Any

from cacao_kms.core.timestamps import now_utc
from cacao_kms.errors import BadQuery, KmsError, NotFound
from cacao_kms.sharing.stix import from_stix_coa
from cacao_kms.store.documents import DocumentStore, put_op

TAXII_MEDIA_TYPE = "application/taxii+json;version=2.1"

DEFAULT_COLLECTION_TITLE = "playbook-exchange"
_DEFAULT_COLLECTION_NS = uuid.UUID("dd1b434a-a2ad-4ad5-93ec-7b68e2e12f27")

MAX_OBJECTS_PAGE = 1000


def _object_key(collection_id: str, stix_id: str, modified: str) -> str:
    return f"{collection_id}|{stix_id}|{modified}"


class TaxiiRepository:
    def __init__(self, docs: DocumentStore, title: str = "CACAO playbook sharing server"):
        self.docs = docs
        self.title = title

    # -- collections --------------------------------------------------------

    def ensure_default_collection(self) -> str:
        """Create the writable default collection once; returns its id."""
        collection_id = str(uuid.uuid5(_DEFAULT_COLLECTION_NS, DEFAULT_COLLECTION_TITLE))
        with self.docs.lock():
            if self.docs.get("taxii_collections", collection_id) is None:
                self.create_collection(
                    title=DEFAULT_COLLECTION_TITLE,
                    description="Default collection for publishing playbooks",
                    collection_id=collection_id,
                )
        return collection_id

    def create_collection(
        self,
        title: str,
        description: str = "",
        can_read: bool = True,
        can_write: bool = True,
        collection_id: str | None = None,
    ) -> dict[str, Any]:
        collection = {
            "id": collection_id or str(uuid.uuid4()),
            "title": title,
            "description": description,
            "can_read": can_read,
            "can_write": can_write,
            "media_types": [TAXII_MEDIA_TYPE],
        }
        self.docs.put("taxii_collections", collection["id"], collection)
        return collection

    def list_collections(self) -> list[dict[str, Any]]:
        collections = self.docs.scan("taxii_collections")
        collections.sort(key=lambda c: c["id"])
        return collections

    def get_collection(self, collection_id: str) -> dict[str, Any]:
        collection = self.docs.get("taxii_collections", collection_id)
        if collection is None:
            raise NotFound(f"collection {collection_id} not found")
        return collection

    # -- objects --------------------------------------------------------------

    def add_objects(self, collection_id: str, objects: list[Any]) -> dict[str, Any]:
        """Validate and store each object individually; returns the TAXII
        status resource. Re-adding an existing (id, modified) succeeds
        without duplicating it."""
        collection = self.get_collection(collection_id)
        if not collection["can_write"]:
            # Hidden rather than forbidden: there is no auth model to
            # distinguish callers.
            raise NotFound(f"collection {collection_id} does not accept objects")
        successes: list[str] = []
        failures: list[dict[str, str]] = []
        with self.docs.lock():
            date_added = max(self._max_date_added(collection_id), now_utc())
            ops = []
            for obj in objects:
                try:
                    from_stix_coa(obj)
                except KmsError as exc:
                    failures.append(
                        {
                            "id": obj.get("id", "<unknown>") if isinstance(obj, dict) else "<unknown>",
                            "message": f"{exc.code}: {exc.message}",
                        }
                    )
                    continue
                key = _object_key(collection_id, obj["id"], obj["modified"])
                if self.docs.get("taxii_objects", key) is None:
                    ops.append(
                        put_op(
                            "taxii_objects",
                            key,
                            {
                                "collection_id": collection_id,
                                "date_added": date_added,
                                "object": obj,
                            },
                        )
                    )
                successes.append(obj["id"])
            self.docs.apply(ops)

        status = {
            "id": str(uuid.uuid4()),
            "status": "complete",
            "request_timestamp": now_utc(),
            "total_count": len(successes) + len(failures),
            "success_count": len(successes),
            "successes": successes,
            "failure_count": len(failures),
            "failures": failures,
            "pending_count": 0,
        }
        self.docs.put("taxii_status", status["id"], status)
        return status

    def get_status(self, status_id: str) -> dict[str, Any]:
        status = self.docs.get("taxii_status", status_id)
        if status is None:
            raise NotFound(f"status {status_id} not found")
        return status

    def get_objects(
        self,
        collection_id: str,
        added_after: str | None = None,
        limit: int | None = None,
        next_token: str | None = None,
    ) -> dict[str, Any]:
        """One page of the collection as a TAXII envelope.

        The union of pages obtained by following ``next`` equals the full
        filtered set with no duplicates, for any page size.
        """
        collection = self.get_collection(collection_id)
        if not collection["can_read"]:
            raise NotFound(f"collection {collection_id} is not readable")
        rows = [
            row
            for row in self.docs.scan("taxii_objects")
            if row["collection_id"] == collection_id
        ]
        rows.sort(key=_sort_key)
        if added_after is not None:
            rows = [row for row in rows if row["date_added"] > added_after]
        if next_token is not None:
            cursor = _decode_cursor(next_token)
            rows = [row for row in rows if _sort_key(row) > cursor]
        if limit is not None:
            limit = max(1, min(limit, MAX_OBJECTS_PAGE))
            page, more = rows[:limit], len(rows) > limit
        else:
            page, more = rows, False
        envelope: dict[str, Any] = {
            "more": more,
            "objects": [row["object"] for row in page],
        }
        if more:
            envelope["next"] = _encode_cursor(_sort_key(page[-1]))
        return envelope

    def count_objects(self, collection_id: str) -> int:
        return sum(
            1
            for row in self.docs.scan("taxii_objects")
            if row["collection_id"] == collection_id
        )

    def _max_date_added(self, collection_id: str) -> str:
        stamps = [
            row["date_added"]
            for row in self.docs.scan("taxii_objects")
            if row["collection_id"] == collection_id
        ]
        return max(stamps) if stamps else ""


def _sort_key(row: dict[str, Any]) -> tuple[str, str, str]:
    obj = row["object"]
    return (row["date_added"], obj.get("id", ""), obj.get("modified", ""))


def _encode_cursor(key: tuple[str, str, str]) -> str:
    return base64.urlsafe_b64encode("|".join(key).encode("utf-8")).decode("ascii")


def _decode_cursor(token: str) -> tuple[str, str, str]:
    try:
        decoded = base64.urlsafe_b64decode(token.encode("ascii")).decode("utf-8")
        date_added, stix_id, modified = decoded.split("|", 2)
    except Exception as exc:
        raise BadQuery(f"invalid pagination cursor: {token!r}") from exc
    return (date_added, stix_id, modified)
