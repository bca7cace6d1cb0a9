"""Document Versioning Pattern over the embedded store.

The ``current`` collection holds exactly one record per playbook id; every
superseded revision moves to ``history``. Revisions are contiguous from 1
and ``modified`` strictly increases with them, which doubles as the
optimistic-concurrency token: a save whose ``modified`` is not newer than
the stored one is a lost-update conflict.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from cacao_kms.core.canonical import canonical_bytes
from cacao_kms.core.model import Playbook
from cacao_kms.core.timestamps import bump_millisecond, now_utc, parse_timestamp
from cacao_kms.core.validate import validate_playbook
from cacao_kms.errors import BadQuery, NotFound, StaleWrite, ValidationFailed
from cacao_kms.store.documents import DocumentStore, delete_op, put_op

SORT_KEYS = ("modified_desc", "created_desc", "name_asc")
MAX_PAGE_LIMIT = 200
DEFAULT_PAGE_LIMIT = 50


def _history_key(playbook_id: str, revision: int) -> str:
    return f"{playbook_id}#{revision:06d}"


@dataclass
class SearchQuery:
    """Conjunctive filters plus ordering and pagination."""

    name_contains: str | None = None
    labels: list[str] | None = None
    playbook_types: list[str] | None = None
    created_by: str | None = None
    severity_min: int | None = None
    severity_max: int | None = None
    created_after: str | None = None
    created_before: str | None = None
    revoked: bool | None = None
    sort: str = "modified_desc"
    offset: int = 0
    limit: int = DEFAULT_PAGE_LIMIT

    def validate(self) -> None:
        if self.sort not in SORT_KEYS:
            raise BadQuery(f"unknown sort key {self.sort!r}; expected one of {SORT_KEYS}")
        if self.offset < 0:
            raise BadQuery("offset must be >= 0")
        if not 1 <= self.limit <= MAX_PAGE_LIMIT:
            raise BadQuery(f"limit must be in [1, {MAX_PAGE_LIMIT}]")
        if self.severity_min is not None and self.severity_max is not None:
            if self.severity_min > self.severity_max:
                raise BadQuery("severity_min must not exceed severity_max")
        for bound in (self.created_after, self.created_before):
            if bound is not None and parse_timestamp(bound) is None:
                raise BadQuery(f"not an RFC 3339 timestamp: {bound!r}")

    def matches(self, playbook: Playbook) -> bool:
        if self.name_contains is not None:
            name = playbook.name or ""
            if self.name_contains.lower() not in name.lower():
                return False
        if self.labels is not None:
            if not set(self.labels) & set(playbook.labels):
                return False
        if self.playbook_types is not None:
            if not set(self.playbook_types) & set(playbook.playbook_types):
                return False
        if self.created_by is not None and playbook.created_by != self.created_by:
            return False
        if self.severity_min is not None:
            if playbook.severity is None or playbook.severity < self.severity_min:
                return False
        if self.severity_max is not None:
            if playbook.severity is None or playbook.severity > self.severity_max:
                return False
        if self.created_after is not None:
            created = parse_timestamp(playbook.created or "")
            if created is None or created <= parse_timestamp(self.created_after):
                return False
        if self.created_before is not None:
            created = parse_timestamp(playbook.created or "")
            if created is None or created >= parse_timestamp(self.created_before):
                return False
        if self.revoked is not None and playbook.revoked != self.revoked:
            return False
        return True


class PlaybookStore:
    def __init__(self, docs: DocumentStore):
        self.docs = docs

    # -- writes -----------------------------------------------------------

    def save(self, playbook: Playbook) -> dict[str, Any]:
        """Store a validated playbook as revision 1 or as the next revision.

        Resubmitting content-identical canonical bytes is a no-op; an older
        or equal ``modified`` on different content raises StaleWrite.
        """
        report = validate_playbook(playbook)
        if not report.valid:
            raise ValidationFailed("playbook failed validation", details=report.to_dict())
        playbook_id = playbook.id
        with self.docs.lock():
            current = self.docs.get("current", playbook_id)
            if current is None:
                record = self._record(playbook, revision=1)
                self.docs.put("current", playbook_id, record)
                return record
            if canonical_bytes(playbook.raw) == canonical_bytes(current["playbook"]):
                return current
            if parse_timestamp(playbook.modified) <= parse_timestamp(
                current["playbook"]["modified"]
            ):
                raise StaleWrite(
                    "modified timestamp is not newer than the stored version",
                    details={
                        "stored_modified": current["playbook"]["modified"],
                        "submitted_modified": playbook.modified,
                    },
                )
            record = self._record(playbook, revision=current["revision"] + 1)
            demoted = {**current, "is_current": False}
            self.docs.apply(
                [
                    put_op("history", _history_key(playbook_id, current["revision"]), demoted),
                    put_op("current", playbook_id, record),
                ]
            )
            return record

    def restore_version(self, playbook_id: str, revision: int) -> dict[str, Any]:
        """Re-save a historical revision as a new current revision.

        Content is byte-identical apart from ``modified``, which is set to
        now (bumped if the clock has not advanced past the current record).
        Restoring the current revision is a no-op.
        """
        with self.docs.lock():
            current = self.get_current(playbook_id)
            if revision == current["revision"]:
                return current
            source = self.docs.get("history", _history_key(playbook_id, revision))
            if source is None:
                raise NotFound(f"revision {revision} of {playbook_id} does not exist")
            floor = bump_millisecond(current["playbook"]["modified"])
            new_modified = max(now_utc(), floor)
            playbook = Playbook.from_dict(source["playbook"]).replace(modified=new_modified)
            return self.save(playbook)

    def delete(self, playbook_id: str) -> dict[str, int]:
        """Remove all revisions and cascade to sharing records.

        Having no sharing records is not an error; execution records are
        retained for audit.
        """
        with self.docs.lock():
            current = self.docs.get("current", playbook_id)
            history_keys = [
                key
                for key, record in self.docs.items("history")
                if record["playbook"]["id"] == playbook_id
            ]
            if current is None and not history_keys:
                raise NotFound(f"playbook {playbook_id} was never stored")
            sharing_keys = [
                key
                for key, record in self.docs.items("sharings")
                if record["playbook_id"] == playbook_id
            ]
            ops = [delete_op("history", key) for key in history_keys]
            ops += [delete_op("sharings", key) for key in sharing_keys]
            if current is not None:
                ops.append(delete_op("current", playbook_id))
            self.docs.apply(ops)
            return {
                "versions_removed": len(history_keys) + (1 if current is not None else 0),
                "sharings_removed": len(sharing_keys),
            }

    # -- reads ------------------------------------------------------------

    def get_current(self, playbook_id: str) -> dict[str, Any]:
        record = self.docs.get("current", playbook_id)
        if record is None:
            raise NotFound(f"playbook {playbook_id} not found")
        return record

    def get_history(self, playbook_id: str) -> list[dict[str, Any]]:
        """Non-current revisions, newest first. NotFound for unknown ids."""
        self.get_current(playbook_id)
        records = [
            record
            for record in self.docs.scan("history")
            if record["playbook"]["id"] == playbook_id
        ]
        records.sort(key=lambda r: r["revision"], reverse=True)
        return records

    def list_current(self, query: SearchQuery) -> dict[str, Any]:
        query.validate()
        matched = [
            record
            for record in self.docs.scan("current")
            if query.matches(Playbook(raw=record["playbook"]))
        ]
        matched.sort(key=lambda r: r["playbook"]["id"])
        if query.sort == "modified_desc":
            matched.sort(key=lambda r: parse_timestamp(r["playbook"]["modified"]), reverse=True)
        elif query.sort == "created_desc":
            matched.sort(key=lambda r: parse_timestamp(r["playbook"]["created"]), reverse=True)
        else:
            matched.sort(key=lambda r: r["playbook"].get("name", ""))
        page = matched[query.offset : query.offset + query.limit]
        return {"items": page, "total": len(matched)}

    def _record(self, playbook: Playbook, revision: int) -> dict[str, Any]:
        return {
            "playbook": playbook.to_dict(),
            "revision": revision,
            "stored_at": now_utc(),
            "is_current": True,
        }
