"""Versioned persistence: current + history collections over an embedded
document store, plus search."""

from cacao_kms.store.documents import DocumentStore
from cacao_kms.store.playbooks import PlaybookStore, SearchQuery

__all__ = ["DocumentStore", "PlaybookStore", "SearchQuery"]
