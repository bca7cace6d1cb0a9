"""HTTP client for a remote TAXII 2.1 API root."""

from __future__ import annotations

import logging
from typing import Any, Iterator

import httpx

from cacao_kms.errors import RemoteRejected, RemoteUnavailable
from cacao_kms.sharing.taxii import TAXII_MEDIA_TYPE

logger = logging.getLogger(__name__)


class TaxiiClient:
    """Speaks to ``{api_root}/collections/{id}/objects/`` with the TAXII
    media type, following next/more pagination."""

    def __init__(self, api_root_url: str, client: httpx.Client | None = None, timeout: float = 15.0):
        self.api_root_url = api_root_url.rstrip("/")
        self._client = client or httpx.Client(timeout=timeout)
        self._headers = {"Accept": TAXII_MEDIA_TYPE}

    def get_objects_page(
        self,
        collection_id: str,
        added_after: str | None = None,
        limit: int | None = None,
        next_token: str | None = None,
    ) -> dict[str, Any]:
        params: dict[str, Any] = {}
        if added_after is not None:
            params["added_after"] = added_after
        if limit is not None:
            params["limit"] = limit
        if next_token is not None:
            params["next"] = next_token
        response = self._request(
            "GET",
            f"{self.api_root_url}/collections/{collection_id}/objects/",
            params=params,
        )
        return response.json()

    def iter_objects(
        self,
        collection_id: str,
        added_after: str | None = None,
        page_limit: int = 100,
    ) -> Iterator[dict[str, Any]]:
        next_token: str | None = None
        while True:
            page = self.get_objects_page(
                collection_id, added_after=added_after, limit=page_limit, next_token=next_token
            )
            yield from page.get("objects", [])
            if not page.get("more"):
                return
            next_token = page.get("next")
            if next_token is None:
                logger.warning("server reported more=true without a next cursor; stopping")
                return

    def add_objects(self, collection_id: str, objects: list[dict[str, Any]]) -> dict[str, Any]:
        response = self._request(
            "POST",
            f"{self.api_root_url}/collections/{collection_id}/objects/",
            json={"objects": objects},
            content_type=TAXII_MEDIA_TYPE,
        )
        return response.json()

    def _request(
        self,
        method: str,
        url: str,
        params: dict | None = None,
        json: Any = None,
        content_type: str | None = None,
    ) -> httpx.Response:
        headers = dict(self._headers)
        if content_type is not None:
            headers["Content-Type"] = content_type
        try:
            response = self._client.request(
                method, url, params=params, json=json, headers=headers
            )
        except httpx.HTTPError as exc:
            raise RemoteUnavailable(f"TAXII server at {url} unavailable: {exc}") from exc
        if response.status_code >= 400:
            raise RemoteRejected(
                f"TAXII server rejected {method} {url} with HTTP {response.status_code}",
                details=_safe_body(response),
            )
        return response


def _safe_body(response: httpx.Response) -> Any:
    try:
        return response.json()
    except ValueError:
        return response.text[:500]
