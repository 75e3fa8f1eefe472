"""Scholarly search API client with a shared rate limiter.

The wire format follows the public scholarly graph API: paper search and
per-author paper listings. The base URL is configurable so the mock server
substitutes transparently.
"""
from __future__ import annotations

import random
import threading
import time
from typing import Callable

import httpx

from ..errors import PreconditionError, RateLimited, UnknownAuthor, UpstreamError
from ..models import PaperAuthor, PaperRecord

SEARCH_FIELDS = "title,abstract,authors,year,venue,citationCount,externalIds,url"


class RateLimiter:
    """Slot-reservation limiter: each acquire books the next free slot."""

    def __init__(
        self,
        rps: float,
        clock: Callable[[], float] = time.monotonic,
        sleep: Callable[[float], None] = time.sleep,
    ):
        if rps < 0:
            raise PreconditionError("rate must be >= 0")
        self._interval = (1.0 / rps) if rps > 0 else 0.0
        self._clock = clock
        self._sleep = sleep
        self._lock = threading.Lock()
        self._next_free = 0.0

    def acquire(self) -> None:
        if self._interval == 0.0:
            return
        with self._lock:
            now = self._clock()
            start = max(now, self._next_free)
            self._next_free = start + self._interval
        wait = start - now
        if wait > 0:
            self._sleep(wait)


def _plausible_year(value) -> int | None:
    if isinstance(value, bool) or not isinstance(value, int):
        return None
    if 1800 <= value <= 2100:
        return value
    return None


def map_paper(entry: dict) -> PaperRecord:
    """Map one upstream paper object onto PaperRecord, sanitizing bad fields."""
    paper_id = entry.get("paperId") or ""
    if not paper_id:
        external = entry.get("externalIds") or {}
        for key in sorted(external):
            if external[key]:
                paper_id = f"{key}:{external[key]}"
                break
    authors = []
    for a in entry.get("authors") or []:
        name = a.get("name") or ""
        if name:
            authors.append(PaperAuthor(name=name, author_id=a.get("authorId")))
    citations = entry.get("citationCount")
    if isinstance(citations, bool) or not isinstance(citations, int) or citations < 0:
        citations = 0
    return PaperRecord(
        paper_id=paper_id,
        title=entry.get("title") or "",
        abstract=entry.get("abstract"),
        authors=authors,
        year=_plausible_year(entry.get("year")),
        venue=entry.get("venue") or "",
        citation_count=citations,
        url=entry.get("url") or "",
    ).validate()


class ScholarClient:
    def __init__(
        self,
        base_url: str,
        api_key: str | None = None,
        rate_limiter: RateLimiter | None = None,
        retries: int = 3,
        backoff_base: float = 0.5,
        timeout: float = 30.0,
        client: httpx.Client | None = None,
        sleep: Callable[[float], None] = time.sleep,
        rng: random.Random | None = None,
    ):
        headers = {}
        if api_key:
            headers["x-api-key"] = api_key
        self._client = client or httpx.Client(base_url=base_url, headers=headers, timeout=timeout)
        self._limiter = rate_limiter or RateLimiter(rps=0.0)
        self._retries = max(1, retries)
        self._backoff_base = backoff_base
        self._sleep = sleep
        self._rng = rng or random.Random()

    def _get(self, path: str, params: dict) -> httpx.Response:
        """Rate-limited GET with bounded retries on 429/5xx/network errors."""
        rate_limited = False
        last_error = "upstream request failed"
        for attempt in range(self._retries):
            self._limiter.acquire()
            try:
                response = self._client.get(path, params=params)
            except httpx.HTTPError as exc:
                last_error = str(exc)
                response = None
            if response is not None:
                if response.status_code == 429:
                    rate_limited = True
                    last_error = "upstream returned 429"
                elif response.status_code >= 500:
                    rate_limited = False
                    last_error = f"upstream returned {response.status_code}"
                else:
                    return response
            if attempt + 1 < self._retries:
                delay = self._backoff_base * (2**attempt)
                self._sleep(delay + self._rng.uniform(0, delay * 0.25))
        if rate_limited:
            raise RateLimited(f"{path}: {last_error} after {self._retries} attempts")
        raise UpstreamError(f"{path}: {last_error} after {self._retries} attempts")

    def search(self, query: str, limit: int = 20) -> list[PaperRecord]:
        if not query.strip():
            raise PreconditionError("search query must be nonempty")
        if limit < 1:
            raise PreconditionError("limit must be >= 1")
        response = self._get(
            "/graph/v1/paper/search",
            {"query": query, "limit": limit, "fields": SEARCH_FIELDS},
        )
        if response.status_code >= 400:
            raise UpstreamError(f"paper search failed: {response.status_code}")
        try:
            data = response.json().get("data") or []
        except ValueError as exc:
            raise UpstreamError(f"paper search returned invalid JSON: {exc}") from exc
        records = []
        for entry in data[:limit]:
            record = map_paper(entry)
            if record.paper_id:
                records.append(record)
        return records

    def author_papers(self, author_id: str, limit: int = 100) -> list[PaperRecord]:
        if not author_id.strip():
            raise PreconditionError("author id must be nonempty")
        response = self._get(
            f"/graph/v1/author/{author_id}/papers",
            {"fields": SEARCH_FIELDS, "limit": limit},
        )
        if response.status_code == 404:
            raise UnknownAuthor(f"no author {author_id!r}")
        if response.status_code >= 400:
            raise UpstreamError(f"author papers failed: {response.status_code}")
        try:
            data = response.json().get("data") or []
        except ValueError as exc:
            raise UpstreamError(f"author papers returned invalid JSON: {exc}") from exc
        records = []
        for entry in data[:limit]:
            record = map_paper(entry)
            if record.paper_id:
                records.append(record)
        return records

    def close(self) -> None:
        self._client.close()
