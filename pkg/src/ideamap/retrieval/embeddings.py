"""Embedding providers for dense re-ranking.

All embedders return float64 numpy vectors. HashingEmbedder is the offline
default: a deterministic hashed bag-of-words good enough to make cosine
ordering meaningful in tests and demos; no claim of semantic parity with a
trained dense retriever.
"""
from __future__ import annotations

import hashlib
import re
import threading
from typing import Mapping, Protocol, Sequence

import httpx
import numpy as np

from ..errors import PreconditionError, ProviderTimeout, ProviderUnavailable, TransientProviderError
from ..gateway.provider import RetryPolicy, call_with_retry


class Embedder(Protocol):
    def embed(self, text: str) -> np.ndarray: ...


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    if a.shape != b.shape:
        raise PreconditionError(f"embedding dimensions differ: {a.shape} vs {b.shape}")
    norm = float(np.linalg.norm(a)) * float(np.linalg.norm(b))
    if norm == 0.0:
        return 0.0
    return float(np.dot(a, b) / norm)


_TOKEN = re.compile(r"[a-z0-9]+")


def _check_text(text: str) -> str:
    if not text or not text.strip():
        raise PreconditionError("cannot embed empty text")
    return text


class HashingEmbedder:
    """Deterministic hashed bag-of-words embedding, L2-normalized."""

    def __init__(self, dim: int = 256):
        if dim < 2:
            raise PreconditionError("embedding dimension must be >= 2")
        self.dim = dim

    def embed(self, text: str) -> np.ndarray:
        _check_text(text)
        vec = np.zeros(self.dim, dtype=np.float64)
        for token in _TOKEN.findall(text.lower()):
            digest = hashlib.md5(token.encode("utf-8")).digest()
            index = int.from_bytes(digest[:4], "little") % self.dim
            sign = 1.0 if digest[4] % 2 == 0 else -1.0
            vec[index] += sign
        norm = np.linalg.norm(vec)
        if norm > 0:
            vec /= norm
        return vec


class StaticEmbedder:
    """Fixture embedder: an explicit text -> vector table."""

    def __init__(self, table: Mapping[str, Sequence[float]], fallback: Embedder | None = None):
        self._table = {text: np.asarray(vec, dtype=np.float64) for text, vec in table.items()}
        self._fallback = fallback

    def embed(self, text: str) -> np.ndarray:
        _check_text(text)
        found = self._table.get(text)
        if found is not None:
            return found
        if self._fallback is not None:
            return self._fallback.embed(text)
        raise PreconditionError(f"no fixture embedding for text {text[:80]!r}")


class RemoteEmbedder:
    """Embeddings over HTTP (OpenAI-style /v1/embeddings wire format)."""

    def __init__(
        self,
        base_url: str,
        model: str,
        api_key: str | None = None,
        timeout: float = 30.0,
        client: httpx.Client | None = None,
        retry: RetryPolicy | None = None,
    ):
        self.model = model
        headers = {}
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"
        self._client = client or httpx.Client(base_url=base_url, headers=headers, timeout=timeout)
        self._retry = retry or RetryPolicy()

    def _fetch(self, text: str) -> np.ndarray:
        try:
            response = self._client.post("/v1/embeddings", json={"model": self.model, "input": [text]})
        except httpx.TimeoutException as exc:
            raise ProviderTimeout(str(exc)) from exc
        except httpx.HTTPError as exc:
            raise TransientProviderError(str(exc)) from exc
        if response.status_code == 429 or response.status_code >= 500:
            raise TransientProviderError(f"embedding endpoint returned {response.status_code}")
        if response.status_code >= 400:
            raise ProviderUnavailable(f"embedding request rejected: {response.status_code}")
        try:
            values = response.json()["data"][0]["embedding"]
        except (KeyError, IndexError, TypeError, ValueError) as exc:
            raise ProviderUnavailable(f"unexpected embedding response shape: {exc}") from exc
        return np.asarray(values, dtype=np.float64)

    def embed(self, text: str) -> np.ndarray:
        _check_text(text)
        holder: list[np.ndarray] = []

        def attempt() -> str:
            holder.append(self._fetch(text))
            return ""

        call_with_retry(attempt, self._retry)
        return holder[-1]

    def close(self) -> None:
        self._client.close()


class CachingEmbedder:
    """Thread-safe memoization wrapper; guarantees embed determinism per text."""

    def __init__(self, inner: Embedder):
        self._inner = inner
        self._cache: dict[str, np.ndarray] = {}
        self._lock = threading.Lock()

    def embed(self, text: str) -> np.ndarray:
        _check_text(text)
        with self._lock:
            cached = self._cache.get(text)
        if cached is not None:
            return cached
        vec = self._inner.embed(text)
        with self._lock:
            return self._cache.setdefault(text, vec)

    @property
    def size(self) -> int:
        with self._lock:
            return len(self._cache)
