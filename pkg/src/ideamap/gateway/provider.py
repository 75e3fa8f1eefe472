"""Text-generation provider abstraction and retry plumbing.

The rest of the system only sees `TextProvider.complete`; any chat-style
HTTP endpoint or an in-process mock satisfies it.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable, Mapping, Protocol

import httpx

from ..errors import ProviderTimeout, ProviderUnavailable, TransientProviderError


@dataclass(frozen=True)
class GenerationParams:
    temperature: float = 0.7
    max_tokens: int = 2048
    model_id: str | None = None  # None: use the provider's configured model


@dataclass(frozen=True)
class CompletionRequest:
    template: str
    bindings: Mapping[str, str]
    params: GenerationParams = GenerationParams()


class TextProvider(Protocol):
    def complete(self, prompt: str, params: GenerationParams) -> str: ...


@dataclass
class RetryPolicy:
    attempts: int = 3
    base_delay: float = 0.5
    max_delay: float = 8.0
    jitter: float = 0.25  # fraction of the delay added uniformly at random
    sleep: Callable[[float], None] = time.sleep
    rng: random.Random = field(default_factory=random.Random)

    def delay_for(self, attempt: int) -> float:
        delay = min(self.max_delay, self.base_delay * (2**attempt))
        return delay + self.rng.uniform(0.0, self.jitter * delay)


def call_with_retry(fn: Callable[[], str], policy: RetryPolicy) -> str:
    """Run fn, retrying transient provider failures with backoff."""
    last: TransientProviderError | None = None
    for attempt in range(max(1, policy.attempts)):
        try:
            return fn()
        except TransientProviderError as exc:
            last = exc
            if attempt + 1 >= policy.attempts:
                break
            policy.sleep(policy.delay_for(attempt))
    if isinstance(last, ProviderTimeout):
        raise ProviderTimeout(f"provider timed out after {policy.attempts} attempts") from last
    raise ProviderUnavailable(f"provider failed after {policy.attempts} attempts") from last


class HttpChatProvider:
    """Chat-completions HTTP client (OpenAI-style wire format)."""

    def __init__(
        self,
        base_url: str,
        model: str,
        api_key: str | None = None,
        timeout: float = 60.0,
        client: httpx.Client | None = None,
    ):
        self.model = model
        headers = {}
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"
        self._client = client or httpx.Client(base_url=base_url, headers=headers, timeout=timeout)

    def complete(self, prompt: str, params: GenerationParams) -> str:
        body = {
            "model": params.model_id or self.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": params.temperature,
            "max_tokens": params.max_tokens,
        }
        try:
            response = self._client.post("/v1/chat/completions", json=body)
        except httpx.TimeoutException as exc:
            raise ProviderTimeout(str(exc)) from exc
        except httpx.HTTPError as exc:
            raise TransientProviderError(str(exc)) from exc
        if response.status_code == 429 or response.status_code >= 500:
            raise TransientProviderError(f"provider returned {response.status_code}")
        if response.status_code >= 400:
            raise ProviderUnavailable(f"provider rejected request: {response.status_code} {response.text[:200]}")
        try:
            return response.json()["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError, ValueError) as exc:
            raise ProviderUnavailable(f"unexpected provider response shape: {exc}") from exc

    def close(self) -> None:
        self._client.close()
