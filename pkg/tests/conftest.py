from __future__ import annotations

import sys
import threading

import httpx
import pytest

from ideamap.gateway.core import Gateway
from ideamap.retrieval.embeddings import HashingEmbedder
from ideamap.retrieval.scholar import RateLimiter, ScholarClient
from ideamap.service.mockstack import MockLLMWSGI, MockScholarWSGI, MockTextProvider


class VirtualClock:
    """Deterministic clock whose sleep() advances time instead of waiting."""

    def __init__(self, start: float = 0.0):
        self._now = start
        self._lock = threading.Lock()

    def now(self) -> float:
        with self._lock:
            return self._now

    def sleep(self, duration: float) -> None:
        with self._lock:
            self._now += max(0.0, duration)


@pytest.fixture
def virtual_clock():
    return VirtualClock()


@pytest.fixture
def provider():
    return MockTextProvider()


@pytest.fixture
def gateway(provider):
    return Gateway(provider)


@pytest.fixture
def embedder():
    return HashingEmbedder()


@pytest.fixture
def scholar_wsgi():
    return MockScholarWSGI()


@pytest.fixture
def scholar(scholar_wsgi):
    client = httpx.Client(
        transport=httpx.WSGITransport(app=scholar_wsgi),
        base_url="http://scholar.test",
    )
    sc = ScholarClient(
        base_url="http://scholar.test",
        rate_limiter=RateLimiter(0.0),
        client=client,
        sleep=lambda _: None,
    )
    yield sc
    sc.close()


@pytest.fixture
def llm_wsgi(provider):
    return MockLLMWSGI(provider=provider)


def quiet_runtime(config=None, storage=None):
    """Runtime whose retry/rate-limit waits are no-ops, for fast tests."""
    from ideamap.gateway.provider import RetryPolicy
    from ideamap.service.runtime import Runtime

    rt = Runtime(config, storage=storage)
    rt.gateway.retry = RetryPolicy(sleep=lambda _: None)
    rt.scholar._sleep = lambda _: None
    rt.rate_limiter._sleep = lambda _: None
    return rt


@pytest.fixture
def runtime():
    return quiet_runtime()


@pytest.fixture
def api(runtime):
    from fastapi.testclient import TestClient

    from ideamap.service.app import create_app

    with TestClient(create_app(runtime)) as client:
        yield client


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Print one PASS/FAIL line per acceptance criterion after the run."""
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for label, status in results.items():
        terminalreporter.write_line(f"{status}  {label}")
