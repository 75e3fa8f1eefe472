"""Service configuration: generation constants, provider endpoints, storage.

Defaults are the system's pinned constants; a config file (JSON or YAML)
and IDEAMAP_* environment variables override them.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import PreconditionError


@dataclass
class ProviderConfig:
    kind: str = "mock"  # mock | http
    base_url: str = "http://127.0.0.1:8801"
    model: str = "mock-model"
    api_key: str | None = None
    temperature: float = 0.7
    max_tokens: int = 2048


@dataclass
class ScholarConfig:
    kind: str = "mock"  # mock | http
    base_url: str = "http://127.0.0.1:8802"
    api_key: str | None = None


@dataclass
class EmbedderConfig:
    kind: str = "hashing"  # hashing | remote
    dim: int = 256
    base_url: str = "http://127.0.0.1:8801"
    model: str = "mock-embedding"
    api_key: str | None = None


@dataclass
class Config:
    personas_per_generation: int = 3
    critiques_per_generation: int = 3
    queries_per_persona: int = 3
    rerank_top_k: int = 10
    author_similarity_threshold: float = 0.65
    author_top_papers: int = 3
    search_limit_per_query: int = 20
    rate_limit_rps: float = 1.0
    retrieval_parallelism: int = 4
    provider: ProviderConfig = field(default_factory=ProviderConfig)
    scholar: ScholarConfig = field(default_factory=ScholarConfig)
    embedder: EmbedderConfig = field(default_factory=EmbedderConfig)
    storage_path: str | None = None  # None: in-memory only
    auth_token: str | None = None
    async_generation: bool = False
    cors_origins: tuple[str, ...] = ()  # empty: cross-origin requests refused

    def validate(self) -> "Config":
        self.cors_origins = tuple(self.cors_origins)
        for name in (
            "personas_per_generation",
            "critiques_per_generation",
            "queries_per_persona",
            "rerank_top_k",
            "author_top_papers",
            "search_limit_per_query",
            "retrieval_parallelism",
        ):
            if getattr(self, name) < 1:
                raise PreconditionError(f"{name} must be >= 1")
        if not (0.0 <= self.author_similarity_threshold <= 1.0):
            raise PreconditionError("author_similarity_threshold must be in [0, 1]")
        if self.rate_limit_rps < 0:
            raise PreconditionError("rate_limit_rps must be >= 0")
        if self.provider.kind not in ("mock", "http"):
            raise PreconditionError(f"unknown provider kind {self.provider.kind!r}")
        if self.scholar.kind not in ("mock", "http"):
            raise PreconditionError(f"unknown scholar kind {self.scholar.kind!r}")
        if self.embedder.kind not in ("hashing", "remote"):
            raise PreconditionError(f"unknown embedder kind {self.embedder.kind!r}")
        return self

    @classmethod
    def from_dict(cls, data: dict) -> "Config":
        data = dict(data)
        provider = ProviderConfig(**data.pop("provider", {}))
        scholar = ScholarConfig(**data.pop("scholar", {}))
        embedder = EmbedderConfig(**data.pop("embedder", {}))
        try:
            config = cls(provider=provider, scholar=scholar, embedder=embedder, **data)
        except TypeError as exc:
            raise PreconditionError(f"bad config: {exc}") from exc
        return config.validate()

    @classmethod
    def from_file(cls, path: str | Path) -> "Config":
        path = Path(path)
        text = path.read_text(encoding="utf-8")
        if path.suffix in (".yaml", ".yml"):
            import yaml

            data = yaml.safe_load(text) or {}
        else:
            data = json.loads(text)
        if not isinstance(data, dict):
            raise PreconditionError("config file must hold an object")
        return cls.from_dict(data).apply_env()

    def apply_env(self, env: dict[str, str] | None = None) -> "Config":
        env = os.environ if env is None else env
        mapping = {
            "IDEAMAP_PROVIDER_BASE_URL": ("provider", "base_url"),
            "IDEAMAP_PROVIDER_MODEL": ("provider", "model"),
            "IDEAMAP_PROVIDER_API_KEY": ("provider", "api_key"),
            "IDEAMAP_SCHOLAR_BASE_URL": ("scholar", "base_url"),
            "IDEAMAP_SCHOLAR_API_KEY": ("scholar", "api_key"),
            "IDEAMAP_EMBEDDER_BASE_URL": ("embedder", "base_url"),
            "IDEAMAP_EMBEDDER_API_KEY": ("embedder", "api_key"),
        }
        for key, (section, attr) in mapping.items():
            if key in env:
                setattr(getattr(self, section), attr, env[key])
        if "IDEAMAP_AUTH_TOKEN" in env:
            self.auth_token = env["IDEAMAP_AUTH_TOKEN"]
        if "IDEAMAP_STORAGE_PATH" in env:
            self.storage_path = env["IDEAMAP_STORAGE_PATH"]
        if "IDEAMAP_CORS_ORIGINS" in env:
            self.cors_origins = tuple(
                origin.strip() for origin in env["IDEAMAP_CORS_ORIGINS"].split(",") if origin.strip()
            )
        return self.validate()
