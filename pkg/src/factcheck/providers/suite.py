"""Provider suite assembly and config-file resolution.

A config file (TOML or JSON) names each backend and its settings; the
resolved configuration is hashed into run metadata so reruns are comparable.
"""
from __future__ import annotations

import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .base import CompletionProvider, EmbeddingProvider, NLIProvider, RateLimiter, SearchProvider
from .cache import CachingCompletion, CachingEmbedding, CachingSearch, DiskCache
from .live import HttpCompletionProvider, HttpEmbeddingProvider, WebSearchProvider
from .mock import (
    FixtureSearchProvider,
    MockCompletionProvider,
    MockEmbeddingProvider,
    MockNLIProvider,
)
from .store import config_hash


@dataclass
class ProviderSuite:
    completion: CompletionProvider
    embedding: EmbeddingProvider
    search: SearchProvider
    nli: Optional[NLIProvider] = None
    cache: Optional[DiskCache] = None
    resolved_config: dict[str, Any] = field(default_factory=dict)

    def provider_ids(self) -> dict[str, str]:
        ids = {
            "completion": self.completion.id,
            "embedding": self.embedding.id,
            "search": self.search.id,
        }
        if self.nli is not None:
            ids["nli"] = self.nli.id
        return ids

    def config_hash(self) -> str:
        return config_hash(self.resolved_config or self.provider_ids())

    def cached(self) -> "ProviderSuite":
        """Wrap completion/embedding/search with the disk cache, if configured."""
        if self.cache is None:
            return self
        return ProviderSuite(
            completion=CachingCompletion(self.completion, self.cache),
            embedding=CachingEmbedding(self.embedding, self.cache),
            search=CachingSearch(self.search, self.cache),
            nli=self.nli,
            cache=self.cache,
            resolved_config=self.resolved_config,
        )


def mock_suite(transcript: Optional[dict[str, str]] = None,
               rules: Optional[list[tuple[str, str]]] = None,
               default_completion: Optional[str] = None,
               queries: Optional[dict[str, list[str]]] = None,
               documents: Optional[dict[str, str]] = None,
               seed: int = 0) -> ProviderSuite:
    """Fully deterministic offline suite for tests and dry runs."""
    return ProviderSuite(
        completion=MockCompletionProvider(transcript, rules, default_completion),
        embedding=MockEmbeddingProvider(seed=seed),
        search=FixtureSearchProvider(queries or {}, documents or {}),
        nli=MockNLIProvider(),
        resolved_config={"mode": "mock", "seed": seed},
    )


def _load_config(path: str | Path) -> dict[str, Any]:
    path = Path(path)
    raw = path.read_bytes()
    if path.suffix == ".json":
        return json.loads(raw.decode("utf-8"))
    return tomllib.loads(raw.decode("utf-8"))


def load_suite(config_path: str | Path) -> ProviderSuite:
    """Resolve a ProviderSuite from a TOML/JSON config file."""
    config = _load_config(config_path)
    limiter = RateLimiter(float(config.get("requests_per_second", 2.0)))

    def build_completion(section: dict[str, Any]):
        kind = section.get("type", "mock")
        if kind == "http":
            return HttpCompletionProvider(
                base_url=section["base_url"], model=section["model"],
                api_key_env=section.get("api_key_env", "FACTCHECK_COMPLETION_API_KEY"),
                rate_limiter=limiter)
        if kind == "mock":
            transcript = {}
            if "transcript_file" in section:
                transcript = json.loads(Path(section["transcript_file"]).read_text("utf-8"))
            rules = [tuple(r) for r in section.get("rules", [])]
            return MockCompletionProvider(transcript, rules, section.get("default"))
        raise ValueError(f"unknown completion provider type {kind!r}")

    def build_embedding(section: dict[str, Any]):
        kind = section.get("type", "mock")
        if kind == "http":
            return HttpEmbeddingProvider(
                base_url=section["base_url"], model=section["model"],
                api_key_env=section.get("api_key_env", "FACTCHECK_COMPLETION_API_KEY"),
                rate_limiter=limiter)
        if kind == "mock":
            return MockEmbeddingProvider(dim=int(section.get("dim", 16)),
                                         seed=int(section.get("seed", 0)))
        raise ValueError(f"unknown embedding provider type {kind!r}")

    def build_search(section: dict[str, Any]):
        kind = section.get("type", "fixture")
        if kind == "http":
            return WebSearchProvider(
                endpoint=section["endpoint"],
                api_key_env=section.get("api_key_env", "FACTCHECK_SEARCH_API_KEY"),
                rate_limiter=limiter)
        if kind == "fixture":
            if "corpus_dir" in section:
                return FixtureSearchProvider.from_directory(section["corpus_dir"])
            return FixtureSearchProvider({}, {})
        raise ValueError(f"unknown search provider type {kind!r}")

    cache = None
    if "cache" in config:
        cache = DiskCache(config["cache"]["directory"],
                          ttl_seconds=config["cache"].get("ttl_seconds"))

    suite = ProviderSuite(
        completion=build_completion(config.get("completion", {})),
        embedding=build_embedding(config.get("embedding", {})),
        search=build_search(config.get("search", {})),
        nli=MockNLIProvider() if config.get("nli", {}).get("type", "mock") == "mock" else None,
        cache=cache,
        resolved_config=config,
    )
    return suite.cached() if cache is not None else suite
