"""Content-addressed on-disk cache for provider calls.

Keys are digests of (provider id, payload); prompts embed their template
version string, so editing a template naturally invalidates its entries.
Writes are atomic (write-temp-then-rename) so concurrent callers never see a
partial file. Enabling or disabling the cache never changes outputs, only
latency and hit counters.
"""
from __future__ import annotations

import hashlib
import json
import os
import tempfile
import time
from pathlib import Path
from typing import Optional


def _digest(provider_id: str, payload: str) -> str:
    return hashlib.sha256(f"{provider_id}\x00{payload}".encode("utf-8")).hexdigest()


class DiskCache:
    def __init__(self, directory: str | Path, ttl_seconds: Optional[float] = None):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.ttl_seconds = ttl_seconds
        self.hits = 0
        self.misses = 0

    def _path(self, key: str) -> Path:
        return self.directory / key[:2] / f"{key}.json"

    def get(self, provider_id: str, payload: str) -> Optional[str]:
        path = self._path(_digest(provider_id, payload))
        if not path.exists():
            self.misses += 1
            return None
        try:
            entry = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError):
            self.misses += 1
            return None
        if self.ttl_seconds is not None and time.time() - entry["stored_at"] > self.ttl_seconds:
            self.misses += 1
            return None
        self.hits += 1
        return entry["value"]

    def put(self, provider_id: str, payload: str, value: str) -> None:
        path = self._path(_digest(provider_id, payload))
        path.parent.mkdir(parents=True, exist_ok=True)
        entry = json.dumps({"stored_at": time.time(), "value": value}, ensure_ascii=False)
        fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(entry)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise


class CachingCompletion:
    """Cache-checked completion wrapper; transparent to callers."""

    def __init__(self, inner, cache: DiskCache):
        self.inner = inner
        self.cache = cache
        self.id = inner.id

    def complete(self, prompt: str, **params) -> str:
        payload = prompt if not params else prompt + "\x00" + json.dumps(params, sort_keys=True)
        cached = self.cache.get(self.id, payload)
        if cached is not None:
            return cached
        value = self.inner.complete(prompt, **params)
        self.cache.put(self.id, payload, value)
        return value


class CachingEmbedding:
    def __init__(self, inner, cache: DiskCache):
        self.inner = inner
        self.cache = cache
        self.id = inner.id

    def embed(self, text: str) -> list[float]:
        cached = self.cache.get(self.id, "embed\x00" + text)
        if cached is not None:
            return json.loads(cached)
        vector = self.inner.embed(text)
        self.cache.put(self.id, "embed\x00" + text, json.dumps(vector))
        return vector


class CachingSearch:
    def __init__(self, inner, cache: DiskCache):
        self.inner = inner
        self.cache = cache
        self.id = inner.id

    def search(self, query: str, max_results: int = 5):
        from .base import SearchResult

        payload = f"search\x00{max_results}\x00{query}"
        cached = self.cache.get(self.id, payload)
        if cached is not None:
            return [SearchResult(**r) for r in json.loads(cached)]
        results = self.inner.search(query, max_results)
        self.cache.put(self.id, payload, json.dumps(
            [{"url": r.url, "title": r.title, "snippet": r.snippet} for r in results]))
        return results

    def fetch(self, url: str) -> str:
        cached = self.cache.get(self.id, "fetch\x00" + url)
        if cached is not None:
            return cached
        text = self.inner.fetch(url)
        self.cache.put(self.id, "fetch\x00" + url, text)
        return text
