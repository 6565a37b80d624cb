"""Deterministic mock providers for hermetic tests and offline pipelines.

The mock completion provider replays canned transcripts keyed by prompt
digest, so the real prompt templates are exercised end to end without any
network. The mock embedder derives vectors from a seeded hash of the text,
stable across processes and runs.
"""
from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Callable, Iterable, Optional

from .base import SearchResult


class TranscriptMiss(KeyError):
    """A mock provider had no canned answer for the prompt it received."""

    def __init__(self, prompt: str):
        preview = prompt if len(prompt) <= 400 else prompt[:200] + " ... " + prompt[-200:]
        super().__init__(f"no transcript entry for prompt: {preview!r}")
        self.prompt = prompt


def prompt_digest(prompt: str) -> str:
    return hashlib.sha256(prompt.encode("utf-8")).hexdigest()


class MockCompletionProvider:
    """Replays transcripts: digest lookup first, then substring rules, then default.

    Rules are (needle, response) pairs checked in order against the prompt;
    they keep test transcripts short when many prompts share one template.
    """

    def __init__(self, transcript: Optional[dict[str, str]] = None,
                 rules: Optional[Iterable[tuple[str, str]]] = None,
                 default: Optional[str] = None,
                 id: str = "mock-completion"):
        self.transcript = dict(transcript or {})
        self.rules = list(rules or [])
        self.default = default
        self.id = id
        self.calls: list[str] = []

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, str]], **kwargs) -> "MockCompletionProvider":
        return cls(transcript={prompt_digest(p): r for p, r in pairs}, **kwargs)

    def add(self, prompt: str, response: str) -> None:
        self.transcript[prompt_digest(prompt)] = response

    def complete(self, prompt: str, **params) -> str:
        self.calls.append(prompt)
        digest = prompt_digest(prompt)
        if digest in self.transcript:
            return self.transcript[digest]
        for needle, response in self.rules:
            if needle in prompt:
                return response
        if self.default is not None:
            return self.default
        raise TranscriptMiss(prompt)


class CallableCompletionProvider:
    """Adapts any pure function of the prompt into a completion provider."""

    def __init__(self, fn: Callable[[str], str], id: str = "mock-callable"):
        self._fn = fn
        self.id = id

    def complete(self, prompt: str, **params) -> str:
        return self._fn(prompt)


class MockEmbeddingProvider:
    """Seeded hash-derived unit-scale vectors; equal texts get equal vectors."""

    def __init__(self, dim: int = 16, seed: int = 0, id: str = "mock-embedding",
                 overrides: Optional[dict[str, list[float]]] = None):
        if dim < 1:
            raise ValueError("dim must be >= 1")
        self.dim = dim
        self.seed = seed
        self.id = f"{id}-d{dim}-s{seed}"
        self.overrides = dict(overrides or {})

    def embed(self, text: str) -> list[float]:
        if text in self.overrides:
            return list(self.overrides[text])
        values: list[float] = []
        counter = 0
        while len(values) < self.dim:
            block = hashlib.sha256(f"{self.seed}:{counter}:{text}".encode("utf-8")).digest()
            for i in range(0, len(block) - 1, 2):
                raw = int.from_bytes(block[i:i + 2], "big")
                values.append(raw / 32767.5 - 1.0)
                if len(values) == self.dim:
                    break
            counter += 1
        return values


class FixtureSearchProvider:
    """Offline search backend over a directory (or in-memory) corpus.

    Corpus layout on disk: `index.json` maps each query to a ranked URL list
    and each URL to a document file; document files are plain UTF-8 text.
    """

    def __init__(self, queries: dict[str, list[str]], documents: dict[str, str],
                 id: str = "fixture-search"):
        self.queries = {q.casefold(): urls for q, urls in queries.items()}
        self.documents = dict(documents)
        self.id = id

    @classmethod
    def from_directory(cls, corpus_dir: str | Path, id: str = "fixture-search"
                       ) -> "FixtureSearchProvider":
        corpus_dir = Path(corpus_dir)
        index = json.loads((corpus_dir / "index.json").read_text(encoding="utf-8"))
        documents = {
            url: (corpus_dir / filename).read_text(encoding="utf-8")
            for url, filename in index["documents"].items()
        }
        return cls(index["queries"], documents, id=id)

    def search(self, query: str, max_results: int = 5) -> list[SearchResult]:
        urls = self.queries.get(query.casefold(), [])[:max_results]
        results = []
        for url in urls:
            text = self.documents.get(url, "")
            results.append(SearchResult(url=url, title=url, snippet=text[:200]))
        return results

    def fetch(self, url: str) -> str:
        if url not in self.documents:
            raise KeyError(f"no fixture document for {url!r}")
        return self.documents[url]


class MockNLIProvider:
    """Canned NLI labels keyed by exact (premise, hypothesis); default neutral."""

    def __init__(self, table: Optional[dict[tuple[str, str], str]] = None,
                 default: str = "neutral", id: str = "mock-nli"):
        self.table = dict(table or {})
        self.default = default
        self.id = id

    def nli(self, premise: str, hypothesis: str) -> str:
        return self.table.get((premise, hypothesis), self.default)


def write_fixture_corpus(corpus_dir: str | Path, queries: dict[str, list[str]],
                         documents: dict[str, str]) -> Path:
    """Materialize an in-memory corpus to the on-disk fixture format."""
    corpus_dir = Path(corpus_dir)
    corpus_dir.mkdir(parents=True, exist_ok=True)
    filenames = {}
    for i, (url, text) in enumerate(sorted(documents.items())):
        filename = f"doc{i:03d}.txt"
        (corpus_dir / filename).write_text(text, encoding="utf-8")
        filenames[url] = filename
    index = {"queries": queries, "documents": filenames}
    (corpus_dir / "index.json").write_text(
        json.dumps(index, indent=2, ensure_ascii=False), encoding="utf-8")
    return corpus_dir
