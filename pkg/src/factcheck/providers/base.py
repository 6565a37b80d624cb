"""Provider interfaces, transport errors, retry policy, and rate limiting.

A provider suite bundles the pluggable backends the pipeline talks to:
text completion, embeddings, web search, and (optionally) NLI. Each provider
carries a stable `id` string that is recorded in run metadata and used in
cache keys.
"""
from __future__ import annotations

import logging
import random
import threading
import time
from dataclasses import dataclass
from typing import Callable, Optional, Protocol, TypeVar, runtime_checkable

logger = logging.getLogger(__name__)


class ProviderError(Exception):
    """Base class for provider failures."""


class TransportError(ProviderError):
    """Network-level failure; retryable."""


class RateLimitError(TransportError):
    """Provider throttled the call; retryable with backoff."""


class AuthError(ProviderError):
    """Credentials rejected; not retryable."""


@dataclass(frozen=True)
class SearchResult:
    url: str
    title: str
    snippet: str


@runtime_checkable
class CompletionProvider(Protocol):
    id: str

    def complete(self, prompt: str, **params) -> str: ...


@runtime_checkable
class EmbeddingProvider(Protocol):
    id: str

    def embed(self, text: str) -> list[float]: ...


@runtime_checkable
class SearchProvider(Protocol):
    id: str

    def search(self, query: str, max_results: int = 5) -> list[SearchResult]: ...

    def fetch(self, url: str) -> str: ...


@runtime_checkable
class NLIProvider(Protocol):
    id: str

    def nli(self, premise: str, hypothesis: str) -> str: ...


NLI_LABELS = ("entailment", "contradiction", "neutral")

T = TypeVar("T")


def with_retries(fn: Callable[[], T], attempts: int = 3, base_delay: float = 0.5,
                 max_delay: float = 8.0, sleep: Callable[[float], None] = time.sleep,
                 rng: Optional[random.Random] = None) -> T:
    """Run `fn`, retrying transport errors with jittered exponential backoff.

    Only idempotent calls should be wrapped. Non-transport errors propagate
    immediately; the last transport error propagates after `attempts` tries.
    """
    rng = rng or random.Random()
    last: Optional[TransportError] = None
    for attempt in range(attempts):
        try:
            return fn()
        except TransportError as exc:
            last = exc
            if attempt + 1 >= attempts:
                break
            delay = min(max_delay, base_delay * (2 ** attempt)) * (0.5 + rng.random())
            logger.warning("retryable provider error (%s); retrying in %.2fs", exc, delay)
            sleep(delay)
    assert last is not None
    raise last


class RateLimiter:
    """Process-wide minimum-interval limiter shared by live providers."""

    def __init__(self, requests_per_second: float = 2.0,
                 clock: Callable[[], float] = time.monotonic,
                 sleep: Callable[[float], None] = time.sleep):
        if requests_per_second <= 0:
            raise ValueError("requests_per_second must be positive")
        self._interval = 1.0 / requests_per_second
        self._clock = clock
        self._sleep = sleep
        self._lock = threading.Lock()
        self._next_slot = 0.0

    def acquire(self) -> None:
        with self._lock:
            now = self._clock()
            wait = self._next_slot - now
            self._next_slot = max(now, self._next_slot) + self._interval
        if wait > 0:
            self._sleep(wait)
