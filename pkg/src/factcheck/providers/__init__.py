from .base import (
    AuthError,
    CompletionProvider,
    EmbeddingProvider,
    NLIProvider,
    NLI_LABELS,
    ProviderError,
    RateLimiter,
    RateLimitError,
    SearchProvider,
    SearchResult,
    TransportError,
    with_retries,
)
from .cache import CachingCompletion, CachingEmbedding, CachingSearch, DiskCache
from .mock import (
    CallableCompletionProvider,
    FixtureSearchProvider,
    MockCompletionProvider,
    MockEmbeddingProvider,
    MockNLIProvider,
    TranscriptMiss,
    prompt_digest,
    write_fixture_corpus,
)
from .store import ChecksumError, RunMetadata, config_hash, load_run, persist_run
from .suite import ProviderSuite, load_suite, mock_suite

__all__ = [
    "AuthError",
    "CachingCompletion",
    "CachingEmbedding",
    "CachingSearch",
    "CallableCompletionProvider",
    "ChecksumError",
    "CompletionProvider",
    "DiskCache",
    "EmbeddingProvider",
    "FixtureSearchProvider",
    "MockCompletionProvider",
    "MockEmbeddingProvider",
    "MockNLIProvider",
    "NLIProvider",
    "NLI_LABELS",
    "ProviderError",
    "ProviderSuite",
    "RateLimiter",
    "RateLimitError",
    "RunMetadata",
    "SearchProvider",
    "SearchResult",
    "TranscriptMiss",
    "TransportError",
    "config_hash",
    "load_run",
    "load_suite",
    "mock_suite",
    "persist_run",
    "prompt_digest",
    "with_retries",
    "write_fixture_corpus",
]
