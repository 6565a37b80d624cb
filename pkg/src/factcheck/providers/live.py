"""Thin HTTP clients for live completion, embedding, and web-search backends.

These speak to OpenAI-compatible completion/embedding endpoints and a
JSON web-search API. API keys come from environment variables; every call
goes through the shared rate limiter and the retry policy. Hermetic tests
never touch this module's network paths.
"""
from __future__ import annotations

import os
from typing import Optional

import requests

from .base import (
    AuthError,
    RateLimiter,
    RateLimitError,
    SearchResult,
    TransportError,
    with_retries,
)

COMPLETION_KEY_ENV = "FACTCHECK_COMPLETION_API_KEY"
SEARCH_KEY_ENV = "FACTCHECK_SEARCH_API_KEY"

_DEFAULT_TIMEOUT = 30.0


def _raise_for_response(response: requests.Response) -> None:
    if response.status_code in (401, 403):
        raise AuthError(f"auth failed: HTTP {response.status_code}")
    if response.status_code == 429:
        raise RateLimitError("rate limited by provider")
    if response.status_code >= 500:
        raise TransportError(f"server error: HTTP {response.status_code}")
    response.raise_for_status()


class HttpCompletionProvider:
    """OpenAI-style chat completion client."""

    def __init__(self, base_url: str, model: str,
                 api_key_env: str = COMPLETION_KEY_ENV,
                 rate_limiter: Optional[RateLimiter] = None,
                 session: Optional[requests.Session] = None,
                 timeout: float = _DEFAULT_TIMEOUT):
        self.base_url = base_url.rstrip("/")
        self.model = model
        self.api_key_env = api_key_env
        self.rate_limiter = rate_limiter or RateLimiter()
        self.session = session or requests.Session()
        self.timeout = timeout
        self.id = f"http-completion:{model}"

    def _headers(self) -> dict[str, str]:
        key = os.environ.get(self.api_key_env)
        if not key:
            raise AuthError(f"missing API key in ${self.api_key_env}")
        return {"Authorization": f"Bearer {key}"}

    def complete(self, prompt: str, **params) -> str:
        def call() -> str:
            self.rate_limiter.acquire()
            try:
                response = self.session.post(
                    f"{self.base_url}/chat/completions",
                    headers=self._headers(),
                    json={
                        "model": self.model,
                        "messages": [{"role": "user", "content": prompt}],
                        "temperature": params.get("temperature", 0.0),
                        "max_tokens": params.get("max_tokens", 1024),
                    },
                    timeout=self.timeout,
                )
            except requests.RequestException as exc:
                raise TransportError(str(exc)) from exc
            _raise_for_response(response)
            return response.json()["choices"][0]["message"]["content"]

        return with_retries(call)


class HttpEmbeddingProvider:
    def __init__(self, base_url: str, model: str,
                 api_key_env: str = COMPLETION_KEY_ENV,
                 rate_limiter: Optional[RateLimiter] = None,
                 session: Optional[requests.Session] = None,
                 timeout: float = _DEFAULT_TIMEOUT):
        self.base_url = base_url.rstrip("/")
        self.model = model
        self.api_key_env = api_key_env
        self.rate_limiter = rate_limiter or RateLimiter()
        self.session = session or requests.Session()
        self.timeout = timeout
        self.id = f"http-embedding:{model}"

    def embed(self, text: str) -> list[float]:
        def call() -> list[float]:
            self.rate_limiter.acquire()
            key = os.environ.get(self.api_key_env)
            if not key:
                raise AuthError(f"missing API key in ${self.api_key_env}")
            try:
                response = self.session.post(
                    f"{self.base_url}/embeddings",
                    headers={"Authorization": f"Bearer {key}"},
                    json={"model": self.model, "input": text},
                    timeout=self.timeout,
                )
            except requests.RequestException as exc:
                raise TransportError(str(exc)) from exc
            _raise_for_response(response)
            return list(response.json()["data"][0]["embedding"])

        return with_retries(call)


class WebSearchProvider:
    """JSON web-search client plus a plain page fetcher.

    The search endpoint is expected to return `{"results": [{"url", "title",
    "snippet"}, ...]}`; fetched pages are HTML and get converted to text by
    the retrieval module.
    """

    def __init__(self, endpoint: str, api_key_env: str = SEARCH_KEY_ENV,
                 rate_limiter: Optional[RateLimiter] = None,
                 session: Optional[requests.Session] = None,
                 timeout: float = _DEFAULT_TIMEOUT):
        self.endpoint = endpoint
        self.api_key_env = api_key_env
        self.rate_limiter = rate_limiter or RateLimiter()
        self.session = session or requests.Session()
        self.timeout = timeout
        self.id = f"web-search:{endpoint}"

    def search(self, query: str, max_results: int = 5) -> list[SearchResult]:
        def call() -> list[SearchResult]:
            self.rate_limiter.acquire()
            key = os.environ.get(self.api_key_env)
            if not key:
                raise AuthError(f"missing API key in ${self.api_key_env}")
            try:
                response = self.session.post(
                    self.endpoint,
                    headers={"X-API-KEY": key},
                    json={"q": query, "num": max_results},
                    timeout=self.timeout,
                )
            except requests.RequestException as exc:
                raise TransportError(str(exc)) from exc
            _raise_for_response(response)
            raw = response.json().get("results", [])
            return [
                SearchResult(url=r["url"], title=r.get("title", ""), snippet=r.get("snippet", ""))
                for r in raw[:max_results]
            ]

        return with_retries(call)

    def fetch(self, url: str) -> str:
        def call() -> str:
            self.rate_limiter.acquire()
            try:
                response = self.session.get(url, timeout=self.timeout)
            except requests.RequestException as exc:
                raise TransportError(str(exc)) from exc
            _raise_for_response(response)
            return response.text

        return with_retries(call)
