"""Evidence retrieval: query generation, passage chunking, hybrid re-ranking.

Per claim: generate search queries, fetch documents through the search
provider, chunk them into overlapping sliding windows, score each passage by
a blend of lexical overlap and embedding similarity, and keep the top-k
passages as evidence items.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from enum import Enum
from html.parser import HTMLParser
from typing import Optional, Sequence

from . import prompting
from .evaluation import cosine_similarity, tokenize
from .model import AtomicClaim, Category, EvidenceItem, Reliability, Stance
from .providers.base import ProviderError, TransportError
from .providers.store import RunMetadata

logger = logging.getLogger(__name__)

QUERY_TEMPLATE = "query_generation_v1"

DEFAULT_WINDOW = 100
DEFAULT_STRIDE = 50
DEFAULT_ALPHA = 0.5
DEFAULT_TOP_K = 5


class QueryKind(str, Enum):
    GENERATED_QUESTION = "generated-question"
    ENTITY = "entity"
    CLAIM_VERBATIM = "claim-verbatim"


@dataclass(frozen=True)
class SearchQuery:
    claim_id: str
    text: str
    kind: QueryKind = QueryKind.GENERATED_QUESTION


@dataclass(frozen=True)
class Passage:
    doc_url: str
    text: str
    char_span: tuple[int, int]
    lexical_score: float = 0.0
    semantic_score: float = 0.0
    hybrid_score: float = 0.0


# ---------------------------------------------------------------------------
# Query generation


def generate_queries(claim: AtomicClaim, provider, n: int = 3) -> list[SearchQuery]:
    """Up to `n` deduplicated queries; the claim verbatim is always the floor.

    Provider failure degrades to the claim-verbatim query alone so the
    pipeline can proceed.
    """
    if claim.category != Category.FACTUAL:
        raise ValueError("queries are only generated for factual claims")
    if n < 1:
        raise ValueError("n must be >= 1")

    generated: list[str] = []
    try:
        raw = provider.complete(prompting.render(QUERY_TEMPLATE, claim=claim.text, n=n))
        generated = [line.strip() for line in raw.splitlines() if line.strip()]
    except ProviderError:
        logger.warning("query generation failed for claim %s; using verbatim only", claim.id)

    queries: list[SearchQuery] = []
    seen: set[str] = {claim.text.casefold()}
    for text in generated:
        if len(queries) >= n - 1:
            break
        key = text.casefold()
        if key in seen:
            continue
        seen.add(key)
        kind = QueryKind.GENERATED_QUESTION if text.endswith("?") else QueryKind.ENTITY
        queries.append(SearchQuery(claim_id=claim.id, text=text, kind=kind))
    queries.append(SearchQuery(claim_id=claim.id, text=claim.text, kind=QueryKind.CLAIM_VERBATIM))
    return queries


# ---------------------------------------------------------------------------
# HTML to text

_SKIP_TAGS = {"script", "style", "noscript", "template"}
_BLOCK_TAGS = {"p", "div", "br", "li", "ul", "ol", "h1", "h2", "h3", "h4", "h5", "h6",
               "tr", "table", "section", "article", "header", "footer", "blockquote"}


class _TextExtractor(HTMLParser):
    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.parts: list[str] = []
        self._skip_depth = 0

    def handle_starttag(self, tag, attrs):
        if tag in _SKIP_TAGS:
            self._skip_depth += 1
        elif tag in _BLOCK_TAGS:
            self.parts.append("\n")

    def handle_endtag(self, tag):
        if tag in _SKIP_TAGS and self._skip_depth > 0:
            self._skip_depth -= 1
        elif tag in _BLOCK_TAGS:
            self.parts.append("\n")

    def handle_data(self, data):
        if self._skip_depth == 0:
            self.parts.append(data)


def html_to_text(html: str) -> str:
    """Strip tags, drop script/style, turn block elements into newlines.

    Imperfect extraction is fine: the re-ranker operates on plain text and
    scores will bury the noise.
    """
    if "<" not in html:
        return html
    extractor = _TextExtractor()
    extractor.feed(html)
    lines = [" ".join(line.split()) for line in "".join(extractor.parts).splitlines()]
    return "\n".join(line for line in lines if line)


# ---------------------------------------------------------------------------
# Chunking


def chunk_passages(doc: str, window: int = DEFAULT_WINDOW,
                   stride: int = DEFAULT_STRIDE, doc_url: str = "") -> list[Passage]:
    """Sliding windows of whitespace tokens with stride-step starts.

    Consecutive passages overlap window - stride tokens. Character spans are
    widened to the document edges and previous-token boundaries so that their
    union covers [0, len(doc)) exactly; the final short window is retained.
    """
    if not (window >= stride >= 1):
        raise ValueError("require window >= stride >= 1")
    spans: list[tuple[int, int]] = []
    pos = 0
    for token in doc.split():
        start = doc.index(token, pos)
        end = start + len(token)
        spans.append((start, end))
        pos = end
    if not spans:
        return []

    passages: list[Passage] = []
    n = len(spans)
    for first in range(0, n, stride):
        last = min(first + window, n) - 1
        char_start = 0 if first == 0 else spans[first - 1][1]
        char_end = len(doc) if last == n - 1 else spans[last][1]
        passages.append(Passage(
            doc_url=doc_url,
            text=doc[spans[first][0]:spans[last][1]],
            char_span=(char_start, char_end),
        ))
        if first + window >= n:
            break
    return passages


# ---------------------------------------------------------------------------
# Scoring and re-ranking


def lexical_overlap_f1(query: str, passage: str,
                       stopwords: Optional[frozenset[str]] = None) -> float:
    """Token-overlap F1 between query and passage, case-folded, stopword-stripped."""
    if stopwords is None:
        stopwords = prompting.stopwords()
    q = {t for t in tokenize(query) if t not in stopwords}
    p = {t for t in tokenize(passage) if t not in stopwords}
    if not q or not p:
        return 0.0
    inter = len(q & p)
    if inter == 0:
        return 0.0
    precision = inter / len(p)
    recall = inter / len(q)
    return 2 * precision * recall / (precision + recall)


def rank_passages(scored: Sequence[Passage]) -> list[Passage]:
    """Deterministic ordering: hybrid desc, then lexical desc, url, start offset."""
    return sorted(scored, key=lambda p: (-p.hybrid_score, -p.lexical_score,
                                         p.doc_url, p.char_span[0]))


def rerank(query: str, passages: Sequence[Passage], embedder, alpha: float = DEFAULT_ALPHA,
           meta: Optional[RunMetadata] = None,
           stopwords: Optional[frozenset[str]] = None) -> list[Passage]:
    """Score passages against the query and sort by the hybrid score.

    hybrid = alpha * lexical_overlap_f1 + (1 - alpha) * cosine mapped to [0, 1].
    If the embedder fails, degrades to lexical-only (alpha = 1) and records
    the degradation in run metadata.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must be in [0, 1]")
    if not passages:
        return []

    query_vector = None
    effective_alpha = alpha
    if alpha < 1.0:
        try:
            query_vector = embedder.embed(query)
        except Exception:
            logger.warning("embedder failed; degrading to lexical-only ranking", exc_info=True)
            effective_alpha = 1.0
            if meta is not None:
                meta.record_degraded(f"rerank:lexical-only:{query[:60]}")

    scored = []
    for passage in passages:
        lexical = lexical_overlap_f1(query, passage.text, stopwords)
        semantic = 0.0
        if query_vector is not None and effective_alpha < 1.0:
            try:
                semantic = (cosine_similarity(query_vector, embedder.embed(passage.text)) + 1) / 2
            except Exception:
                logger.warning("embedder failed mid-rerank; lexical-only", exc_info=True)
                effective_alpha = 1.0
                if meta is not None:
                    meta.record_degraded(f"rerank:lexical-only:{query[:60]}")
        scored.append(replace(
            passage,
            lexical_score=lexical,
            semantic_score=semantic,
            hybrid_score=effective_alpha * lexical + (1 - effective_alpha) * semantic,
        ))
    if effective_alpha == 1.0:
        # drop stale semantic components so scores reflect the ranking used
        scored = [replace(p, hybrid_score=p.lexical_score, semantic_score=0.0) for p in scored]
    return rank_passages(scored)


# ---------------------------------------------------------------------------
# Evidence collection


def _overlaps(a: tuple[int, int], b: tuple[int, int]) -> bool:
    return a[0] < b[1] and b[0] < a[1]


def collect_evidence(claim: AtomicClaim, providers, k: int = DEFAULT_TOP_K,
                     window: int = DEFAULT_WINDOW, stride: int = DEFAULT_STRIDE,
                     alpha: float = DEFAULT_ALPHA, queries_per_claim: int = 3,
                     max_results: int = 3, meta: Optional[RunMetadata] = None,
                     max_workers: int = 4) -> list[EvidenceItem]:
    """Top-k evidence passages for a claim, aggregated across all queries.

    Candidates are deduplicated by (url, overlapping span), keeping the
    higher-scored one. Fewer than k items come back when the corpus is small;
    zero search results yield an empty list and the claim later resolves to
    not-enough-evidence.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    queries = generate_queries(claim, providers.completion, n=queries_per_claim)

    def fetch_documents(query: SearchQuery) -> list[tuple[str, str]]:
        documents = []
        try:
            results = providers.search.search(query.text, max_results=max_results)
        except TransportError:
            logger.warning("search failed for query %r", query.text, exc_info=True)
            if meta is not None:
                meta.record_degraded(f"search-failed:{query.text[:60]}")
            return []
        for result in results:
            try:
                documents.append((result.url, html_to_text(providers.search.fetch(result.url))))
            except (TransportError, KeyError):
                logger.warning("fetch failed for %r", result.url, exc_info=True)
        return documents

    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        documents_per_query = list(pool.map(fetch_documents, queries))

    # rerank per query, then merge; assembly order is deterministic
    candidates: list[tuple[Passage, str]] = []
    for query, documents in zip(queries, documents_per_query):
        passages: list[Passage] = []
        for url, text in documents:
            passages.extend(chunk_passages(text, window, stride, doc_url=url))
        for passage in rerank(query.text, passages, providers.embedding, alpha, meta):
            candidates.append((passage, query.text))

    ordered = sorted(candidates, key=lambda c: (-c[0].hybrid_score, -c[0].lexical_score,
                                                c[0].doc_url, c[0].char_span[0], c[1]))
    kept: list[tuple[Passage, str]] = []
    for passage, query_text in ordered:
        duplicate = any(
            p.doc_url == passage.doc_url and _overlaps(p.char_span, passage.char_span)
            for p, _ in kept)
        if duplicate:
            continue
        kept.append((passage, query_text))
        if len(kept) == k:
            break

    return [
        EvidenceItem(query=query_text, url=passage.doc_url, snippet=passage.text,
                     reliability=Reliability.UNKNOWN, stance=Stance.UNASSESSED)
        for passage, query_text in kept
    ]
