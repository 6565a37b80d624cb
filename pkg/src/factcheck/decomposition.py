"""Sentence splitting and atomic-claim decomposition.

A response is first split into sentences by deterministic rules, then each
sentence is broken into context-independent atomic claims by a prompted
completion provider. The provider sees the whole response as context, seeded
with the first sentence, and is expected to continue through the remaining
sentences on its own; when it stops early we fall back to prompting sentence
by sentence.
"""
from __future__ import annotations

import json
import logging
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from . import prompting
from .evaluation import ngram_distance, normalized_edit_distance, word_overlap

logger = logging.getLogger(__name__)

DECOMPOSE_TEMPLATE = "decompose_v1"


class DecompositionError(Exception):
    """Provider output could not be parsed, even after fallback."""

    def __init__(self, message: str, raw_output: str = ""):
        super().__init__(message)
        self.raw_output = raw_output


class ParseMode(str, Enum):
    FULL_DOCUMENT = "full-document"
    PER_SENTENCE_FALLBACK = "per-sentence-fallback"


@dataclass
class DecompositionResult:
    """Ordered sentence-text -> claim-texts map plus how it was parsed."""

    sentence_claims: dict[str, list[str]]
    parse_mode: ParseMode


@dataclass(frozen=True)
class DecompositionAgreement:
    equal_count_sentences: int
    auto_more: int
    auto_fewer: int
    mean_normalized_edit_distance: float
    mean_ngram_distance: float
    mean_word_overlap: float


def normalize_whitespace(text: str) -> str:
    return " ".join(text.split())


_TERMINAL = ".!?"
_CLOSERS = "\"'”’)]"
_OPEN_QUOTES = "\"'“‘"
_INITIAL_RE = re.compile(r"[A-Za-z]\.")
_LIST_MARKER_RE = re.compile(r"\d{1,2}\.")


def _protected_word(word: str, at_segment_start: bool, prev_word: str,
                    abbreviations: frozenset[str], list_open: bool) -> tuple[bool, bool]:
    """(protected, opens_list_context) for the word carrying the punctuation."""
    if word.casefold() in abbreviations:
        return True, False
    # single-letter initials occur inside name sequences ("William O. Douglas")
    if _INITIAL_RE.fullmatch(word) and prev_word[:1].isupper():
        return True, False
    if _LIST_MARKER_RE.fullmatch(word):
        if at_segment_start or prev_word.endswith((":", ";")) or list_open:
            return True, True
    return False, False


def split_sentences(text: str, abbreviations: Optional[frozenset[str]] = None) -> list[str]:
    """Rule-based sentence splitter over whitespace-normalized text.

    Splits after terminal punctuation (. ! ?) followed by a space and a
    capital letter, digit, or opening quote, unless the word carrying the
    punctuation is a protected abbreviation, a single-letter initial, or a
    numbered-list marker. Joining the output with single spaces reconstructs
    the normalized input exactly.
    """
    if abbreviations is None:
        abbreviations = prompting.abbreviations()
    text = normalize_whitespace(text)
    if not text:
        return []

    sentences: list[str] = []
    start = 0
    i = 0
    n = len(text)
    list_open = False
    while i < n:
        if text[i] not in _TERMINAL:
            i += 1
            continue
        j = i + 1
        while j < n and (text[j] in _TERMINAL or text[j] in _CLOSERS):
            j += 1
        if j >= n or text[j] != " ":
            i = j
            continue
        nxt = text[j + 1] if j + 1 < n else ""
        if not (nxt.isupper() or nxt.isdigit() or nxt in _OPEN_QUOTES):
            i = j
            continue
        word_start = text.rfind(" ", 0, i) + 1
        word = text[word_start:j]
        prev_word = text[:word_start].rstrip().rsplit(" ", 1)[-1] if word_start > start else ""
        protected, opens_list = _protected_word(word, word_start <= start, prev_word,
                                                abbreviations, list_open)
        if protected:
            list_open = list_open or opens_list
            i = j
            continue
        sentences.append(text[start:j])
        start = j + 1
        i = j + 1
        list_open = False
    if start < n:
        sentences.append(text[start:])
    return sentences


# ---------------------------------------------------------------------------
# Provider-output parsing

_SENTENCE_MARKER = "The sentence is:"
_FACTS_MARKER = "Atomic facts for this sentence are:"
_QUOTED_RE = re.compile(r'"((?:[^"\\]|\\.)*)"')


def _parse_fact_list(chunk: str) -> list[str]:
    """Extract the bracketed claim list from one output block."""
    open_idx = chunk.find("[")
    close_idx = chunk.rfind("]")
    body = chunk[open_idx + 1:close_idx] if 0 <= open_idx < close_idx else chunk
    try:
        parsed = json.loads(f"[{body}]")
        if isinstance(parsed, list) and all(isinstance(x, str) for x in parsed):
            return [normalize_whitespace(x) for x in parsed if x.strip()]
    except json.JSONDecodeError:
        pass
    facts = [m.group(1) for m in _QUOTED_RE.finditer(body)]
    return [normalize_whitespace(f) for f in facts if f.strip()]


def parse_decomposition_output(output: str) -> list[tuple[Optional[str], list[str]]]:
    """Split provider output into (sentence_text, claims) blocks.

    The first block may omit the sentence text (it answers for the seeded
    sentence), in which case sentence_text is None.
    """
    blocks: list[tuple[Optional[str], list[str]]] = []
    parts = output.split(_SENTENCE_MARKER)
    head = parts[0]
    if head.strip():
        facts = _parse_fact_list(head)
        if facts:
            blocks.append((None, facts))
    for part in parts[1:]:
        if _FACTS_MARKER in part:
            sentence_text, _, rest = part.partition(_FACTS_MARKER)
        else:
            sentence_text, _, rest = part.partition("[")
            rest = "[" + rest
        facts = _parse_fact_list(rest)
        if facts:
            blocks.append((normalize_whitespace(sentence_text.strip()), facts))
    return blocks


def _match_sentence(candidate: str, sentences: Sequence[str], taken: set[int]) -> Optional[int]:
    norm = normalize_whitespace(candidate)
    for idx, sentence in enumerate(sentences):
        if idx not in taken and sentence == norm:
            return idx
    for idx, sentence in enumerate(sentences):
        if idx in taken:
            continue
        if norm and (norm in sentence or sentence in norm):
            return idx
    return None


def decompose_document(response: str, provider, max_workers: int = 4) -> DecompositionResult:
    """Decompose every sentence of `response` into atomic claims.

    Issues the few-shot decomposition prompt once with the first sentence
    seeded; if the provider's output covers only a prefix of the sentences,
    the remaining ones are re-prompted individually (bounded concurrency,
    order-preserving assembly) and the fallback is recorded in parse_mode.
    """
    if not response.strip():
        raise DecompositionError("cannot decompose an empty response")
    sentences = split_sentences(response)
    assert sentences, "non-empty response must split into at least one sentence"

    prompt = prompting.render(DECOMPOSE_TEMPLATE, context=response, sentence=sentences[0])
    output = provider.complete(prompt)
    blocks = parse_decomposition_output(output)

    claims_by_index: dict[int, list[str]] = {}
    taken: set[int] = set()
    for sentence_text, facts in blocks:
        if sentence_text is None:
            idx: Optional[int] = 0 if 0 not in taken else None
        else:
            idx = _match_sentence(sentence_text, sentences, taken)
        if idx is None:
            logger.debug("ignoring unmatched decomposition block: %r", sentence_text)
            continue
        claims_by_index[idx] = facts
        taken.add(idx)

    uncovered = [i for i in range(len(sentences)) if i not in claims_by_index]
    parse_mode = ParseMode.FULL_DOCUMENT
    if uncovered:
        parse_mode = ParseMode.PER_SENTENCE_FALLBACK

        def decompose_one(index: int) -> list[str]:
            single = prompting.render(DECOMPOSE_TEMPLATE, context=response,
                                      sentence=sentences[index])
            raw = provider.complete(single)
            parsed = parse_decomposition_output(raw)
            facts = parsed[0][1] if parsed else []
            if not facts:
                raise DecompositionError(
                    f"unparseable decomposition for sentence {index}", raw_output=raw)
            return facts

        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            for index, facts in zip(uncovered, pool.map(decompose_one, uncovered)):
                claims_by_index[index] = facts

    ordered = {sentences[i]: claims_by_index[i] for i in range(len(sentences))}
    return DecompositionResult(sentence_claims=ordered, parse_mode=parse_mode)


# ---------------------------------------------------------------------------
# Decontextualization lint

_PRONOUNS = frozenset({"it", "they", "those", "these", "this", "that", "he", "she"})
_COORDINATORS = frozenset({"and", "but", "or", "so", "yet", "nor"})
_STRIP_CHARS = "\"'“”‘’(),;:!?."


def check_decontextualization(claim: str) -> list[str]:
    """Flag pronouns in sentence-initial or clause-subject position.

    An empty list means the claim passes the lint. Advisory only: the
    pipeline treats flagged claims as warnings unless strict mode is on.
    """
    flagged: list[str] = []
    clause_start = True
    for raw in claim.split():
        core = raw.strip(_STRIP_CHARS)
        if not core:
            continue
        if clause_start and core.casefold() in _PRONOUNS:
            flagged.append(core)
        if core.casefold() in _COORDINATORS:
            clause_start = True
        else:
            clause_start = raw.endswith((",", ";", ":"))
    return flagged


# ---------------------------------------------------------------------------
# Human-vs-automatic agreement


def compare_decompositions(human: DecompositionResult,
                           auto: DecompositionResult) -> DecompositionAgreement:
    """Count-bucket comparison plus pairwise lexical metrics on equal counts.

    Claim-wise metrics are averaged over index-aligned claim pairs from the
    sentences where both sides produced the same number of claims.
    """
    if set(human.sentence_claims) != set(auto.sentence_claims):
        raise ValueError("decompositions cover different sentence sets")

    equal = more = fewer = 0
    distances: list[float] = []
    ngram_distances: list[float] = []
    overlaps: list[float] = []
    for sentence, human_claims in human.sentence_claims.items():
        auto_claims = auto.sentence_claims[sentence]
        if len(auto_claims) > len(human_claims):
            more += 1
        elif len(auto_claims) < len(human_claims):
            fewer += 1
        else:
            equal += 1
            for h, a in zip(human_claims, auto_claims):
                distances.append(normalized_edit_distance(h, a))
                ngram_distances.append(ngram_distance(h, a))
                overlaps.append(word_overlap(h, a))

    def mean(values: list[float]) -> float:
        return sum(values) / len(values) if values else 0.0

    return DecompositionAgreement(
        equal_count_sentences=equal,
        auto_more=more,
        auto_fewer=fewer,
        mean_normalized_edit_distance=mean(distances),
        mean_ngram_distance=mean(ngram_distances),
        mean_word_overlap=mean(overlaps),
    )
