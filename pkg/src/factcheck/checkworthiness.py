"""Checkworthiness classification for sentences and claims.

Sentence-level is a binary judgement (does it contain a factual statement),
claim-level is the four-way category. Both are provider-prompted; parsers
accept the obvious answer variants and fail loudly on anything else.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from typing import Optional

from . import prompting
from .model import Category, ImportanceLevel

logger = logging.getLogger(__name__)

SENTENCE_TEMPLATE = "sentence_checkworthy_v1"
CATEGORY_TEMPLATE = "claim_category_v1"
IMPORTANCE_TEMPLATE = "importance_v1"


class ClassificationError(ValueError):
    """Provider answer did not parse into the expected label space."""

    def __init__(self, message: str, raw_output: str):
        super().__init__(f"{message}: {raw_output!r}")
        self.raw_output = raw_output


@dataclass(frozen=True)
class CheckworthyPrediction:
    """One rater's judgement for a single sentence or claim."""

    unit_id: str
    rater: str
    sentence_label: Optional[bool] = None
    claim_label: Optional[Category] = None
    importance: Optional[ImportanceLevel] = None

    def __post_init__(self) -> None:
        if (self.sentence_label is None) == (self.claim_label is None):
            raise ValueError("exactly one of sentence_label/claim_label must be set")


_AFFIRMATIVE = frozenset({"yes", "true", "checkworthy", "y"})
_NEGATIVE = frozenset({"no", "false", "not", "not checkworthy", "non-checkworthy",
                       "not-checkworthy", "n"})


def _normalize_answer(text: str) -> str:
    return re.sub(r"[^a-z0-9\s-]", "", text.strip().casefold()).strip()


def parse_yes_no(raw: str) -> bool:
    """Parse an affirmative/negative answer; raises ClassificationError otherwise."""
    answer = _normalize_answer(raw)
    first = answer.split()[0] if answer.split() else ""
    if answer in _AFFIRMATIVE or first in _AFFIRMATIVE:
        return True
    if answer in _NEGATIVE or first in _NEGATIVE:
        return False
    raise ClassificationError("unparseable yes/no answer", raw)


def classify_sentence(sentence: str, provider) -> bool:
    """True iff the provider judges the sentence to contain a factual statement."""
    if not sentence.strip():
        raise ValueError("sentence must be non-empty")
    raw = provider.complete(prompting.render(SENTENCE_TEMPLATE, sentence=sentence))
    return parse_yes_no(raw)


_CATEGORY_ALIASES = {
    "factual": Category.FACTUAL,
    "factual claim": Category.FACTUAL,
    "fact": Category.FACTUAL,
    "claim": Category.FACTUAL,
    "opinion": Category.OPINION,
    "subjective opinion": Category.OPINION,
    "not a claim": Category.NOT_A_CLAIM,
    "not-a-claim": Category.NOT_A_CLAIM,
    "no claim": Category.NOT_A_CLAIM,
    "other": Category.OTHER,
    "others": Category.OTHER,
}


def parse_category(raw: str) -> Category:
    answer = _normalize_answer(raw)
    if answer in _CATEGORY_ALIASES:
        return _CATEGORY_ALIASES[answer]
    # verbose answers: most specific alias present wins
    for alias in sorted(_CATEGORY_ALIASES, key=len, reverse=True):
        if re.search(rf"\b{re.escape(alias)}\b", answer):
            return _CATEGORY_ALIASES[alias]
    raise ClassificationError("unparseable category answer", raw)


def classify_claim(claim: str, provider) -> Category:
    """Four-way category for a claim: factual, opinion, not-a-claim, other."""
    if not claim.strip():
        raise ValueError("claim must be non-empty")
    raw = provider.complete(prompting.render(CATEGORY_TEMPLATE, claim=claim))
    return parse_category(raw)


_IMPORTANCE_ALIASES = {
    "most important": ImportanceLevel.MOST_IMPORTANT,
    "most-important": ImportanceLevel.MOST_IMPORTANT,
    "intermediate": ImportanceLevel.INTERMEDIATE,
    "less important": ImportanceLevel.LESS_IMPORTANT,
    "less-important": ImportanceLevel.LESS_IMPORTANT,
    "not important": ImportanceLevel.LESS_IMPORTANT,
}


def rate_importance(claim: str, question: str, provider) -> ImportanceLevel:
    """Provider-prompted importance tier; defaults to intermediate on parse failure.

    Advisory only: importance never gates verification.
    """
    raw = provider.complete(prompting.render(IMPORTANCE_TEMPLATE, question=question, claim=claim))
    answer = _normalize_answer(raw)
    for alias, level in _IMPORTANCE_ALIASES.items():
        if alias in answer:
            return level
    logger.warning("unparseable importance answer %r; defaulting to intermediate", raw)
    return ImportanceLevel.INTERMEDIATE


def predictions_to_jsonl(predictions: list[CheckworthyPrediction]) -> str:
    """Export predictions as JSON Lines keyed by unit_id."""
    import json

    lines = []
    for p in predictions:
        lines.append(json.dumps({
            "unit_id": p.unit_id,
            "rater": p.rater,
            "sentence_label": p.sentence_label,
            "claim_label": p.claim_label.value if p.claim_label else None,
            "importance": p.importance.value if p.importance else None,
        }, ensure_ascii=False))
    return "\n".join(lines) + ("\n" if lines else "")


def always_checkworthy_baseline(units: list[str], kind: str = "sentence",
                                unit_ids: Optional[list[str]] = None,
                                ) -> list[CheckworthyPrediction]:
    """Majority-guess floor: every unit is predicted checkworthy/factual.

    `kind` picks the label field: "sentence" emits sentence_label=True,
    "claim" emits claim_label=factual.
    """
    if kind not in ("sentence", "claim"):
        raise ValueError(f"unknown unit kind {kind!r}")
    predictions = []
    for i, _ in enumerate(units):
        unit_id = unit_ids[i] if unit_ids else f"u{i}"
        if kind == "sentence":
            predictions.append(CheckworthyPrediction(
                unit_id=unit_id, rater="always-checkworthy", sentence_label=True))
        else:
            predictions.append(CheckworthyPrediction(
                unit_id=unit_id, rater="always-checkworthy", claim_label=Category.FACTUAL))
    return predictions
