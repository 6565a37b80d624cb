"""Claim edits, deterministic response merging, and LLM whole-response revision.

Corrections follow a minimal-edit principle: a revised sentence is rebuilt by
applying claim-level edit operations to the original sentence text, falling
back to concatenating the surviving claims only when span mapping fails.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from . import prompting
from .evaluation import cosine_similarity, normalized_edit_distance, tokenize, word_overlap
from .model import EditKind, EditOperation, FactcheckDocument, SentenceUnit, Verdict

logger = logging.getLogger(__name__)

REVISE_NO_QUESTION_TEMPLATE = "revise_no_question_v1"
REVISE_WITH_QUESTION_TEMPLATE = "revise_with_question_v1"


class EditError(ValueError):
    """An edit's target span does not occur verbatim in the text."""


class MergeError(ValueError):
    """The document is not ready to merge (unassessed claims in strict mode)."""


class RevisionStrategy(str, Enum):
    MERGE_DETERMINISTIC = "merge-deterministic"
    LLM_NO_QUESTION = "llm-no-question"
    LLM_WITH_QUESTION = "llm-with-question"


@dataclass(frozen=True)
class RevisionRecord:
    document_id: str
    strategy: RevisionStrategy
    model_id: str
    revised_response: str
    preserved_units: int = 0
    edited_units: int = 0
    deleted_units: int = 0


def _cleanup(text: str) -> str:
    """Collapse whitespace runs and drop stray spaces before punctuation."""
    text = re.sub(r"\s+", " ", text).strip()
    text = re.sub(r"\s+([.,;:!?])", r"\1", text)
    return text


def apply_edit(claim_text: str, op: EditOperation) -> Optional[str]:
    """Apply one edit; None means the claim was deleted.

    replace and delete-span act on the first verbatim occurrence of the
    target span; a missing target raises EditError.
    """
    if op.kind == EditKind.DELETE_CLAIM:
        return None
    if op.target_span is None:
        raise EditError(f"{op.kind.value} requires a target_span")
    if op.target_span not in claim_text:
        raise EditError(f"target span {op.target_span!r} not found verbatim")
    if op.kind == EditKind.REPLACE:
        if op.replacement is None:
            raise EditError("replace requires a replacement")
        return _cleanup(claim_text.replace(op.target_span, op.replacement, 1))
    return _cleanup(claim_text.replace(op.target_span, "", 1))


def apply_edits(claim_text: str, ops: Sequence[EditOperation]) -> Optional[str]:
    """Apply edits in order; a delete-claim short-circuits to None."""
    text: Optional[str] = claim_text
    for op in ops:
        if text is None:
            return None
        text = apply_edit(text, op)
    return text


# ---------------------------------------------------------------------------
# Deterministic merge


def _rebuild_sentence(sentence: SentenceUnit) -> Optional[str]:
    """Revised sentence text, or None when the whole sentence is dropped.

    An explicit revised_text wins; otherwise claim edits are mapped onto the
    original sentence text span by span. Claims whose spans cannot be located
    trigger the concatenation fallback over the surviving claims.
    """
    if sentence.revised_text is not None:
        return _cleanup(sentence.revised_text) or None

    survivors = [c for c in sentence.claims if not c.deleted]
    if sentence.claims and not survivors:
        return None
    if not any(c.edits for c in sentence.claims):
        return sentence.text

    text = sentence.text
    mapped = True
    for claim in sentence.claims:
        for op in claim.edits:
            if op.kind == EditKind.DELETE_CLAIM:
                if claim.text in text:
                    text = text.replace(claim.text, "", 1)
                else:
                    mapped = False
            elif op.target_span is not None and op.target_span in text:
                text = text.replace(op.target_span, op.replacement or "", 1)
            else:
                mapped = False
    if mapped:
        return _cleanup(text) or None

    parts = [c.revised_text if c.revised_text is not None else c.text for c in survivors]
    return _cleanup(" ".join(parts)) or None


def _content_tokens(text: str, stopwords: frozenset[str]) -> frozenset[str]:
    return frozenset(t for t in tokenize(text) if t not in stopwords)


def merge_response(doc: FactcheckDocument, strict: bool = False) -> str:
    """Rebuild the response from its sentences after edits.

    In original order: non-checkworthy sentences verbatim, untouched
    checkworthy sentences verbatim, revised sentences rebuilt from their
    claims; deleted sentences are dropped. A later sentence whose content-word
    token set is a subset of an earlier kept one is dropped as reduplicative,
    but only when one of the pair was rebuilt (an untouched document always
    merges back to itself). Returns "" with a warning when everything was
    deleted.
    """
    stopwords = prompting.stopwords()
    kept: list[tuple[str, bool, frozenset[str]]] = []  # text, was_rebuilt, tokens

    for sentence in doc.sentences:
        if sentence.deleted:
            continue
        if not sentence.checkworthy:
            rebuilt_text, was_rebuilt = sentence.text, False
        else:
            if strict:
                for claim in sentence.claims:
                    if claim.checkworthy and claim.verdict == Verdict.UNASSESSED:
                        raise MergeError(f"claim {claim.id} unassessed in strict merge")
            edited = any(c.edits for c in sentence.claims) or sentence.revised_text is not None
            rebuilt = _rebuild_sentence(sentence)
            if rebuilt is None:
                continue
            rebuilt_text, was_rebuilt = rebuilt, edited
        tokens = _content_tokens(rebuilt_text, stopwords)
        duplicate = False
        if tokens:
            for earlier_text, earlier_rebuilt, earlier_tokens in kept:
                if (was_rebuilt or earlier_rebuilt) and tokens <= earlier_tokens:
                    duplicate = True
                    break
        if duplicate:
            continue
        kept.append((rebuilt_text, was_rebuilt, tokens))

    if not kept and doc.sentences:
        logger.warning("document %s: merge produced empty output (all units deleted)", doc.id)
    return " ".join(text for text, _, _ in kept)


def revision_counts(doc: FactcheckDocument) -> tuple[int, int, int]:
    """(preserved, edited, deleted) buckets over checkworthy claims."""
    preserved = edited = deleted = 0
    for sentence in doc.sentences:
        for claim in sentence.claims:
            if not claim.checkworthy:
                continue
            if sentence.deleted or claim.deleted:
                deleted += 1
            elif claim.edits:
                edited += 1
            else:
                preserved += 1
    return preserved, edited, deleted


def merge_revision_record(doc: FactcheckDocument, strict: bool = False) -> RevisionRecord:
    preserved, edited, deleted = revision_counts(doc)
    return RevisionRecord(
        document_id=doc.id,
        strategy=RevisionStrategy.MERGE_DETERMINISTIC,
        model_id="deterministic-merge",
        revised_response=merge_response(doc, strict=strict),
        preserved_units=preserved,
        edited_units=edited,
        deleted_units=deleted,
    )


# ---------------------------------------------------------------------------
# LLM revision


def revise_response_llm(original: str, true_claims: Sequence[str],
                        question: Optional[str], provider, model_id: str = "",
                        document_id: str = "",
                        counts: Optional[tuple[int, int, int]] = None) -> RevisionRecord:
    """Whole-response revision by a prompted model, with or without the question."""
    if not true_claims:
        raise ValueError("true_claims must be non-empty")
    claims_block = "\n".join(true_claims)
    if question is None:
        prompt = prompting.render(REVISE_NO_QUESTION_TEMPLATE,
                                  response=original, claims=claims_block)
        strategy = RevisionStrategy.LLM_NO_QUESTION
    else:
        prompt = prompting.render(REVISE_WITH_QUESTION_TEMPLATE, question=question,
                                  response=original, claims=claims_block)
        strategy = RevisionStrategy.LLM_WITH_QUESTION
    revised = provider.complete(prompt).strip()
    preserved, edited, deleted = counts if counts is not None else (len(true_claims), 0, 0)
    return RevisionRecord(
        document_id=document_id,
        strategy=strategy,
        model_id=model_id or getattr(provider, "id", ""),
        revised_response=revised,
        preserved_units=preserved,
        edited_units=edited,
        deleted_units=deleted,
    )


def revision_record_to_dict(record: RevisionRecord) -> dict:
    """JSON-ready form for the revision sidecar file."""
    return {
        "document_id": record.document_id,
        "strategy": record.strategy.value,
        "model_id": record.model_id,
        "revised_response": record.revised_response,
        "preserved_units": record.preserved_units,
        "edited_units": record.edited_units,
        "deleted_units": record.deleted_units,
    }


def preservation_report(original: str, revised: str, reference: Optional[str] = None,
                        embedder=None) -> dict[str, float]:
    """Intrinsic revision metrics: lexical preservation plus semantic match.

    Edit distance and word overlap compare the revision against the original;
    the embedding cosine compares it against the reference revision when one
    is given.
    """
    report = {
        "edit_distance": normalized_edit_distance(original, revised),
        "word_overlap": word_overlap(original, revised),
    }
    if reference is not None and embedder is not None:
        report["similarity_vs_reference"] = cosine_similarity(
            embedder.embed(revised), embedder.embed(reference))
    return report
