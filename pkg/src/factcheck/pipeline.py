"""End-to-end pipeline: decompose, classify, retrieve, verify, correct, merge.

Produces a fully annotated benchmark record for one (question, response)
pair. Under the deterministic mock provider suite the whole run is a pure
function of its inputs, which is what the hermetic end-to-end tests rely on.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

from . import checkworthiness, prompting, retrieval, revision, verification
from .decomposition import check_decontextualization, decompose_document
from .model import (
    AtomicClaim,
    Category,
    DocumentVerdict,
    EditKind,
    EditOperation,
    FactcheckDocument,
    ImportanceLevel,
    SentenceUnit,
    Source,
    Stance,
    Verdict,
)
from .providers.store import RunMetadata
from .revision import RevisionStrategy
from .verification import AggregationWeights, StanceBackend, StanceLabelSpace

logger = logging.getLogger(__name__)

CORRECTION_TEMPLATE = "claim_correction_v1"


class LintError(ValueError):
    """Strict mode: claims failed the decontextualization lint."""

    def __init__(self, flagged: dict[str, list[str]]):
        self.flagged = flagged
        details = "; ".join(f"{claim!r}: {tokens}" for claim, tokens in flagged.items())
        super().__init__(f"claims failed decontextualization lint: {details}")


@dataclass
class PipelineConfig:
    evidence_k: int = retrieval.DEFAULT_TOP_K
    window: int = retrieval.DEFAULT_WINDOW
    stride: int = retrieval.DEFAULT_STRIDE
    alpha: float = retrieval.DEFAULT_ALPHA
    queries_per_claim: int = 3
    search_results_per_query: int = 3
    stance_space: StanceLabelSpace = field(default_factory=StanceLabelSpace)
    stance_backend: StanceBackend = StanceBackend.PROMPTED_LLM
    weights: AggregationWeights = field(default_factory=AggregationWeights)
    rate_importance: bool = False
    revision_strategy: RevisionStrategy = RevisionStrategy.MERGE_DETERMINISTIC
    strict: bool = False
    max_workers: int = 4


def minimal_replace_edit(original: str, corrected: str) -> EditOperation:
    """Word-boundary-snapped replace covering the differing middle span."""
    if original == corrected:
        raise ValueError("texts are identical; no edit needed")
    prefix = 0
    limit = min(len(original), len(corrected))
    while prefix < limit and original[prefix] == corrected[prefix]:
        prefix += 1
    suffix = 0
    while (suffix < limit - prefix
           and original[len(original) - 1 - suffix] == corrected[len(corrected) - 1 - suffix]):
        suffix += 1
    # snap outward to whitespace so the span reads as whole words
    while prefix > 0 and original[prefix - 1] != " ":
        prefix -= 1
    while suffix > 0 and original[len(original) - suffix] != " ":
        suffix -= 1
    target = original[prefix:len(original) - suffix]
    replacement = corrected[prefix:len(corrected) - suffix]
    if not target.strip():
        return EditOperation(EditKind.REPLACE, target_span=original, replacement=corrected)
    return EditOperation(EditKind.REPLACE, target_span=target, replacement=replacement)


def propose_correction(claim: AtomicClaim, providers) -> AtomicClaim:
    """Prompt for a corrected claim and turn the answer into edit operations.

    The provider answers either DELETE (complete hallucination) or a corrected
    claim text, which is converted to a minimal replace edit.
    """
    relevant = [e for e in claim.evidence if e.stance != Stance.IRRELEVANT]
    evidence_block = "\n".join(f"- {e.snippet}" for e in (relevant or claim.evidence))
    raw = providers.completion.complete(prompting.render(
        CORRECTION_TEMPLATE, claim=claim.text, evidence=evidence_block)).strip()

    if raw.upper().startswith("DELETE"):
        return replace(claim, edits=(EditOperation(EditKind.DELETE_CLAIM),), revised_text=None)
    corrected = " ".join(raw.strip('"').split())
    if not corrected or corrected == claim.text:
        logger.warning("correction for claim %s came back unchanged; leaving as-is", claim.id)
        return claim
    edit = minimal_replace_edit(claim.text, corrected)
    return replace(claim, edits=(edit,), revised_text=revision.apply_edits(claim.text, (edit,)))


class FactcheckPipeline:
    def __init__(self, providers, config: Optional[PipelineConfig] = None,
                 meta: Optional[RunMetadata] = None):
        self.providers = providers
        self.config = config or PipelineConfig()
        self.meta = meta if meta is not None else RunMetadata(
            provider_ids=providers.provider_ids() if hasattr(providers, "provider_ids") else {},
            prompt_versions=prompting.prompt_versions(),
        )

    # -- stages ---------------------------------------------------------------

    def _build_sentences(self, question: str, response: str) -> list[SentenceUnit]:
        result = decompose_document(response, self.providers.completion,
                                    max_workers=self.config.max_workers)
        sentences: list[SentenceUnit] = []
        flagged: dict[str, list[str]] = {}
        for s_index, (sentence_text, claim_texts) in enumerate(result.sentence_claims.items()):
            category = checkworthiness.classify_claim(sentence_text, self.providers.completion)
            checkworthy = category == Category.FACTUAL
            claims: list[AtomicClaim] = []
            if checkworthy:
                for c_index, claim_text in enumerate(claim_texts):
                    claim_category = checkworthiness.classify_claim(
                        claim_text, self.providers.completion)
                    tokens = check_decontextualization(claim_text)
                    if tokens:
                        flagged[claim_text] = tokens
                        logger.warning("claim %r fails decontextualization lint: %s",
                                       claim_text, tokens)
                    importance = (checkworthiness.rate_importance(
                        claim_text, question, self.providers.completion)
                        if self.config.rate_importance else ImportanceLevel.INTERMEDIATE)
                    claims.append(AtomicClaim(
                        id=f"s{s_index + 1}c{c_index + 1}",
                        text=claim_text,
                        category=claim_category,
                        importance=importance,
                    ))
            sentences.append(SentenceUnit(
                id=f"s{s_index + 1}",
                text=sentence_text,
                checkworthy=checkworthy,
                category=category,
                claims=tuple(claims),
            ))
        if flagged and self.config.strict:
            raise LintError(flagged)
        return sentences

    def _verify_claim(self, claim: AtomicClaim) -> AtomicClaim:
        if claim.category != Category.FACTUAL:
            return claim
        evidence = retrieval.collect_evidence(
            claim, self.providers,
            k=self.config.evidence_k,
            window=self.config.window,
            stride=self.config.stride,
            alpha=self.config.alpha,
            queries_per_claim=self.config.queries_per_claim,
            max_results=self.config.search_results_per_query,
            meta=self.meta,
            max_workers=self.config.max_workers,
        )
        claim = replace(claim, evidence=tuple(evidence))
        verified, decision = verification.verify_claim_full(
            claim, self.providers,
            space=self.config.stance_space,
            backend=self.config.stance_backend,
            weights=self.config.weights,
        )
        if decision.needs_correction:
            verified = propose_correction(verified, self.providers)
        return verified

    # -- entry point ------------------------------------------------------------

    def run(self, question: str, response: str, doc_id: str = "doc1",
            source: Source = Source.OTHER) -> FactcheckDocument:
        """Run all stages and return the fully annotated document."""
        sentences = self._build_sentences(question, response)

        positions = [(s_i, c_i) for s_i, sentence in enumerate(sentences)
                     for c_i in range(len(sentence.claims))]
        with ThreadPoolExecutor(max_workers=self.config.max_workers) as pool:
            verified = list(pool.map(
                lambda pos: self._verify_claim(sentences[pos[0]].claims[pos[1]]), positions))
        for (s_i, c_i), claim in zip(positions, verified):
            claims = list(sentences[s_i].claims)
            claims[c_i] = claim
            sentences[s_i] = replace(sentences[s_i], claims=tuple(claims))

        doc = FactcheckDocument(
            id=doc_id,
            question=question,
            response=response,
            source=source,
            sentences=tuple(sentences),
        )

        checkworthy = list(doc.checkworthy_claims())
        if not checkworthy:
            verdict = DocumentVerdict.NO_CHECKWORTHY_CLAIMS
        elif any(c.verdict == Verdict.FALSE for c in checkworthy):
            verdict = DocumentVerdict.CONTAINS_ERRORS
        else:
            verdict = DocumentVerdict.FACTUALLY_CORRECT
        doc = replace(doc, document_verdict=verdict)

        needs_revision = any(c.edits for c in doc.claims()) or any(
            s.deleted for s in doc.sentences)
        if needs_revision:
            doc = replace(doc, revised_response=self._revise(question, doc))
        return doc

    def _revise(self, question: str, doc: FactcheckDocument) -> str:
        strategy = self.config.revision_strategy
        if strategy == RevisionStrategy.MERGE_DETERMINISTIC:
            return revision.merge_response(doc, strict=self.config.strict)
        true_claims = [c.revised_text if c.revised_text is not None else c.text
                       for c in doc.checkworthy_claims() if not c.deleted]
        if not true_claims:
            return revision.merge_response(doc, strict=self.config.strict)
        record = revision.revise_response_llm(
            original=doc.response,
            true_claims=true_claims,
            question=question if strategy == RevisionStrategy.LLM_WITH_QUESTION else None,
            provider=self.providers.completion,
            document_id=doc.id,
            counts=revision.revision_counts(doc),
        )
        return record.revised_response


class PipelineAdapter:
    """Benchmark adapter backed by the pipeline's own stage implementations."""

    def __init__(self, providers, config: Optional[PipelineConfig] = None):
        self.providers = providers
        self.config = config or PipelineConfig()

    def classify_sentence(self, sentence: str) -> bool:
        return checkworthiness.classify_sentence(sentence, self.providers.completion)

    def classify_claim(self, claim: str) -> Category:
        return checkworthiness.classify_claim(claim, self.providers.completion)

    def classify_stance(self, claim: str, evidence: str) -> Stance:
        judgement = verification.classify_stance(
            claim, evidence, self.providers,
            space=self.config.stance_space, backend=self.config.stance_backend)
        if judgement.label == verification.THREE_LABEL_SUPPORT:
            return Stance.COMPLETELY_SUPPORT
        return Stance(judgement.label)

    def verify(self, claim: str, evidence: Sequence) -> Verdict:
        probe = AtomicClaim(id="probe", text=claim, evidence=tuple(evidence))
        return verification.verify_claim(
            probe, self.providers,
            space=self.config.stance_space,
            backend=self.config.stance_backend,
            weights=self.config.weights,
        ).verdict

    def revise(self, document: FactcheckDocument, true_claims: Sequence[str]) -> str:
        if self.config.revision_strategy == RevisionStrategy.MERGE_DETERMINISTIC:
            return revision.merge_response(document)
        record = revision.revise_response_llm(
            original=document.response,
            true_claims=list(true_claims) or [document.response],
            question=(document.question
                      if self.config.revision_strategy == RevisionStrategy.LLM_WITH_QUESTION
                      else None),
            provider=self.providers.completion,
            document_id=document.id,
        )
        return record.revised_response
