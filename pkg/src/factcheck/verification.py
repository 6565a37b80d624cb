"""Stance classification and verdict aggregation.

Each evidence item gets a stance against its claim (prompted LLM or an NLI
model mapped onto the stance space); stances are then folded into a verdict
weighted by source reliability. Refutes carry full weight, partial support
half weight, and irrelevant items are ignored.
"""
from __future__ import annotations

import dataclasses
import logging
import re
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from . import prompting
from .model import AtomicClaim, Reliability, Stance, Verdict
from .providers.base import NLI_LABELS, ProviderError

logger = logging.getLogger(__name__)

STANCE_FOUR_TEMPLATE = "stance_four_v1"
STANCE_THREE_TEMPLATE = "stance_three_v1"

THREE_LABEL_SUPPORT = "support"


class StanceError(ValueError):
    def __init__(self, message: str, raw_output: str):
        super().__init__(f"{message}: {raw_output!r}")
        self.raw_output = raw_output


class LabelMode(str, Enum):
    FOUR_LABEL = "four-label"
    THREE_LABEL = "three-label"


@dataclass(frozen=True)
class StanceLabelSpace:
    mode: LabelMode = LabelMode.FOUR_LABEL

    def labels(self) -> tuple[str, ...]:
        if self.mode == LabelMode.FOUR_LABEL:
            return (Stance.COMPLETELY_SUPPORT.value, Stance.PARTIALLY_SUPPORT.value,
                    Stance.REFUTE.value, Stance.IRRELEVANT.value)
        return (THREE_LABEL_SUPPORT, Stance.REFUTE.value, Stance.IRRELEVANT.value)


class StanceBackend(str, Enum):
    PROMPTED_LLM = "prompted-llm"
    NLI_MAPPED = "nli-mapped"


@dataclass(frozen=True)
class StanceJudgement:
    claim_id: str
    evidence_index: int
    label: str
    backend: StanceBackend


def merge_to_three_labels(label: str) -> str:
    """Collapse complete and partial support into a single support label."""
    if label in (Stance.COMPLETELY_SUPPORT.value, Stance.PARTIALLY_SUPPORT.value,
                 THREE_LABEL_SUPPORT):
        return THREE_LABEL_SUPPORT
    if label in (Stance.REFUTE.value, Stance.IRRELEVANT.value):
        return label
    raise ValueError(f"unknown stance label {label!r}")


_STANCE_ALIASES = {
    "completely support": Stance.COMPLETELY_SUPPORT.value,
    "completely supports": Stance.COMPLETELY_SUPPORT.value,
    "completely-support": Stance.COMPLETELY_SUPPORT.value,
    "complete support": Stance.COMPLETELY_SUPPORT.value,
    "fully support": Stance.COMPLETELY_SUPPORT.value,
    "fully supports": Stance.COMPLETELY_SUPPORT.value,
    "partially support": Stance.PARTIALLY_SUPPORT.value,
    "partially supports": Stance.PARTIALLY_SUPPORT.value,
    "partially-support": Stance.PARTIALLY_SUPPORT.value,
    "partial support": Stance.PARTIALLY_SUPPORT.value,
    "partly support": Stance.PARTIALLY_SUPPORT.value,
    "partly supports": Stance.PARTIALLY_SUPPORT.value,
    "support": THREE_LABEL_SUPPORT,
    "supports": THREE_LABEL_SUPPORT,
    "refute": Stance.REFUTE.value,
    "refutes": Stance.REFUTE.value,
    "irrelevant": Stance.IRRELEVANT.value,
}

# "does not support" must never parse as support
_NEGATED_SUPPORT_RE = re.compile(
    r"\b(?:does not|doesnt|not|never|neither|cannot|can not)\s+"
    r"(?:fully\s+|completely\s+|partially\s+|partly\s+)?supports?\b")


def parse_stance(raw: str, space: StanceLabelSpace) -> str:
    answer = re.sub(r"[^a-z\s-]", "", raw.strip().casefold()).strip()
    label = _STANCE_ALIASES.get(answer)
    if label is None:
        cleaned = _NEGATED_SUPPORT_RE.sub(" ", answer)
        for alias in sorted(_STANCE_ALIASES, key=len, reverse=True):
            if re.search(rf"\b{re.escape(alias)}\b", cleaned):
                label = _STANCE_ALIASES[alias]
                break
    if label is None:
        raise StanceError("unparseable stance answer", raw)
    if space.mode == LabelMode.THREE_LABEL:
        return merge_to_three_labels(label)
    if label == THREE_LABEL_SUPPORT:
        # bare "support" in four-label mode means full support
        return Stance.COMPLETELY_SUPPORT.value
    return label


_NLI_TO_STANCE = {
    "entailment": Stance.COMPLETELY_SUPPORT.value,
    "contradiction": Stance.REFUTE.value,
    "neutral": Stance.IRRELEVANT.value,
}


def classify_stance(claim: str, evidence: str, providers,
                    space: StanceLabelSpace = StanceLabelSpace(),
                    backend: StanceBackend = StanceBackend.PROMPTED_LLM,
                    claim_id: str = "", evidence_index: int = 0) -> StanceJudgement:
    """One stance label from the active space for a (claim, evidence) pair.

    The nli-mapped backend natively emits three labels (entailment maps to
    support); merging the four-label output therefore commutes with running
    directly in three-label mode.
    """
    if not claim.strip() or not evidence.strip():
        raise ValueError("claim and evidence must be non-empty")

    if backend == StanceBackend.NLI_MAPPED:
        if providers.nli is None:
            raise ValueError("nli backend requested but no NLI provider configured")
        raw = providers.nli.nli(premise=evidence, hypothesis=claim)
        if raw not in NLI_LABELS:
            raise StanceError("unknown NLI label", raw)
        label = _NLI_TO_STANCE[raw]
        if space.mode == LabelMode.THREE_LABEL:
            label = merge_to_three_labels(label)
    else:
        template = (STANCE_FOUR_TEMPLATE if space.mode == LabelMode.FOUR_LABEL
                    else STANCE_THREE_TEMPLATE)
        raw = providers.completion.complete(
            prompting.render(template, claim=claim, evidence=evidence))
        label = parse_stance(raw, space)

    return StanceJudgement(claim_id=claim_id, evidence_index=evidence_index,
                           label=label, backend=backend)


# ---------------------------------------------------------------------------
# Verdict aggregation


@dataclass(frozen=True)
class AggregationWeights:
    """Reliability weights and the partial-support discount.

    The qualitative rule is that refutes speak louder than partial support
    and unreliable sources count for little; the numbers are configurable
    artifact choices.
    """

    reliable: float = 1.0
    unknown: float = 0.5
    unreliable: float = 0.1
    partial_support_factor: float = 0.5

    def reliability_weight(self, reliability: Reliability) -> float:
        return {Reliability.RELIABLE: self.reliable,
                Reliability.UNKNOWN: self.unknown,
                Reliability.UNRELIABLE: self.unreliable}[reliability]


@dataclass(frozen=True)
class VerdictDecision:
    claim_id: str
    verdict: Verdict
    support_weight: float
    refute_weight: float
    needs_correction: bool
    rationale: str


def aggregate_verdict(claim: AtomicClaim, judgements: Sequence[StanceJudgement],
                      reliabilities: Optional[Sequence[Reliability]] = None,
                      weights: AggregationWeights = AggregationWeights()) -> VerdictDecision:
    """Fold stance judgements and source reliability into a verdict.

    Irrelevant items are ignored. The verdict is false when the refute weight
    exceeds the support weight, true in the opposite case, and
    not-enough-evidence when both are zero or exactly tied (conservative
    tie-breaking). Deterministic and independent of evidence order.
    """
    if reliabilities is None:
        reliabilities = [e.reliability for e in claim.evidence]
    if len(judgements) != len(reliabilities):
        raise ValueError("judgements and reliabilities must align 1:1")

    support = 0.0
    refute = 0.0
    supporting: list[int] = []
    refuting: list[int] = []
    for judgement, reliability in zip(judgements, reliabilities):
        w = weights.reliability_weight(reliability)
        label = judgement.label
        if label == Stance.COMPLETELY_SUPPORT.value or label == THREE_LABEL_SUPPORT:
            support += w
            supporting.append(judgement.evidence_index)
        elif label == Stance.PARTIALLY_SUPPORT.value:
            support += w * weights.partial_support_factor
            supporting.append(judgement.evidence_index)
        elif label == Stance.REFUTE.value:
            refute += w
            refuting.append(judgement.evidence_index)
        elif label != Stance.IRRELEVANT.value:
            raise ValueError(f"unknown stance label {label!r}")

    if refute > support:
        verdict = Verdict.FALSE
    elif support > refute:
        verdict = Verdict.TRUE
    else:
        verdict = Verdict.NOT_ENOUGH_EVIDENCE

    parts = []
    if supporting:
        parts.append(f"support weight {support:g} from evidence {sorted(supporting)}")
    if refuting:
        parts.append(f"refute weight {refute:g} from evidence {sorted(refuting)}")
    if not parts:
        parts.append("no relevant evidence")
    rationale = "; ".join(parts)

    return VerdictDecision(
        claim_id=claim.id,
        verdict=verdict,
        support_weight=support,
        refute_weight=refute,
        needs_correction=verdict == Verdict.FALSE,
        rationale=rationale,
    )


def verify_claim(claim: AtomicClaim, providers,
                 space: StanceLabelSpace = StanceLabelSpace(),
                 backend: StanceBackend = StanceBackend.PROMPTED_LLM,
                 weights: AggregationWeights = AggregationWeights()) -> VerdictDecision:
    """Stance-classify all evidence for a claim, then aggregate a verdict."""
    _, decision = verify_claim_full(claim, providers, space, backend, weights)
    return decision


def verify_claim_full(claim: AtomicClaim, providers,
                      space: StanceLabelSpace = StanceLabelSpace(),
                      backend: StanceBackend = StanceBackend.PROMPTED_LLM,
                      weights: AggregationWeights = AggregationWeights(),
                      ) -> tuple[AtomicClaim, VerdictDecision]:
    """verify_claim plus a copy of the claim with stances and verdict stored.

    A claim without evidence resolves immediately to not-enough-evidence.
    Failure on one evidence item downgrades that item to irrelevant with a
    warning instead of failing the claim.
    """
    if not claim.evidence:
        decision = VerdictDecision(claim_id=claim.id, verdict=Verdict.NOT_ENOUGH_EVIDENCE,
                                   support_weight=0.0, refute_weight=0.0,
                                   needs_correction=False, rationale="no evidence retrieved")
        return dataclasses.replace(claim, verdict=decision.verdict), decision

    judgements: list[StanceJudgement] = []
    for index, item in enumerate(claim.evidence):
        try:
            judgement = classify_stance(claim.text, item.snippet, providers, space,
                                        backend, claim_id=claim.id, evidence_index=index)
        except (ProviderError, StanceError):
            logger.warning("stance failed for claim %s evidence %d; treating as irrelevant",
                           claim.id, index, exc_info=True)
            judgement = StanceJudgement(claim_id=claim.id, evidence_index=index,
                                        label=Stance.IRRELEVANT.value, backend=backend)
        judgements.append(judgement)

    decision = aggregate_verdict(claim, judgements, weights=weights)

    def to_stance(label: str) -> Stance:
        if label == THREE_LABEL_SUPPORT:
            return Stance.COMPLETELY_SUPPORT
        return Stance(label)

    new_evidence = tuple(
        dataclasses.replace(item, stance=to_stance(judgement.label))
        for item, judgement in zip(claim.evidence, judgements))
    updated = dataclasses.replace(claim, evidence=new_evidence, verdict=decision.verdict)
    return updated, decision
