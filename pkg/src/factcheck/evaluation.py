"""Metrics, baselines, FactScore, data selection, and the benchmark harness.

The harness treats a fact-checker as a black box with per-subtask hooks and
scores each hook against gold labels, so that individual pipeline stages can
be compared across systems in one report format.
"""
from __future__ import annotations

import json
import logging
import math
import random
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Optional, Protocol, Sequence

from .model import (
    Category,
    EvidenceItem,
    FactcheckDocument,
    Stance,
    Verdict,
)

logger = logging.getLogger(__name__)

_PUNCT = "!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~‘’“”–—…"


def tokenize(text: str) -> list[str]:
    """Shared lexical tokenizer: whitespace split, case-fold, strip punctuation.

    Every lexical metric in the package uses this one tokenizer so numbers
    stay comparable across modules.
    """
    tokens = []
    for raw in text.split():
        token = raw.casefold().strip(_PUNCT)
        if token:
            tokens.append(token)
    return tokens


# ---------------------------------------------------------------------------
# Lexical metrics


def levenshtein(a: Sequence[str], b: Sequence[str]) -> int:
    """Classic token-level Levenshtein distance (two-row DP)."""
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    previous = list(range(len(b) + 1))
    for i, tok_a in enumerate(a, start=1):
        current = [i]
        for j, tok_b in enumerate(b, start=1):
            cost = 0 if tok_a == tok_b else 1
            current.append(min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + cost))
        previous = current
    return previous[-1]


def normalized_edit_distance(a: str, b: str) -> float:
    """Word-level Levenshtein divided by the longer token count; 0 when both empty."""
    ta, tb = tokenize(a), tokenize(b)
    denom = max(len(ta), len(tb))
    if denom == 0:
        return 0.0
    return levenshtein(ta, tb) / denom


def word_overlap(a: str, b: str) -> float:
    """Jaccard overlap of token sets (set semantics, case-folded)."""
    sa, sb = set(tokenize(a)), set(tokenize(b))
    if not sa and not sb:
        return 1.0
    union = sa | sb
    return len(sa & sb) / len(union)


def _ngrams(tokens: list[str], n: int) -> set[tuple[str, ...]]:
    return {tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1)}


def ngram_distance(a: str, b: str, n: int = 2) -> float:
    """1 - Jaccard over word n-gram sets (default bigrams)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    ga, gb = _ngrams(tokenize(a), n), _ngrams(tokenize(b), n)
    if not ga and not gb:
        return 0.0
    union = ga | gb
    return 1.0 - len(ga & gb) / len(union)


def cosine_similarity(u: Sequence[float], v: Sequence[float]) -> float:
    if len(u) != len(v):
        raise ValueError("vector length mismatch")
    dot = sum(x * y for x, y in zip(u, v))
    nu = math.sqrt(sum(x * x for x in u))
    nv = math.sqrt(sum(x * x for x in v))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return dot / (nu * nv)


# ---------------------------------------------------------------------------
# Classification evaluation


@dataclass(frozen=True)
class LabelScores:
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class ConfusionMatrix:
    """Counts[gold_row][pred_col] over an ordered label list."""

    labels: tuple[str, ...]
    counts: tuple[tuple[int, ...], ...]

    def total(self) -> int:
        return sum(sum(row) for row in self.counts)

    def gold_count(self, label: str) -> int:
        return sum(self.counts[self.labels.index(label)])

    def as_dict(self) -> dict[str, Any]:
        return {"labels": list(self.labels), "counts": [list(r) for r in self.counts]}


@dataclass(frozen=True)
class EvalReport:
    subtask: str
    accuracy: float
    macro_precision: float
    macro_recall: float
    macro_f1: float
    per_label: dict[str, LabelScores]
    confusion: ConfusionMatrix
    intrinsic: Optional[dict[str, float]] = None
    sample_count: int = 0

    def as_dict(self) -> dict[str, Any]:
        return {
            "subtask": self.subtask,
            "accuracy": self.accuracy,
            "macro_precision": self.macro_precision,
            "macro_recall": self.macro_recall,
            "macro_f1": self.macro_f1,
            "per_label": {
                label: {"precision": s.precision, "recall": s.recall, "f1": s.f1}
                for label, s in self.per_label.items()
            },
            "confusion": self.confusion.as_dict(),
            "intrinsic": self.intrinsic,
            "sample_count": self.sample_count,
        }


def _safe_div(num: float, denom: float) -> float:
    # undefined divisions count as 0 by convention
    return num / denom if denom else 0.0


def eval_classification(gold: Sequence[str], pred: Sequence[str],
                        label_space: Optional[Sequence[str]] = None,
                        macro_over: str = "present",
                        subtask: str = "classification") -> EvalReport:
    """Accuracy, per-label and macro P/R/F1, and a confusion matrix.

    `macro_over` picks the averaging convention: "present" averages over the
    labels that occur in gold or predictions (the convention that reproduces
    the reference baselines); "declared" averages over the full label space.
    The confusion matrix always spans the declared space.
    """
    if len(gold) != len(pred):
        raise ValueError("gold and pred must have equal length")
    if not gold:
        raise ValueError("cannot evaluate an empty label vector")
    if macro_over not in ("present", "declared"):
        raise ValueError(f"unknown macro convention {macro_over!r}")

    if label_space is None:
        declared = sorted(set(gold) | set(pred))
    else:
        declared = list(label_space)
        outside = (set(gold) | set(pred)) - set(declared)
        if outside:
            raise ValueError(f"labels outside declared space: {sorted(outside)}")

    index = {label: i for i, label in enumerate(declared)}
    counts = [[0] * len(declared) for _ in declared]
    for g, p in zip(gold, pred):
        counts[index[g]][index[p]] += 1

    present = [l for l in declared if l in set(gold) | set(pred)]
    effective = present if macro_over == "present" else declared

    per_label: dict[str, LabelScores] = {}
    for label in effective:
        i = index[label]
        tp = counts[i][i]
        pred_total = sum(counts[r][i] for r in range(len(declared)))
        gold_total = sum(counts[i])
        precision = _safe_div(tp, pred_total)
        recall = _safe_div(tp, gold_total)
        f1 = _safe_div(2 * precision * recall, precision + recall)
        per_label[label] = LabelScores(precision, recall, f1)

    macro_p = sum(s.precision for s in per_label.values()) / len(effective)
    macro_r = sum(s.recall for s in per_label.values()) / len(effective)
    macro_f1 = sum(s.f1 for s in per_label.values()) / len(effective)
    accuracy = sum(1 for g, p in zip(gold, pred) if g == p) / len(gold)

    return EvalReport(
        subtask=subtask,
        accuracy=accuracy,
        macro_precision=macro_p,
        macro_recall=macro_r,
        macro_f1=macro_f1,
        per_label=per_label,
        confusion=ConfusionMatrix(tuple(declared), tuple(tuple(r) for r in counts)),
        sample_count=len(gold),
    )


# ---------------------------------------------------------------------------
# FactScore


def factscore(doc: FactcheckDocument, strict: bool = False) -> Optional[float]:
    """Fraction of checkworthy claims fully supported by evidence.

    A claim counts as supported when its verdict is true and, if any evidence
    stance was assessed, at least one item completely supports it (partial
    support alone does not count). Documents without checkworthy claims return
    None and are excluded from corpus averages.
    """
    checkworthy = list(doc.checkworthy_claims())
    if not checkworthy:
        return None
    supported = 0
    for claim in checkworthy:
        if claim.verdict == Verdict.UNASSESSED:
            if strict:
                raise ValueError(f"claim {claim.id}: unassessed verdict in strict mode")
            continue
        if claim.verdict != Verdict.TRUE:
            continue
        assessed = [e for e in claim.evidence if e.stance != Stance.UNASSESSED]
        if assessed and not any(e.stance == Stance.COMPLETELY_SUPPORT for e in assessed):
            continue
        supported += 1
    return supported / len(checkworthy)


def mean_factscore(docs: Iterable[FactcheckDocument]) -> Optional[float]:
    scores = [s for s in (factscore(d) for d in docs) if s is not None]
    if not scores:
        return None
    return sum(scores) / len(scores)


# ---------------------------------------------------------------------------
# Fact-checker adapters


class FactcheckerAdapter(Protocol):
    """Per-subtask hooks a system under evaluation may implement.

    A hook left as None (or missing) makes the corresponding subtask
    unavailable; run_benchmark raises if it is requested anyway.
    """

    def classify_sentence(self, sentence: str) -> bool: ...

    def classify_claim(self, claim: str) -> Category: ...

    def classify_stance(self, claim: str, evidence: str) -> Stance: ...

    def verify(self, claim: str, evidence: Sequence[EvidenceItem]) -> Verdict: ...

    def revise(self, document: FactcheckDocument, true_claims: Sequence[str]) -> str: ...


class AlwaysCheckworthyAdapter:
    """Majority-guess floor: everything is a checkworthy factual statement."""

    def classify_sentence(self, sentence: str) -> bool:
        return True

    def classify_claim(self, claim: str) -> Category:
        return Category.FACTUAL


class ConstantVerdictAdapter:
    def __init__(self, verdict: Verdict):
        self.verdict = verdict

    def verify(self, claim: str, evidence: Sequence[EvidenceItem]) -> Verdict:
        return self.verdict


class AlwaysTrueAdapter(ConstantVerdictAdapter):
    def __init__(self) -> None:
        super().__init__(Verdict.TRUE)


class AlwaysFalseAdapter(ConstantVerdictAdapter):
    def __init__(self) -> None:
        super().__init__(Verdict.FALSE)


class RandomAdapter:
    """Seeded uniform guesser for every hook (a reproducible floor)."""

    def __init__(self, seed: int = 0):
        self._rng = random.Random(seed)

    def classify_sentence(self, sentence: str) -> bool:
        return self._rng.random() < 0.5

    def classify_claim(self, claim: str) -> Category:
        return self._rng.choice(list(Category))

    def classify_stance(self, claim: str, evidence: str) -> Stance:
        return self._rng.choice([s for s in Stance if s != Stance.UNASSESSED])

    def verify(self, claim: str, evidence: Sequence[EvidenceItem]) -> Verdict:
        return self._rng.choice([Verdict.TRUE, Verdict.FALSE])


class SubprocessAdapter:
    """Drive an external fact-checker over line-delimited JSON on stdio.

    Each hook writes one request object ({"op": ..., plus arguments}) and
    reads one {"result": ...} line back. The child process is spawned once
    and reused across calls.
    """

    def __init__(self, command: Sequence[str]):
        import subprocess

        self._process = subprocess.Popen(
            list(command), stdin=subprocess.PIPE, stdout=subprocess.PIPE, text=True)

    def _call(self, payload: dict) -> Any:
        assert self._process.stdin is not None and self._process.stdout is not None
        self._process.stdin.write(json.dumps(payload, ensure_ascii=False) + "\n")
        self._process.stdin.flush()
        line = self._process.stdout.readline()
        if not line:
            raise RuntimeError("subprocess adapter closed its stdout")
        return json.loads(line)["result"]

    def classify_sentence(self, sentence: str) -> bool:
        return bool(self._call({"op": "classify_sentence", "sentence": sentence}))

    def classify_claim(self, claim: str) -> Category:
        return Category(self._call({"op": "classify_claim", "claim": claim}))

    def classify_stance(self, claim: str, evidence: str) -> Stance:
        return Stance(self._call({"op": "classify_stance", "claim": claim,
                                  "evidence": evidence}))

    def verify(self, claim: str, evidence: Sequence[EvidenceItem]) -> Verdict:
        return Verdict(self._call({
            "op": "verify", "claim": claim,
            "evidence": [{"snippet": e.snippet, "url": e.url} for e in evidence]}))

    def revise(self, document: FactcheckDocument, true_claims: Sequence[str]) -> str:
        return str(self._call({"op": "revise", "response": document.response,
                               "question": document.question,
                               "true_claims": list(true_claims)}))

    def close(self) -> None:
        if self._process.stdin:
            self._process.stdin.close()
        self._process.wait(timeout=10)


SUBTASKS = ("s1-sentence-cw", "s2-claim-cw", "s3-stance", "s4-verification", "s5-revision")

_SENTENCE_LABELS = ("checkworthy", "not-checkworthy")
_CATEGORY_LABELS = tuple(c.value for c in Category)
_STANCE_LABELS = tuple(s.value for s in Stance if s != Stance.UNASSESSED)
_VERDICT_LABELS = ("true", "false", "not-enough-evidence")


def _require_hook(system: Any, name: str, subtask: str) -> Callable:
    hook = getattr(system, name, None)
    if hook is None:
        raise ValueError(f"adapter lacks hook {name!r} required by subtask {subtask}")
    return hook


def run_benchmark(system: Any, dataset: Sequence[FactcheckDocument],
                  subtasks: Optional[Iterable[str]] = None,
                  macro_over: str = "present",
                  three_label_stance: bool = False,
                  embedder: Any = None) -> list[EvalReport]:
    """Score an adapter's hooks against gold labels, one report per subtask.

    Subtask 5 (revision) emits an intrinsic metric bundle instead of
    classification scores: mean edit distance and word overlap against the
    original response, plus embedding cosine against the gold revision when an
    embedder is supplied. Reports come back in canonical subtask order,
    deterministically for a deterministic adapter.
    """
    requested = list(subtasks) if subtasks is not None else list(SUBTASKS)
    unknown = set(requested) - set(SUBTASKS)
    if unknown:
        raise ValueError(f"unknown subtasks: {sorted(unknown)}")

    reports: list[EvalReport] = []
    for subtask in SUBTASKS:
        if subtask not in requested:
            continue
        if subtask == "s1-sentence-cw":
            hook = _require_hook(system, "classify_sentence", subtask)
            gold, pred = [], []
            for doc in dataset:
                for sentence in doc.sentences:
                    gold.append("checkworthy" if sentence.checkworthy else "not-checkworthy")
                    pred.append("checkworthy" if hook(sentence.text) else "not-checkworthy")
            reports.append(eval_classification(gold, pred, _SENTENCE_LABELS,
                                               macro_over, subtask))
        elif subtask == "s2-claim-cw":
            hook = _require_hook(system, "classify_claim", subtask)
            gold, pred = [], []
            for doc in dataset:
                for claim in doc.claims():
                    gold.append(claim.category.value)
                    pred.append(Category(hook(claim.text)).value)
            reports.append(eval_classification(gold, pred, _CATEGORY_LABELS,
                                               macro_over, subtask))
        elif subtask == "s3-stance":
            hook = _require_hook(system, "classify_stance", subtask)
            gold, pred = [], []
            for doc in dataset:
                for claim in doc.claims():
                    for item in claim.evidence:
                        if item.stance == Stance.UNASSESSED:
                            continue
                        g, p = item.stance.value, Stance(hook(claim.text, item.snippet)).value
                        if three_label_stance:
                            from .verification import merge_to_three_labels
                            g, p = merge_to_three_labels(g), merge_to_three_labels(p)
                        gold.append(g)
                        pred.append(p)
            labels = ("support", "refute", "irrelevant") if three_label_stance else _STANCE_LABELS
            reports.append(eval_classification(gold, pred, labels, macro_over, subtask))
        elif subtask == "s4-verification":
            hook = _require_hook(system, "verify", subtask)
            gold, pred = [], []
            for doc in dataset:
                for claim in doc.checkworthy_claims():
                    if claim.verdict not in (Verdict.TRUE, Verdict.FALSE):
                        continue
                    gold.append(claim.verdict.value)
                    pred.append(Verdict(hook(claim.text, claim.evidence)).value)
            reports.append(eval_classification(gold, pred, _VERDICT_LABELS,
                                               macro_over, subtask))
        elif subtask == "s5-revision":
            hook = _require_hook(system, "revise", subtask)
            edit_distances, overlaps, similarities = [], [], []
            for doc in dataset:
                if doc.revised_response is None:
                    continue
                true_claims = _surviving_claim_texts(doc)
                revised = hook(doc, true_claims)
                edit_distances.append(normalized_edit_distance(revised, doc.response))
                overlaps.append(word_overlap(revised, doc.response))
                if embedder is not None:
                    similarities.append(cosine_similarity(
                        embedder.embed(revised), embedder.embed(doc.revised_response)))
            intrinsic = {
                "edit_distance": _mean(edit_distances),
                "word_overlap": _mean(overlaps),
            }
            if similarities:
                intrinsic["similarity_vs_reference"] = _mean(similarities)
            reports.append(EvalReport(
                subtask=subtask, accuracy=0.0, macro_precision=0.0, macro_recall=0.0,
                macro_f1=0.0, per_label={}, confusion=ConfusionMatrix((), ()),
                intrinsic=intrinsic, sample_count=len(edit_distances)))
    return reports


def _mean(values: Sequence[float]) -> float:
    return sum(values) / len(values) if values else 0.0


def _surviving_claim_texts(doc: FactcheckDocument) -> list[str]:
    texts = []
    for claim in doc.checkworthy_claims():
        if claim.deleted:
            continue
        texts.append(claim.revised_text if claim.revised_text is not None else claim.text)
    return texts


# ---------------------------------------------------------------------------
# Data selection


@dataclass(frozen=True)
class SelectionThresholds:
    min_response_chars: int = 200
    max_gold_cosine: float = 0.5
    max_factscore: float = 0.2


@dataclass(frozen=True)
class Candidate:
    question: str
    response: str
    gold_answer: Optional[str] = None


def select_data(candidates: Sequence[Candidate], providers: Any,
                thresholds: SelectionThresholds = SelectionThresholds(),
                pipeline: Optional[Callable[[str, str], FactcheckDocument]] = None,
                ) -> list[Candidate]:
    """Keep fact-intensive, likely-false candidates.

    Filters in order: response length, embedding similarity to the gold answer
    (when present), then full-pipeline FactScore. Provider failures skip the
    candidate with a logged warning rather than aborting the batch.
    """
    if pipeline is None:
        from .pipeline import FactcheckPipeline
        pipeline = FactcheckPipeline(providers).run

    selected: list[Candidate] = []
    for candidate in candidates:
        if len(candidate.response) < thresholds.min_response_chars:
            continue
        try:
            if candidate.gold_answer is not None:
                cos = cosine_similarity(
                    providers.embedding.embed(candidate.response),
                    providers.embedding.embed(candidate.gold_answer))
                if cos > thresholds.max_gold_cosine:
                    continue
            doc = pipeline(candidate.question, candidate.response)
            score = factscore(doc)
        except Exception:
            logger.warning("selection failed for %r; skipping", candidate.question, exc_info=True)
            continue
        if score is not None and score < thresholds.max_factscore:
            selected.append(candidate)
    return selected


# ---------------------------------------------------------------------------
# Report export


def reports_to_json(reports: Sequence[EvalReport]) -> str:
    return json.dumps([r.as_dict() for r in reports], indent=2, ensure_ascii=False)


def format_report_table(reports: Sequence[EvalReport]) -> str:
    """Aligned plain-text summary, one row per subtask report."""
    header = f"{'subtask':<18} {'n':>6} {'acc':>7} {'macro-P':>8} {'macro-R':>8} {'macro-F1':>9}"
    lines = [header, "-" * len(header)]
    for r in reports:
        lines.append(
            f"{r.subtask:<18} {r.sample_count:>6} {r.accuracy:>7.3f} "
            f"{r.macro_precision:>8.3f} {r.macro_recall:>8.3f} {r.macro_f1:>9.3f}")
        if r.intrinsic:
            extras = "  ".join(f"{k}={v:.3f}" for k, v in r.intrinsic.items())
            lines.append(f"{'':<18} {extras}")
    return "\n".join(lines)


def format_label_table(report: EvalReport) -> str:
    """Per-label precision/recall/F1 rows for one report."""
    lines = [f"{'label':<22} {'Prec':>6} {'Recall':>7} {'F1':>6}"]
    for label, scores in report.per_label.items():
        lines.append(f"{label:<22} {scores.precision:>6.2f} {scores.recall:>7.2f} {scores.f1:>6.2f}")
    return "\n".join(lines)
