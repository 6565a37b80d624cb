"""Benchmark data model: documents, sentences, atomic claims, evidence.

A benchmark record is a (question, response) pair with its full decomposition
tree: sentences, atomic claims per sentence, evidence per claim, stance and
verdict labels, edit operations, and the revised response. Records are stored
as UTF-8 JSON Lines, one document per line (a wrapper array is also accepted
on read).

All types are immutable values (frozen dataclasses, tuples for sequences);
"mutation" means building a new document, typically via `dataclasses.replace`.
"""
from __future__ import annotations

import dataclasses
import json
import re
from dataclasses import dataclass
from enum import Enum
from typing import Any, Iterable, Iterator, Optional

SCHEMA_VERSION = 1

# Auto-collected evidence per checkworthy claim; manual items do not count
# toward this cap.
DEFAULT_EVIDENCE_K = 5


class Source(str, Enum):
    IN_HOUSE = "in-house"
    DOLLY_CLOSED_QA = "dolly-closed-qa"
    DOLLY_OPEN_QA = "dolly-open-qa"
    OTHER = "other"


class Category(str, Enum):
    """What kind of statement a sentence or claim is."""

    FACTUAL = "factual"
    OPINION = "opinion"
    NOT_A_CLAIM = "not-a-claim"
    OTHER = "other"


class ImportanceLevel(str, Enum):
    MOST_IMPORTANT = "most-important"
    INTERMEDIATE = "intermediate"
    LESS_IMPORTANT = "less-important"


class Stance(str, Enum):
    """Relation of one evidence passage to its claim."""

    COMPLETELY_SUPPORT = "completely-support"
    PARTIALLY_SUPPORT = "partially-support"
    REFUTE = "refute"
    IRRELEVANT = "irrelevant"
    UNASSESSED = "unassessed"


class Reliability(str, Enum):
    RELIABLE = "reliable"
    UNKNOWN = "unknown"
    UNRELIABLE = "unreliable"


class Verdict(str, Enum):
    TRUE = "true"
    FALSE = "false"
    NOT_ENOUGH_EVIDENCE = "not-enough-evidence"
    UNASSESSED = "unassessed"


class DocumentVerdict(str, Enum):
    FACTUALLY_CORRECT = "factually-correct"
    CONTAINS_ERRORS = "contains-errors"
    NO_CHECKWORTHY_CLAIMS = "no-checkworthy-claims"


class EditKind(str, Enum):
    DELETE_CLAIM = "delete-claim"
    REPLACE = "replace"
    DELETE_SPAN = "delete-span"


class ValidationError(ValueError):
    """A document violates the schema; `field_paths` lists the offenders."""

    def __init__(self, errors: list[str]):
        self.field_paths = list(errors)
        super().__init__("invalid document: " + "; ".join(errors))


_URL_RE = re.compile(r"^(https?|ftp)://\S+$")
MANUAL_URL_PREFIX = "manual:"


def is_valid_evidence_url(url: str) -> bool:
    return url.startswith(MANUAL_URL_PREFIX) or bool(_URL_RE.match(url))


@dataclass(frozen=True)
class EditOperation:
    """One minimal correction applied to a claim.

    `replace` swaps the first verbatim occurrence of `target_span` for
    `replacement`; `delete-span` removes the first occurrence of
    `target_span`; `delete-claim` drops the claim entirely.
    """

    kind: EditKind
    target_span: Optional[str] = None
    replacement: Optional[str] = None


@dataclass(frozen=True)
class EvidenceItem:
    """One retrieved (or manually collected) passage judged against a claim."""

    query: str
    url: str
    snippet: str
    reliability: Reliability = Reliability.UNKNOWN
    stance: Stance = Stance.UNASSESSED
    sufficient_alone: bool = False

    @property
    def is_manual(self) -> bool:
        return self.url.startswith(MANUAL_URL_PREFIX)


@dataclass(frozen=True)
class AtomicClaim:
    """A context-independent checkable statement extracted from a sentence."""

    id: str
    text: str
    category: Category = Category.FACTUAL
    importance: ImportanceLevel = ImportanceLevel.INTERMEDIATE
    evidence: tuple[EvidenceItem, ...] = ()
    verdict: Verdict = Verdict.UNASSESSED
    edits: tuple[EditOperation, ...] = ()
    revised_text: Optional[str] = None

    @property
    def checkworthy(self) -> bool:
        return self.category == Category.FACTUAL

    @property
    def deleted(self) -> bool:
        return any(e.kind == EditKind.DELETE_CLAIM for e in self.edits)


@dataclass(frozen=True)
class SentenceUnit:
    """One sentence of the original response with its decomposed claims."""

    id: str
    text: str
    checkworthy: bool = True
    category: Category = Category.FACTUAL
    importance: ImportanceLevel = ImportanceLevel.INTERMEDIATE
    claims: tuple[AtomicClaim, ...] = ()
    revised_text: Optional[str] = None
    deleted: bool = False


@dataclass(frozen=True)
class FactcheckDocument:
    """One benchmark record: a (question, response) pair fully annotated."""

    id: str
    question: str
    response: str
    source: Source = Source.OTHER
    sentences: tuple[SentenceUnit, ...] = ()
    revised_response: Optional[str] = None
    document_verdict: Optional[DocumentVerdict] = None
    schema_version: int = SCHEMA_VERSION

    def claims(self) -> Iterator[AtomicClaim]:
        for sentence in self.sentences:
            yield from sentence.claims

    def checkworthy_claims(self) -> Iterator[AtomicClaim]:
        return (c for c in self.claims() if c.checkworthy)


@dataclass(frozen=True)
class DatasetStats:
    documents: int = 0
    sentences: int = 0
    checkworthy_sentences: int = 0
    claims: int = 0
    checkworthy_claims: int = 0
    evidence_items: int = 0

    def as_tuple(self) -> tuple[int, int, int, int, int, int]:
        return (
            self.documents,
            self.sentences,
            self.checkworthy_sentences,
            self.claims,
            self.checkworthy_claims,
            self.evidence_items,
        )


# ---------------------------------------------------------------------------
# Validation


def _validate_edit(op: EditOperation, path: str, claim_text: str, errors: list[str]) -> None:
    if op.kind == EditKind.REPLACE:
        if op.target_span is None or op.replacement is None:
            errors.append(f"{path}: replace requires target_span and replacement")
    elif op.kind == EditKind.DELETE_SPAN:
        if op.target_span is None:
            errors.append(f"{path}.target_span: delete-span requires target_span")
        if op.replacement is not None:
            errors.append(f"{path}.replacement: delete-span takes no replacement")
    elif op.kind == EditKind.DELETE_CLAIM:
        if op.target_span is not None or op.replacement is not None:
            errors.append(f"{path}: delete-claim takes no spans")
    if op.target_span is not None and op.target_span not in claim_text:
        errors.append(f"{path}.target_span: not found verbatim in claim text")


def _validate_claim(claim: AtomicClaim, path: str, errors: list[str],
                    evidence_k: int = DEFAULT_EVIDENCE_K) -> None:
    if not claim.id:
        errors.append(f"{path}.id: empty")
    if not claim.text.strip():
        errors.append(f"{path}.text: empty")
    if claim.verdict != Verdict.UNASSESSED and claim.category != Category.FACTUAL:
        errors.append(f"{path}.verdict: set on non-factual claim")
    auto_evidence = sum(1 for e in claim.evidence if not e.is_manual)
    if auto_evidence > evidence_k:
        errors.append(f"{path}.evidence: {auto_evidence} auto items exceed k={evidence_k}")
    for i, item in enumerate(claim.evidence):
        epath = f"{path}.evidence[{i}]"
        if not item.snippet.strip():
            errors.append(f"{epath}.snippet: empty")
        if not is_valid_evidence_url(item.url):
            errors.append(f"{epath}.url: not a valid URL or manual: reference")
    for i, op in enumerate(claim.edits):
        _validate_edit(op, f"{path}.edits[{i}]", claim.text, errors)
    if claim.revised_text is not None:
        if not claim.edits:
            errors.append(f"{path}.revised_text: set without edits")
        elif claim.deleted:
            errors.append(f"{path}.revised_text: set on a deleted claim")
        elif claim.revised_text == claim.text:
            errors.append(f"{path}.revised_text: identical to text despite edits")
    elif claim.edits and not claim.deleted:
        errors.append(f"{path}.revised_text: missing despite non-delete edits")


def _validate_sentence(sentence: SentenceUnit, path: str, errors: list[str],
                       evidence_k: int = DEFAULT_EVIDENCE_K) -> None:
    if not sentence.id:
        errors.append(f"{path}.id: empty")
    if sentence.checkworthy != (sentence.category == Category.FACTUAL):
        errors.append(f"{path}.checkworthy: must equal (category == factual)")
    if not sentence.checkworthy and sentence.claims:
        errors.append(f"{path}.claims: non-empty on a non-checkworthy sentence")
    for i, claim in enumerate(sentence.claims):
        _validate_claim(claim, f"{path}.claims[{i}]", errors, evidence_k)


def validate_document(doc: FactcheckDocument, strict: bool = False,
                      evidence_k: int = DEFAULT_EVIDENCE_K) -> list[str]:
    """Return field-path validation errors (empty when the document is valid).

    Structural invariants are always checked. `strict` adds the cross-field
    coherence rules that only hold for fully annotated records (a consolidated
    export), not for in-flight annotation drafts:
      - a checkworthy, non-deleted sentence has at least one claim;
      - revised_response is present iff any claim was edited or any sentence
        deleted;
      - document_verdict, when set, is contains-errors iff some claim verdict
        is false.
    """
    errors: list[str] = []
    if not doc.id:
        errors.append("id: empty")
    for i, sentence in enumerate(doc.sentences):
        _validate_sentence(sentence, f"sentences[{i}]", errors, evidence_k)

    if strict:
        for i, sentence in enumerate(doc.sentences):
            if sentence.checkworthy and not sentence.deleted and not sentence.claims:
                errors.append(f"sentences[{i}].claims: checkworthy sentence without claims")
        any_edit = any(c.edits for c in doc.claims()) or any(s.deleted for s in doc.sentences)
        if any_edit and doc.revised_response is None:
            errors.append("revised_response: missing despite edits or deletions")
        if not any_edit and doc.revised_response is not None:
            errors.append("revised_response: present without any edit or deletion")
        if doc.document_verdict is not None:
            any_false = any(c.verdict == Verdict.FALSE for c in doc.claims())
            if any_false != (doc.document_verdict == DocumentVerdict.CONTAINS_ERRORS):
                errors.append("document_verdict: inconsistent with claim verdicts")
    return errors


# ---------------------------------------------------------------------------
# Serialization (UTF-8 JSON, snake_case field names, canonical key order)


def _edit_to_dict(op: EditOperation) -> dict[str, Any]:
    return {
        "kind": op.kind.value,
        "target_span": op.target_span,
        "replacement": op.replacement,
    }


def _evidence_to_dict(item: EvidenceItem) -> dict[str, Any]:
    return {
        "query": item.query,
        "url": item.url,
        "snippet": item.snippet,
        "reliability": item.reliability.value,
        "stance": item.stance.value,
        "sufficient_alone": item.sufficient_alone,
    }


def _claim_to_dict(claim: AtomicClaim) -> dict[str, Any]:
    return {
        "id": claim.id,
        "text": claim.text,
        "category": claim.category.value,
        "importance": claim.importance.value,
        "evidence": [_evidence_to_dict(e) for e in claim.evidence],
        "verdict": claim.verdict.value,
        "edits": [_edit_to_dict(op) for op in claim.edits],
        "revised_text": claim.revised_text,
    }


def _sentence_to_dict(sentence: SentenceUnit) -> dict[str, Any]:
    return {
        "id": sentence.id,
        "text": sentence.text,
        "checkworthy": sentence.checkworthy,
        "category": sentence.category.value,
        "importance": sentence.importance.value,
        "claims": [_claim_to_dict(c) for c in sentence.claims],
        "revised_text": sentence.revised_text,
        "deleted": sentence.deleted,
    }


def document_to_dict(doc: FactcheckDocument) -> dict[str, Any]:
    return {
        "id": doc.id,
        "source": doc.source.value,
        "question": doc.question,
        "response": doc.response,
        "sentences": [_sentence_to_dict(s) for s in doc.sentences],
        "revised_response": doc.revised_response,
        "document_verdict": doc.document_verdict.value if doc.document_verdict else None,
        "schema_version": doc.schema_version,
    }


def serialize_document(doc: FactcheckDocument, validate: bool = True) -> str:
    """Emit one JSON object for the document (no trailing newline).

    Raises ValidationError listing field paths when structural invariants are
    violated; round-trip stable: parse(serialize(d)) == d.
    """
    if validate:
        errors = validate_document(doc)
        if errors:
            raise ValidationError(errors)
    return json.dumps(document_to_dict(doc), ensure_ascii=False)


def _require(obj: dict[str, Any], key: str, path: str, errors: list[str]) -> Any:
    if key not in obj:
        errors.append(f"{path}{key}: missing")
        return None
    return obj[key]


def _parse_enum(enum_cls: type, raw: Any, path: str, errors: list[str]) -> Any:
    try:
        return enum_cls(raw)
    except ValueError:
        errors.append(f"{path}: unknown value {raw!r}")
        return None


def document_from_dict(data: dict[str, Any]) -> FactcheckDocument:
    errors: list[str] = []

    def parse_edit(obj: dict[str, Any], path: str) -> Optional[EditOperation]:
        kind = _parse_enum(EditKind, _require(obj, "kind", f"{path}.", errors), f"{path}.kind", errors)
        if kind is None:
            return None
        return EditOperation(
            kind=kind,
            target_span=obj.get("target_span"),
            replacement=obj.get("replacement"),
        )

    def parse_evidence(obj: dict[str, Any], path: str) -> Optional[EvidenceItem]:
        reliability = _parse_enum(Reliability, obj.get("reliability", "unknown"),
                                  f"{path}.reliability", errors)
        stance = _parse_enum(Stance, obj.get("stance", "unassessed"), f"{path}.stance", errors)
        if reliability is None or stance is None:
            return None
        return EvidenceItem(
            query=obj.get("query", ""),
            url=_require(obj, "url", f"{path}.", errors) or "",
            snippet=_require(obj, "snippet", f"{path}.", errors) or "",
            reliability=reliability,
            stance=stance,
            sufficient_alone=bool(obj.get("sufficient_alone", False)),
        )

    def parse_claim(obj: dict[str, Any], path: str) -> Optional[AtomicClaim]:
        category = _parse_enum(Category, obj.get("category", "factual"), f"{path}.category", errors)
        importance = _parse_enum(ImportanceLevel, obj.get("importance", "intermediate"),
                                 f"{path}.importance", errors)
        verdict = _parse_enum(Verdict, obj.get("verdict", "unassessed"), f"{path}.verdict", errors)
        evidence = [parse_evidence(e, f"{path}.evidence[{i}]")
                    for i, e in enumerate(obj.get("evidence", []))]
        edits = [parse_edit(e, f"{path}.edits[{i}]") for i, e in enumerate(obj.get("edits", []))]
        if category is None or importance is None or verdict is None \
                or any(e is None for e in evidence) or any(e is None for e in edits):
            return None
        return AtomicClaim(
            id=_require(obj, "id", f"{path}.", errors) or "",
            text=_require(obj, "text", f"{path}.", errors) or "",
            category=category,
            importance=importance,
            evidence=tuple(evidence),  # type: ignore[arg-type]
            verdict=verdict,
            edits=tuple(edits),  # type: ignore[arg-type]
            revised_text=obj.get("revised_text"),
        )

    def parse_sentence(obj: dict[str, Any], path: str) -> Optional[SentenceUnit]:
        category = _parse_enum(Category, obj.get("category", "factual"), f"{path}.category", errors)
        importance = _parse_enum(ImportanceLevel, obj.get("importance", "intermediate"),
                                 f"{path}.importance", errors)
        claims = [parse_claim(c, f"{path}.claims[{i}]") for i, c in enumerate(obj.get("claims", []))]
        if category is None or importance is None or any(c is None for c in claims):
            return None
        return SentenceUnit(
            id=_require(obj, "id", f"{path}.", errors) or "",
            text=_require(obj, "text", f"{path}.", errors) or "",
            checkworthy=bool(obj.get("checkworthy", category == Category.FACTUAL)),
            category=category,
            importance=importance,
            claims=tuple(claims),  # type: ignore[arg-type]
            revised_text=obj.get("revised_text"),
            deleted=bool(obj.get("deleted", False)),
        )

    doc_id = _require(data, "id", "", errors)
    source = _parse_enum(Source, data.get("source", "other"), "source", errors)
    raw_verdict = data.get("document_verdict")
    document_verdict = None
    if raw_verdict is not None:
        document_verdict = _parse_enum(DocumentVerdict, raw_verdict, "document_verdict", errors)
        if document_verdict is None:
            raise ValidationError(errors)
    sentences = [parse_sentence(s, f"sentences[{i}]") for i, s in enumerate(data.get("sentences", []))]
    if errors or source is None or any(s is None for s in sentences):
        raise ValidationError(errors or ["document: unparseable"])
    return FactcheckDocument(
        id=doc_id,
        question=data.get("question", ""),
        response=data.get("response", ""),
        source=source,
        sentences=tuple(sentences),  # type: ignore[arg-type]
        revised_response=data.get("revised_response"),
        document_verdict=document_verdict,
        schema_version=int(data.get("schema_version", SCHEMA_VERSION)),
    )


def parse_document(text: str) -> FactcheckDocument:
    """Parse one JSON benchmark record; unknown enum strings are rejected."""
    data = json.loads(text)
    if not isinstance(data, dict):
        raise ValidationError(["document: expected a JSON object"])
    return document_from_dict(data)


def write_documents(docs: Iterable[FactcheckDocument], path: str,
                    validate: bool = True) -> int:
    """Write documents as JSON Lines; returns the number written."""
    count = 0
    with open(path, "w", encoding="utf-8") as fh:
        for doc in docs:
            fh.write(serialize_document(doc, validate=validate))
            fh.write("\n")
            count += 1
    return count


def load_documents(path: str) -> list[FactcheckDocument]:
    """Read a benchmark file: JSON Lines, or a single wrapper JSON array."""
    with open(path, "r", encoding="utf-8") as fh:
        content = fh.read()
    stripped = content.lstrip()
    if stripped.startswith("["):
        return [document_from_dict(obj) for obj in json.loads(content)]
    docs = []
    for line in content.splitlines():
        if line.strip():
            docs.append(parse_document(line))
    return docs


# ---------------------------------------------------------------------------
# Dataset-level validation


def validate_dataset(records: list[FactcheckDocument], evidence_k: int = DEFAULT_EVIDENCE_K,
                     strict: bool = False) -> DatasetStats:
    """Count dataset units and enforce cross-record integrity.

    Raises ValidationError on duplicate ids, claims attached to
    non-checkworthy sentences, per-document invariant violations, and (in
    strict mode) when the evidence count is not k x checkworthy-claim count.
    """
    errors: list[str] = []
    seen_doc_ids: set[str] = set()
    seen_unit_ids: set[str] = set()
    documents = sentences = cw_sentences = claims = cw_claims = evidence = 0
    auto_evidence = 0

    for d, doc in enumerate(records):
        prefix = f"[{d}]({doc.id})"
        if doc.id in seen_doc_ids:
            errors.append(f"{prefix}.id: duplicate document id")
        seen_doc_ids.add(doc.id)
        doc_errors = validate_document(doc, strict=strict, evidence_k=evidence_k)
        errors.extend(f"{prefix}.{e}" for e in doc_errors)
        documents += 1
        for s, sentence in enumerate(doc.sentences):
            sentences += 1
            key = f"{doc.id}/{sentence.id}"
            if key in seen_unit_ids:
                errors.append(f"{prefix}.sentences[{s}].id: duplicate sentence id")
            seen_unit_ids.add(key)
            if sentence.checkworthy:
                cw_sentences += 1
            elif sentence.claims:
                errors.append(f"{prefix}.sentences[{s}]: claims on non-checkworthy sentence")
            for c, claim in enumerate(sentence.claims):
                claims += 1
                ckey = f"{doc.id}/{claim.id}"
                if ckey in seen_unit_ids:
                    errors.append(f"{prefix}.sentences[{s}].claims[{c}].id: duplicate claim id")
                seen_unit_ids.add(ckey)
                if claim.checkworthy:
                    cw_claims += 1
                evidence += len(claim.evidence)
                auto_evidence += sum(1 for e in claim.evidence if not e.is_manual)

    # manual evidence may exceed k, so the strict identity holds over
    # automatically collected items only
    if strict and auto_evidence != evidence_k * cw_claims:
        errors.append(
            f"dataset: auto evidence count {auto_evidence} != "
            f"k({evidence_k}) x checkworthy claims ({cw_claims})"
        )
    if errors:
        raise ValidationError(errors)
    return DatasetStats(documents, sentences, cw_sentences, claims, cw_claims, evidence)


def next_unit_id(prefix: str, taken: set[str]) -> str:
    """Smallest `prefix<n>` id not yet in `taken` (annotation UI helper)."""
    n = 1
    while f"{prefix}{n}" in taken:
        n += 1
    return f"{prefix}{n}"


def replace_claim(doc: FactcheckDocument, claim_id: str,
                  new_claim: AtomicClaim) -> FactcheckDocument:
    """Return a copy of `doc` with one claim swapped out."""
    new_sentences = []
    found = False
    for sentence in doc.sentences:
        if any(c.id == claim_id for c in sentence.claims):
            found = True
            new_claims = tuple(new_claim if c.id == claim_id else c for c in sentence.claims)
            sentence = dataclasses.replace(sentence, claims=new_claims)
        new_sentences.append(sentence)
    if not found:
        raise KeyError(f"no claim with id {claim_id!r}")
    return dataclasses.replace(doc, sentences=tuple(new_sentences))
