"""Annotation workflow: sessions, two-annotator consolidation, export.

Each document moves through three serial steps (decompose/checkworthiness,
stance/correction, merge/revision). Per step, at most two annotators draft
independently, blind to each other; once both submit, their field-path
disagreements are resolved into one consensus document, which seeds the next
step. Irreconcilable documents are discarded and excluded from export.
"""
from __future__ import annotations

import dataclasses
import re
import uuid
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional

from ..model import (
    DEFAULT_EVIDENCE_K,
    EvidenceItem,
    FactcheckDocument,
    document_from_dict,
    document_to_dict,
    validate_document,
)


class WorkflowError(Exception):
    def __init__(self, code: str, message: str, field_paths: Optional[list[str]] = None):
        super().__init__(message)
        self.code = code
        self.field_paths = field_paths or []


class Step(str, Enum):
    STEP1 = "step1-decompose-cw"
    STEP2 = "step2-stance-correct"
    STEP3 = "step3-merge-revise"


STEP_ORDER = (Step.STEP1, Step.STEP2, Step.STEP3)


class SessionStatus(str, Enum):
    IN_PROGRESS = "in-progress"
    SUBMITTED = "submitted"
    CONSOLIDATED = "consolidated"
    DISCARDED = "discarded"


@dataclass
class AnnotationSession:
    session_id: str
    document_id: str
    annotator_id: str
    step: Step
    draft: FactcheckDocument
    status: SessionStatus = SessionStatus.IN_PROGRESS
    version: int = 0

    def as_dict(self) -> dict[str, Any]:
        return {
            "session_id": self.session_id,
            "document_id": self.document_id,
            "annotator_id": self.annotator_id,
            "step": self.step.value,
            "status": self.status.value,
            "version": self.version,
            "draft": document_to_dict(self.draft),
        }


@dataclass
class Disagreement:
    field_path: str
    value_a: Any
    value_b: Any
    resolved_value: Any = None
    resolver: str = ""

    def as_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)


@dataclass
class ConsolidationRecord:
    document_id: str
    step: Step
    annotator_a: str
    annotator_b: str
    disagreements: list[Disagreement]
    outcome: str  # consensus | discarded
    third_rater: Optional[str] = None

    def as_dict(self) -> dict[str, Any]:
        return {
            "document_id": self.document_id,
            "step": self.step.value,
            "annotator_a": self.annotator_a,
            "annotator_b": self.annotator_b,
            "disagreements": [d.as_dict() for d in self.disagreements],
            "outcome": self.outcome,
            "third_rater": self.third_rater,
        }


@dataclass
class DocumentState:
    document: FactcheckDocument
    consolidated_steps: list[Step] = field(default_factory=list)
    discarded: bool = False

    def current_step(self) -> Optional[Step]:
        for step in STEP_ORDER:
            if step not in self.consolidated_steps:
                return step
        return None

    def complete(self) -> bool:
        return len(self.consolidated_steps) == len(STEP_ORDER)


# ---------------------------------------------------------------------------
# Field-path diffing


def diff_paths(a: Any, b: Any, prefix: str = "") -> list[tuple[str, Any, Any]]:
    """Leaf-level differences between two JSON-like values.

    List length mismatches are reported as one whole-list disagreement at the
    list's path, so a resolution can pick either side's list wholesale.
    """
    diffs: list[tuple[str, Any, Any]] = []
    if isinstance(a, dict) and isinstance(b, dict):
        for key in sorted(set(a) | set(b)):
            path = f"{prefix}.{key}" if prefix else key
            if key not in a or key not in b:
                diffs.append((path, a.get(key), b.get(key)))
            else:
                diffs.extend(diff_paths(a[key], b[key], path))
    elif isinstance(a, list) and isinstance(b, list):
        if len(a) != len(b):
            diffs.append((prefix, a, b))
        else:
            for i, (item_a, item_b) in enumerate(zip(a, b)):
                diffs.extend(diff_paths(item_a, item_b, f"{prefix}[{i}]"))
    elif a != b:
        diffs.append((prefix, a, b))
    return diffs


_PATH_TOKEN = re.compile(r"([^.\[\]]+)|\[(\d+)\]")


def set_path(data: Any, path: str, value: Any) -> None:
    """Assign `value` at a diff-style field path inside nested dicts/lists."""
    tokens: list[Any] = []
    for match in _PATH_TOKEN.finditer(path):
        key, index = match.groups()
        tokens.append(int(index) if index is not None else key)
    target = data
    for token in tokens[:-1]:
        target = target[token]
    target[tokens[-1]] = value


# ---------------------------------------------------------------------------
# Workflow engine


class AnnotationWorkflow:
    """In-memory workflow state machine; persistence is layered on top."""

    def __init__(self) -> None:
        self.documents: dict[str, DocumentState] = {}
        self.sessions: dict[str, AnnotationSession] = {}
        self.consolidations: list[ConsolidationRecord] = []

    # -- documents -------------------------------------------------------------

    def import_document(self, doc: FactcheckDocument) -> str:
        if doc.id in self.documents:
            raise WorkflowError("duplicate-document", f"document {doc.id!r} already imported")
        errors = validate_document(doc)
        if errors:
            raise WorkflowError("invalid-document", "document fails validation", errors)
        self.documents[doc.id] = DocumentState(document=doc)
        return doc.id

    def get_document(self, document_id: str) -> DocumentState:
        state = self.documents.get(document_id)
        if state is None:
            raise WorkflowError("unknown-document", f"no document {document_id!r}")
        return state

    # -- sessions ----------------------------------------------------------------

    def _step_sessions(self, document_id: str, step: Step) -> list[AnnotationSession]:
        return [s for s in self.sessions.values()
                if s.document_id == document_id and s.step == step
                and s.status != SessionStatus.DISCARDED]

    def create_session(self, document_id: str, annotator_id: str) -> AnnotationSession:
        """Open a draft for the document's current step, pre-filled from the
        latest consolidated state (automatic decomposition and evidence come
        along with it), so annotators edit rather than author from scratch.
        """
        state = self.get_document(document_id)
        if state.discarded:
            raise WorkflowError("document-discarded", f"document {document_id!r} was discarded")
        step = state.current_step()
        if step is None:
            raise WorkflowError("workflow-complete", "all steps already consolidated")
        existing = self._step_sessions(document_id, step)
        if any(s.annotator_id == annotator_id for s in existing):
            raise WorkflowError("duplicate-annotator",
                                f"annotator {annotator_id!r} already has a session for {step.value}")
        if len(existing) >= 2:
            raise WorkflowError("annotator-limit",
                                "two annotators already active; a third rater joins only "
                                "through consolidation")
        session = AnnotationSession(
            session_id=uuid.uuid4().hex[:12],
            document_id=document_id,
            annotator_id=annotator_id,
            step=step,
            draft=state.document,
        )
        self.sessions[session.session_id] = session
        return session

    def get_session(self, session_id: str, annotator_id: Optional[str] = None
                    ) -> AnnotationSession:
        session = self.sessions.get(session_id)
        if session is None:
            raise WorkflowError("unknown-session", f"no session {session_id!r}")
        if annotator_id is not None and session.annotator_id != annotator_id:
            # pre-consolidation blinding: drafts are private to their owner
            raise WorkflowError("forbidden", "session belongs to another annotator")
        return session

    def update_draft(self, session_id: str, draft_data: dict[str, Any],
                     version: Optional[int] = None,
                     annotator_id: Optional[str] = None) -> AnnotationSession:
        session = self.get_session(session_id, annotator_id)
        if session.status != SessionStatus.IN_PROGRESS:
            raise WorkflowError("already-submitted", "draft is frozen after submission")
        if version is not None and version != session.version:
            raise WorkflowError("version-conflict",
                                f"draft version {version} != current {session.version}")
        draft = document_from_dict(draft_data)
        if draft.id != session.document_id:
            raise WorkflowError("document-mismatch", "draft id differs from session document")
        errors = validate_document(draft)
        if errors:
            raise WorkflowError("invalid-draft", "draft fails validation", errors)
        session.draft = draft
        session.version += 1
        return session

    def submit(self, session_id: str, annotator_id: Optional[str] = None) -> AnnotationSession:
        session = self.get_session(session_id, annotator_id)
        if session.status != SessionStatus.IN_PROGRESS:
            raise WorkflowError("already-submitted", "session already submitted")
        session.status = SessionStatus.SUBMITTED
        return session

    def add_manual_evidence(self, session_id: str, claim_id: str, item: EvidenceItem,
                            annotator_id: Optional[str] = None,
                            evidence_k: int = DEFAULT_EVIDENCE_K) -> AnnotationSession:
        """Append annotator-collected evidence to a claim in a step-2 draft.

        The k-item cap applies to automatically collected evidence only;
        manual items may exceed it (controversial topics warrant more).
        """
        session = self.get_session(session_id, annotator_id)
        if session.step != Step.STEP2:
            raise WorkflowError("wrong-step", "manual evidence is added during step 2")
        if session.status != SessionStatus.IN_PROGRESS:
            raise WorkflowError("already-submitted", "draft is frozen after submission")
        if not item.snippet.strip():
            raise WorkflowError("invalid-evidence", "evidence snippet must be non-empty",
                                ["snippet"])
        if not item.url or not item.url.strip():
            item = dataclasses.replace(item, url="manual:unsourced")
        elif not item.url.startswith("manual:") and "://" not in item.url:
            item = dataclasses.replace(item, url=f"manual:{item.url}")

        for sentence in session.draft.sentences:
            for claim in sentence.claims:
                if claim.id == claim_id:
                    from ..model import replace_claim

                    new_claim = dataclasses.replace(
                        claim, evidence=claim.evidence + (item,))
                    session.draft = replace_claim(session.draft, claim_id, new_claim)
                    session.version += 1
                    return session
        raise WorkflowError("unknown-claim", f"no claim {claim_id!r} in draft")

    # -- consolidation -----------------------------------------------------------

    def compute_disagreements(self, document_id: str, step: Step) -> list[Disagreement]:
        sessions = self._step_sessions(document_id, step)
        submitted = [s for s in sessions if s.status in
                     (SessionStatus.SUBMITTED, SessionStatus.CONSOLIDATED)]
        if len(submitted) < 2:
            raise WorkflowError("not-submitted",
                                "both annotators must submit before consolidation")
        a, b = sorted(submitted, key=lambda s: s.annotator_id)[:2]
        return [
            Disagreement(field_path=path, value_a=va, value_b=vb)
            for path, va, vb in diff_paths(document_to_dict(a.draft),
                                           document_to_dict(b.draft))
        ]

    def consolidate(self, document_id: str, step: Step,
                    resolutions: dict[str, Any], resolver: str,
                    third_rater: Optional[str] = None,
                    discard: bool = False) -> ConsolidationRecord:
        """Resolve all disagreements into a consensus document, or discard.

        `resolutions` maps each disagreeing field path to its resolved value;
        identical drafts consolidate with an empty map. Consensus writes the
        resolved document and unlocks the next step.
        """
        state = self.get_document(document_id)
        if state.discarded:
            raise WorkflowError("document-discarded", "document already discarded")
        if step != state.current_step():
            raise WorkflowError("step-order",
                                f"current step is {state.current_step()}, not {step.value}")
        disagreements = self.compute_disagreements(document_id, step)
        sessions = sorted(self._step_sessions(document_id, step),
                          key=lambda s: s.annotator_id)
        annotator_a, annotator_b = sessions[0].annotator_id, sessions[1].annotator_id

        if discard:
            record = ConsolidationRecord(
                document_id=document_id, step=step,
                annotator_a=annotator_a, annotator_b=annotator_b,
                disagreements=disagreements, outcome="discarded", third_rater=third_rater)
            state.discarded = True
            for session in sessions:
                session.status = SessionStatus.DISCARDED
            self.consolidations.append(record)
            return record

        missing = [d.field_path for d in disagreements if d.field_path not in resolutions]
        if missing:
            raise WorkflowError("missing-resolution",
                                "every disagreement needs a resolved value", missing)

        resolved_data = document_to_dict(sessions[0].draft)
        for disagreement in disagreements:
            disagreement.resolved_value = resolutions[disagreement.field_path]
            disagreement.resolver = resolver
            set_path(resolved_data, disagreement.field_path, disagreement.resolved_value)
        resolved = document_from_dict(resolved_data)
        errors = validate_document(resolved)
        if errors:
            raise WorkflowError("invalid-document", "resolved document fails validation", errors)

        state.document = resolved
        state.consolidated_steps.append(step)
        for session in sessions:
            session.status = SessionStatus.CONSOLIDATED
        record = ConsolidationRecord(
            document_id=document_id, step=step,
            annotator_a=annotator_a, annotator_b=annotator_b,
            disagreements=disagreements, outcome="consensus", third_rater=third_rater)
        self.consolidations.append(record)
        return record

    # -- export ---------------------------------------------------------------

    def exportable_documents(self, require_complete: bool = True) -> list[FactcheckDocument]:
        docs = []
        for state in self.documents.values():
            if state.discarded:
                continue
            if require_complete and not state.complete():
                continue
            docs.append(state.document)
        return docs

    def manual_evidence_buckets(self) -> dict[str, int]:
        """How many checkworthy claims were decidable with automatic evidence
        alone versus needing manual additions (over complete documents)."""
        auto_only = needed_manual = 0
        for doc in self.exportable_documents():
            for claim in doc.checkworthy_claims():
                if any(item.is_manual for item in claim.evidence):
                    needed_manual += 1
                else:
                    auto_only += 1
        return {"auto-evidence-sufficient": auto_only, "needed-manual-evidence": needed_manual}
