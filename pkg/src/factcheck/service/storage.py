"""File-backed persistence for the annotation workflow.

Write-through store: every mutation lands on disk before the call returns,
serialized through one lock (single-writer queue); reads serve the in-memory
snapshot. Restarting the service reloads the full state.
"""
from __future__ import annotations

import json
import threading
from pathlib import Path
from typing import Any, Optional

from ..model import EvidenceItem, FactcheckDocument, document_from_dict, document_to_dict
from .workflow import (
    AnnotationSession,
    AnnotationWorkflow,
    ConsolidationRecord,
    DocumentState,
    SessionStatus,
    Step,
)


class FileBackedWorkflow(AnnotationWorkflow):
    def __init__(self, data_dir: str | Path):
        super().__init__()
        self.data_dir = Path(data_dir)
        self._documents_dir = self.data_dir / "documents"
        self._sessions_dir = self.data_dir / "sessions"
        self._consolidations_path = self.data_dir / "consolidations.jsonl"
        self._documents_dir.mkdir(parents=True, exist_ok=True)
        self._sessions_dir.mkdir(parents=True, exist_ok=True)
        self._lock = threading.RLock()
        self._load()

    # -- persistence helpers -----------------------------------------------------

    def _persist_document(self, document_id: str) -> None:
        state = self.documents[document_id]
        payload = {
            "document": document_to_dict(state.document),
            "consolidated_steps": [s.value for s in state.consolidated_steps],
            "discarded": state.discarded,
        }
        path = self._documents_dir / f"{document_id}.json"
        path.write_text(json.dumps(payload, ensure_ascii=False, indent=2), encoding="utf-8")

    def _persist_session(self, session: AnnotationSession) -> None:
        path = self._sessions_dir / f"{session.session_id}.json"
        path.write_text(json.dumps(session.as_dict(), ensure_ascii=False, indent=2),
                        encoding="utf-8")

    def _append_consolidation(self, record: ConsolidationRecord) -> None:
        with open(self._consolidations_path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(record.as_dict(), ensure_ascii=False) + "\n")

    def _load(self) -> None:
        for path in sorted(self._documents_dir.glob("*.json")):
            payload = json.loads(path.read_text(encoding="utf-8"))
            state = DocumentState(
                document=document_from_dict(payload["document"]),
                consolidated_steps=[Step(s) for s in payload["consolidated_steps"]],
                discarded=payload["discarded"],
            )
            self.documents[state.document.id] = state
        for path in sorted(self._sessions_dir.glob("*.json")):
            payload = json.loads(path.read_text(encoding="utf-8"))
            session = AnnotationSession(
                session_id=payload["session_id"],
                document_id=payload["document_id"],
                annotator_id=payload["annotator_id"],
                step=Step(payload["step"]),
                draft=document_from_dict(payload["draft"]),
                status=SessionStatus(payload["status"]),
                version=payload["version"],
            )
            self.sessions[session.session_id] = session

    # -- locked, persisted mutations ---------------------------------------------

    def import_document(self, doc: FactcheckDocument) -> str:
        with self._lock:
            document_id = super().import_document(doc)
            self._persist_document(document_id)
            return document_id

    def create_session(self, document_id: str, annotator_id: str) -> AnnotationSession:
        with self._lock:
            session = super().create_session(document_id, annotator_id)
            self._persist_session(session)
            return session

    def update_draft(self, session_id: str, draft_data: dict[str, Any],
                     version: Optional[int] = None,
                     annotator_id: Optional[str] = None) -> AnnotationSession:
        with self._lock:
            session = super().update_draft(session_id, draft_data, version, annotator_id)
            self._persist_session(session)
            return session

    def submit(self, session_id: str, annotator_id: Optional[str] = None) -> AnnotationSession:
        with self._lock:
            session = super().submit(session_id, annotator_id)
            self._persist_session(session)
            return session

    def add_manual_evidence(self, session_id: str, claim_id: str, item: EvidenceItem,
                            annotator_id: Optional[str] = None,
                            evidence_k: int = 5) -> AnnotationSession:
        with self._lock:
            session = super().add_manual_evidence(session_id, claim_id, item,
                                                  annotator_id, evidence_k)
            self._persist_session(session)
            return session

    def consolidate(self, document_id: str, step: Step, resolutions: dict[str, Any],
                    resolver: str, third_rater: Optional[str] = None,
                    discard: bool = False) -> ConsolidationRecord:
        with self._lock:
            record = super().consolidate(document_id, step, resolutions, resolver,
                                         third_rater, discard)
            self._persist_document(document_id)
            for session in self.sessions.values():
                if session.document_id == document_id and session.step == step:
                    self._persist_session(session)
            self._append_consolidation(record)
            return record
