"""HTTP API for the annotation workflow, plus static hosting for the UI.

All payloads use the benchmark schema's field names; errors come back as
{code, message, field_paths}. Annotators authenticate with bearer tokens
mapped to annotator ids in the service config; without a token map, the
token string itself is the annotator id (development mode).
"""
from __future__ import annotations

from pathlib import Path
from typing import Any, Optional

from fastapi import Depends, FastAPI, Header, Query, Request
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from ..model import (
    EvidenceItem,
    Reliability,
    Stance,
    ValidationError,
    serialize_document,
    validate_dataset,
)
from .workflow import AnnotationWorkflow, Step, WorkflowError

_STATUS_BY_CODE = {
    "unknown-document": 404,
    "unknown-session": 404,
    "unknown-claim": 404,
    "forbidden": 403,
    "unauthorized": 401,
    "duplicate-annotator": 409,
    "annotator-limit": 409,
    "already-submitted": 409,
    "version-conflict": 409,
    "step-order": 409,
    "workflow-complete": 409,
    "not-submitted": 409,
    "document-discarded": 409,
    "duplicate-document": 409,
}


class CreateSessionRequest(BaseModel):
    document_id: str


class DraftUpdateRequest(BaseModel):
    draft: dict[str, Any]
    version: Optional[int] = None


class ConsolidateRequest(BaseModel):
    step: str
    resolutions: dict[str, Any] = {}
    resolver: str = ""
    third_rater: Optional[str] = None
    discard: bool = False


class EvidenceRequest(BaseModel):
    query: str = ""
    url: str = ""
    snippet: str
    reliability: str = "unknown"
    stance: str = "unassessed"
    sufficient_alone: bool = False


class ImportDocumentRequest(BaseModel):
    document: dict[str, Any]


def create_app(workflow: Optional[AnnotationWorkflow] = None,
               tokens: Optional[dict[str, str]] = None,
               static_dir: Optional[str | Path] = None,
               evidence_k: int = 5) -> FastAPI:
    app = FastAPI(title="factcheck annotation service")
    wf = workflow if workflow is not None else AnnotationWorkflow()
    app.state.workflow = wf

    def annotator_id(authorization: Optional[str] = Header(default=None)) -> str:
        if not authorization or not authorization.startswith("Bearer "):
            raise WorkflowError("unauthorized", "missing bearer token")
        token = authorization.removeprefix("Bearer ").strip()
        if tokens is None:
            return token
        if token not in tokens:
            raise WorkflowError("unauthorized", "unknown token")
        return tokens[token]

    @app.exception_handler(WorkflowError)
    async def workflow_error_handler(request: Request, exc: WorkflowError):
        return JSONResponse(
            status_code=_STATUS_BY_CODE.get(exc.code, 400),
            content={"code": exc.code, "message": str(exc), "field_paths": exc.field_paths},
        )

    @app.exception_handler(ValidationError)
    async def validation_error_handler(request: Request, exc: ValidationError):
        return JSONResponse(
            status_code=400,
            content={"code": "invalid-document", "message": str(exc),
                     "field_paths": exc.field_paths},
        )

    # -- config discovery -------------------------------------------------------

    @app.get("/config")
    def get_config():
        from .. import prompting
        from ..model import Category, ImportanceLevel, Verdict
        from ..verification import AggregationWeights

        weights = AggregationWeights()
        return {
            "api_base": "",
            "steps": [s.value for s in Step],
            "stances": [s.value for s in Stance],
            "reliabilities": [r.value for r in Reliability],
            "categories": [c.value for c in Category],
            "importance_levels": [i.value for i in ImportanceLevel],
            "verdicts": [v.value for v in Verdict],
            "evidence_k": evidence_k,
            "stopwords": sorted(prompting.stopwords()),
            "aggregation_weights": {
                "reliable": weights.reliable,
                "unknown": weights.unknown,
                "unreliable": weights.unreliable,
                "partial_support_factor": weights.partial_support_factor,
            },
        }

    # -- documents ---------------------------------------------------------------

    @app.post("/documents", status_code=201)
    def import_document(body: ImportDocumentRequest, annotator: str = Depends(annotator_id)):
        from ..model import document_from_dict

        document_id = wf.import_document(document_from_dict(body.document))
        return {"document_id": document_id}

    @app.get("/documents")
    def list_documents(annotator: str = Depends(annotator_id)):
        return [
            {
                "document_id": doc_id,
                "question": state.document.question,
                "current_step": state.current_step().value if state.current_step() else None,
                "consolidated_steps": [s.value for s in state.consolidated_steps],
                "discarded": state.discarded,
            }
            for doc_id, state in sorted(wf.documents.items())
        ]

    @app.get("/documents/{document_id}")
    def get_document(document_id: str, annotator: str = Depends(annotator_id)):
        state = wf.get_document(document_id)
        from ..model import document_to_dict

        return {
            "document": document_to_dict(state.document),
            "current_step": state.current_step().value if state.current_step() else None,
            "consolidated_steps": [s.value for s in state.consolidated_steps],
            "discarded": state.discarded,
        }

    @app.get("/documents/{document_id}/disagreements")
    def get_disagreements(document_id: str, step: str = Query(...),
                          annotator: str = Depends(annotator_id)):
        disagreements = wf.compute_disagreements(document_id, Step(step))
        return {"document_id": document_id, "step": step,
                "disagreements": [d.as_dict() for d in disagreements]}

    @app.post("/documents/{document_id}/consolidate")
    def consolidate(document_id: str, body: ConsolidateRequest,
                    annotator: str = Depends(annotator_id)):
        record = wf.consolidate(
            document_id, Step(body.step), body.resolutions,
            resolver=body.resolver or annotator,
            third_rater=body.third_rater, discard=body.discard)
        return record.as_dict()

    # -- sessions -----------------------------------------------------------------

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionRequest, annotator: str = Depends(annotator_id)):
        return wf.create_session(body.document_id, annotator).as_dict()

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str, annotator: str = Depends(annotator_id)):
        return wf.get_session(session_id, annotator).as_dict()

    @app.put("/sessions/{session_id}/draft")
    def update_draft(session_id: str, body: DraftUpdateRequest,
                     annotator: str = Depends(annotator_id)):
        session = wf.update_draft(session_id, body.draft, body.version, annotator)
        return {"session_id": session.session_id, "version": session.version}

    @app.post("/sessions/{session_id}/submit")
    def submit(session_id: str, annotator: str = Depends(annotator_id)):
        session = wf.submit(session_id, annotator)
        return {"session_id": session.session_id, "status": session.status.value}

    @app.post("/sessions/{session_id}/claims/{claim_id}/evidence")
    def add_evidence(session_id: str, claim_id: str, body: EvidenceRequest,
                     annotator: str = Depends(annotator_id)):
        item = EvidenceItem(
            query=body.query,
            url=body.url,
            snippet=body.snippet,
            reliability=Reliability(body.reliability),
            stance=Stance(body.stance),
            sufficient_alone=body.sufficient_alone,
        )
        session = wf.add_manual_evidence(session_id, claim_id, item, annotator,
                                         evidence_k=evidence_k)
        return session.as_dict()

    # -- export -------------------------------------------------------------------

    @app.get("/export")
    def export(annotator: str = Depends(annotator_id),
               strict: bool = Query(default=True)):
        docs = wf.exportable_documents()
        if strict and docs:
            validate_dataset(docs, evidence_k=evidence_k, strict=True)
        lines = [serialize_document(d) for d in docs]
        return PlainTextResponse("\n".join(lines) + ("\n" if lines else ""),
                                 media_type="application/jsonl")

    @app.get("/stats/manual-evidence")
    def manual_evidence_stats(annotator: str = Depends(annotator_id)):
        return wf.manual_evidence_buckets()

    if static_dir is not None:
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app
