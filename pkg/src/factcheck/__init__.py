"""Claim-level detection and correction of factual errors in LLM responses.

The pipeline decomposes a response into atomic claims, classifies their
checkworthiness, retrieves and re-ranks web evidence, judges stances,
aggregates per-claim verdicts, and merges corrections back into a revised
response. A benchmark harness scores any fact-checker subtask by subtask,
and an annotation service supports two-annotator labelling with
consolidation.
"""

from .model import (
    AtomicClaim,
    Category,
    DatasetStats,
    DocumentVerdict,
    EditKind,
    EditOperation,
    EvidenceItem,
    FactcheckDocument,
    ImportanceLevel,
    Reliability,
    SentenceUnit,
    Source,
    Stance,
    ValidationError,
    Verdict,
    load_documents,
    parse_document,
    serialize_document,
    validate_dataset,
    validate_document,
    write_documents,
)
from .pipeline import FactcheckPipeline, PipelineAdapter, PipelineConfig

__version__ = "0.1.0"

__all__ = [
    "AtomicClaim",
    "Category",
    "DatasetStats",
    "DocumentVerdict",
    "EditKind",
    "EditOperation",
    "EvidenceItem",
    "FactcheckDocument",
    "FactcheckPipeline",
    "ImportanceLevel",
    "PipelineAdapter",
    "PipelineConfig",
    "Reliability",
    "SentenceUnit",
    "Source",
    "Stance",
    "ValidationError",
    "Verdict",
    "load_documents",
    "parse_document",
    "serialize_document",
    "validate_dataset",
    "validate_document",
    "write_documents",
    "__version__",
]
