// Mirrors of the benchmark record schema. Field names match the server's
// JSON exactly (snake_case); the UI never invents values outside these unions.

export type Category = "factual" | "opinion" | "not-a-claim" | "other";
export type ImportanceLevel = "most-important" | "intermediate" | "less-important";
export type Stance =
  | "completely-support"
  | "partially-support"
  | "refute"
  | "irrelevant"
  | "unassessed";
export type Reliability = "reliable" | "unknown" | "unreliable";
export type Verdict = "true" | "false" | "not-enough-evidence" | "unassessed";
export type DocumentVerdict = "factually-correct" | "contains-errors" | "no-checkworthy-claims";
export type EditKind = "delete-claim" | "replace" | "delete-span";

export interface EditOperation {
  kind: EditKind;
  target_span: string | null;
  replacement: string | null;
}

export interface EvidenceItem {
  query: string;
  url: string;
  snippet: string;
  reliability: Reliability;
  stance: Stance;
  sufficient_alone: boolean;
}

export interface AtomicClaim {
  id: string;
  text: string;
  category: Category;
  importance: ImportanceLevel;
  evidence: EvidenceItem[];
  verdict: Verdict;
  edits: EditOperation[];
  revised_text: string | null;
}

export interface SentenceUnit {
  id: string;
  text: string;
  checkworthy: boolean;
  category: Category;
  importance: ImportanceLevel;
  claims: AtomicClaim[];
  revised_text: string | null;
  deleted: boolean;
}

export interface FactcheckDocument {
  id: string;
  source: string;
  question: string;
  response: string;
  sentences: SentenceUnit[];
  revised_response: string | null;
  document_verdict: DocumentVerdict | null;
  schema_version: number;
}

export type Step = "step1-decompose-cw" | "step2-stance-correct" | "step3-merge-revise";
export type SessionStatus = "in-progress" | "submitted" | "consolidated" | "discarded";

export interface AnnotationSession {
  session_id: string;
  document_id: string;
  annotator_id: string;
  step: Step;
  status: SessionStatus;
  version: number;
  draft: FactcheckDocument;
}

export interface Disagreement {
  field_path: string;
  value_a: unknown;
  value_b: unknown;
  resolved_value: unknown;
  resolver: string;
}

export interface ServiceConfig {
  api_base: string;
  steps: Step[];
  stances: Stance[];
  reliabilities: Reliability[];
  categories: Category[];
  importance_levels: ImportanceLevel[];
  verdicts: Verdict[];
  evidence_k: number;
  stopwords: string[];
  aggregation_weights: {
    reliable: number;
    unknown: number;
    unreliable: number;
    partial_support_factor: number;
  };
}

export interface DocumentListEntry {
  document_id: string;
  question: string;
  current_step: Step | null;
  consolidated_steps: Step[];
  discarded: boolean;
}

export interface ApiError {
  code: string;
  message: string;
  field_paths: string[];
}

export function makeEvidence(partial: Partial<EvidenceItem> & { snippet: string }): EvidenceItem {
  return {
    query: "",
    url: "",
    reliability: "unknown",
    stance: "unassessed",
    sufficient_alone: false,
    ...partial,
  };
}
