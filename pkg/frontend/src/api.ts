// Typed client for the annotation service. All endpoints are the documented
// public API; errors surface as ApiRequestError carrying {code, field_paths}.

import type {
  AnnotationSession,
  Disagreement,
  DocumentListEntry,
  EvidenceItem,
  FactcheckDocument,
  ServiceConfig,
  Step,
} from "./types";

export class ApiRequestError extends Error {
  code: string;
  status: number;
  fieldPaths: string[];

  constructor(status: number, code: string, message: string, fieldPaths: string[] = []) {
    super(message);
    this.status = status;
    this.code = code;
    this.fieldPaths = fieldPaths;
  }
}

export class ApiClient {
  baseUrl: string;
  token: string;

  constructor(baseUrl: string, token: string) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.token = token;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const res = await fetch(`${this.baseUrl}${path}`, {
      method,
      headers: {
        Authorization: `Bearer ${this.token}`,
        ...(body !== undefined ? { "Content-Type": "application/json" } : {}),
      },
      body: body !== undefined ? JSON.stringify(body) : undefined,
    });
    const text = await res.text();
    if (!res.ok) {
      let code = `http-${res.status}`;
      let message = text.slice(0, 300);
      let fieldPaths: string[] = [];
      try {
        const parsed = JSON.parse(text);
        code = parsed.code ?? code;
        message = parsed.message ?? message;
        fieldPaths = parsed.field_paths ?? [];
      } catch {
        // non-JSON error body; keep the raw text
      }
      throw new ApiRequestError(res.status, code, message, fieldPaths);
    }
    return (text ? JSON.parse(text) : undefined) as T;
  }

  getConfig(): Promise<ServiceConfig> {
    return this.request("GET", "/config");
  }

  listDocuments(): Promise<DocumentListEntry[]> {
    return this.request("GET", "/documents");
  }

  importDocument(document: FactcheckDocument): Promise<{ document_id: string }> {
    return this.request("POST", "/documents", { document });
  }

  getDocument(documentId: string): Promise<{
    document: FactcheckDocument;
    current_step: Step | null;
    consolidated_steps: Step[];
    discarded: boolean;
  }> {
    return this.request("GET", `/documents/${encodeURIComponent(documentId)}`);
  }

  createSession(documentId: string): Promise<AnnotationSession> {
    return this.request("POST", "/sessions", { document_id: documentId });
  }

  getSession(sessionId: string): Promise<AnnotationSession> {
    return this.request("GET", `/sessions/${encodeURIComponent(sessionId)}`);
  }

  saveDraft(sessionId: string, draft: FactcheckDocument, version: number):
      Promise<{ session_id: string; version: number }> {
    return this.request("PUT", `/sessions/${encodeURIComponent(sessionId)}/draft`,
      { draft, version });
  }

  submit(sessionId: string): Promise<{ session_id: string; status: string }> {
    return this.request("POST", `/sessions/${encodeURIComponent(sessionId)}/submit`);
  }

  addManualEvidence(sessionId: string, claimId: string, item: EvidenceItem):
      Promise<AnnotationSession> {
    return this.request(
      "POST",
      `/sessions/${encodeURIComponent(sessionId)}/claims/${encodeURIComponent(claimId)}/evidence`,
      item);
  }

  getDisagreements(documentId: string, step: Step):
      Promise<{ document_id: string; step: Step; disagreements: Disagreement[] }> {
    return this.request(
      "GET",
      `/documents/${encodeURIComponent(documentId)}/disagreements?step=${encodeURIComponent(step)}`);
  }

  consolidate(documentId: string, step: Step, resolutions: Record<string, unknown>,
              options: { resolver?: string; thirdRater?: string; discard?: boolean } = {}):
      Promise<{ outcome: string }> {
    return this.request("POST", `/documents/${encodeURIComponent(documentId)}/consolidate`, {
      step,
      resolutions,
      resolver: options.resolver ?? "",
      third_rater: options.thirdRater ?? null,
      discard: options.discard ?? false,
    });
  }

  export(): Promise<string> {
    return fetch(`${this.baseUrl}/export`, {
      headers: { Authorization: `Bearer ${this.token}` },
    }).then(async (res) => {
      if (!res.ok) throw new ApiRequestError(res.status, `http-${res.status}`, await res.text());
      return res.text();
    });
  }
}
