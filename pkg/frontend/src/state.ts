// Session state: a mirror of the server session plus local dirty edits.
// Saves are optimistic against a version counter; a conflict triggers the
// reload-and-merge prompt instead of silently clobbering the other tab.

import { ApiClient, ApiRequestError } from "./api";
import type { AnnotationSession, FactcheckDocument } from "./types";

export type ConflictResolution = "reload" | "keep-editing";

export interface SessionStoreOptions {
  /** Called on a version conflict; decide whether to reload the server copy. */
  onConflict?: (store: SessionStore) => Promise<ConflictResolution> | ConflictResolution;
  onChange?: (store: SessionStore) => void;
}

export class SessionStore {
  session: AnnotationSession;
  dirty = false;
  pendingRequests = 0;
  lastError: string | null = null;

  private api: ApiClient;
  private options: SessionStoreOptions;

  constructor(api: ApiClient, session: AnnotationSession, options: SessionStoreOptions = {}) {
    this.api = api;
    this.session = session;
    this.options = options;
  }

  get draft(): FactcheckDocument {
    return this.session.draft;
  }

  private notify(): void {
    this.options.onChange?.(this);
  }

  /** Mutate the draft in place through `fn` and mark the store dirty. */
  edit(fn: (draft: FactcheckDocument) => void): void {
    fn(this.session.draft);
    this.dirty = true;
    this.notify();
  }

  private async track<T>(work: Promise<T>): Promise<T> {
    this.pendingRequests++;
    this.notify();
    try {
      return await work;
    } finally {
      this.pendingRequests--;
      this.notify();
    }
  }

  /** Save the draft; dirty resets to false only after the server accepted it. */
  async save(): Promise<boolean> {
    this.lastError = null;
    try {
      const result = await this.track(
        this.api.saveDraft(this.session.session_id, this.session.draft, this.session.version));
      this.session.version = result.version;
      this.dirty = false;
      this.notify();
      return true;
    } catch (error) {
      if (error instanceof ApiRequestError && error.code === "version-conflict") {
        const resolution = await (this.options.onConflict?.(this) ?? "reload");
        if (resolution === "reload") {
          await this.reload();
        }
        return false;
      }
      this.lastError = error instanceof Error ? error.message : String(error);
      this.notify();
      return false;
    }
  }

  async reload(): Promise<void> {
    this.session = await this.track(this.api.getSession(this.session.session_id));
    this.dirty = false;
    this.notify();
  }

  async submit(): Promise<boolean> {
    if (this.dirty) {
      const saved = await this.save();
      if (!saved) return false;
    }
    this.lastError = null;
    try {
      await this.track(this.api.submit(this.session.session_id));
      this.session.status = "submitted";
      this.notify();
      return true;
    } catch (error) {
      this.lastError = error instanceof Error ? error.message : String(error);
      this.notify();
      return false;
    }
  }

  async addManualEvidence(claimId: string, snippet: string, query: string,
                          url: string): Promise<boolean> {
    // the server returns a fresh draft, so local edits must land first
    if (this.dirty) {
      const saved = await this.save();
      if (!saved) return false;
    }
    this.lastError = null;
    try {
      const session = await this.track(this.api.addManualEvidence(
        this.session.session_id, claimId,
        { query, url, snippet, reliability: "unknown", stance: "unassessed", sufficient_alone: false }));
      this.session = session;
      this.notify();
      return true;
    } catch (error) {
      this.lastError = error instanceof Error ? error.message : String(error);
      this.notify();
      return false;
    }
  }
}

export async function openSession(api: ApiClient, documentId: string,
                                  options: SessionStoreOptions = {}): Promise<SessionStore> {
  const session = await api.createSession(documentId);
  return new SessionStore(api, session, options);
}
