import { describe, expect, it } from "vitest";

import { ApiRequestError } from "../src/api";
import { SessionStore } from "../src/state";
import type { AnnotationSession, FactcheckDocument } from "../src/types";

function draftFixture(): FactcheckDocument {
  return {
    id: "d1", source: "other", question: "q", response: "r",
    sentences: [], revised_response: null, document_verdict: null, schema_version: 1,
  };
}

function sessionFixture(): AnnotationSession {
  return {
    session_id: "sess1", document_id: "d1", annotator_id: "a",
    step: "step1-decompose-cw", status: "in-progress", version: 0,
    draft: draftFixture(),
  };
}

class FakeApi {
  saves = 0;
  failWith: ApiRequestError | null = null;
  serverSession = sessionFixture();

  async saveDraft(_id: string, _draft: FactcheckDocument, version: number) {
    if (this.failWith) throw this.failWith;
    this.saves++;
    return { session_id: "sess1", version: version + 1 };
  }

  async getSession() {
    return structuredClone(this.serverSession);
  }

  async submit() {
    return { session_id: "sess1", status: "submitted" };
  }

  async addManualEvidence() {
    const session = structuredClone(this.serverSession);
    session.version = 5;
    return session;
  }
}

describe("SessionStore", () => {
  it("dirty resets only after a successful save", async () => {
    const api = new FakeApi();
    const store = new SessionStore(api as never, sessionFixture());
    expect(store.dirty).toBe(false);
    store.edit((draft) => { draft.revised_response = "x"; });
    expect(store.dirty).toBe(true);
    expect(await store.save()).toBe(true);
    expect(store.dirty).toBe(false);
    expect(store.session.version).toBe(1);
  });

  it("failed save keeps the dirty flag and records the error", async () => {
    const api = new FakeApi();
    api.failWith = new ApiRequestError(400, "invalid-draft", "bad draft", ["id"]);
    const store = new SessionStore(api as never, sessionFixture());
    store.edit((draft) => { draft.revised_response = "x"; });
    expect(await store.save()).toBe(false);
    expect(store.dirty).toBe(true);
    expect(store.lastError).toContain("bad draft");
  });

  it("version conflict triggers the reload-and-merge prompt", async () => {
    const api = new FakeApi();
    api.failWith = new ApiRequestError(409, "version-conflict", "stale");
    api.serverSession.version = 7;
    let asked = 0;
    const store = new SessionStore(api as never, sessionFixture(), {
      onConflict: () => { asked++; return "reload"; },
    });
    store.edit((draft) => { draft.revised_response = "mine"; });
    expect(await store.save()).toBe(false);
    expect(asked).toBe(1);
    // reloaded the server copy
    expect(store.session.version).toBe(7);
    expect(store.dirty).toBe(false);
  });

  it("conflict with keep-editing leaves local edits alone", async () => {
    const api = new FakeApi();
    api.failWith = new ApiRequestError(409, "version-conflict", "stale");
    const store = new SessionStore(api as never, sessionFixture(), {
      onConflict: () => "keep-editing",
    });
    store.edit((draft) => { draft.revised_response = "mine"; });
    expect(await store.save()).toBe(false);
    expect(store.draft.revised_response).toBe("mine");
    expect(store.dirty).toBe(true);
  });

  it("submit flushes dirty edits first", async () => {
    const api = new FakeApi();
    const store = new SessionStore(api as never, sessionFixture());
    store.edit((draft) => { draft.revised_response = "x"; });
    expect(await store.submit()).toBe(true);
    expect(api.saves).toBe(1);
    expect(store.session.status).toBe("submitted");
  });

  it("tracks pending requests around saves", async () => {
    const api = new FakeApi();
    let sawPending = false;
    const store = new SessionStore(api as never, sessionFixture(), {
      onChange: (s) => { if (s.pendingRequests > 0) sawPending = true; },
    });
    store.edit((draft) => { draft.revised_response = "x"; });
    await store.save();
    expect(sawPending).toBe(true);
    expect(store.pendingRequests).toBe(0);
  });
});
