// Bootstrap: token entry, document list, and step routing. The UI is a pure
// projection of server state plus local dirty edits; refresh never loses
// anything submitted.

import { ApiClient, ApiRequestError } from "./api";
import { clear, el } from "./dom";
import { openSession } from "./state";
import { renderConsolidation } from "./screens/consolidation";
import { renderStep1 } from "./screens/step1";
import { renderStep2 } from "./screens/step2";
import { renderStep3 } from "./screens/step3";
import type { ServiceConfig, Step } from "./types";

const SCREENS: Record<Step, typeof renderStep1> = {
  "step1-decompose-cw": renderStep1,
  "step2-stance-correct": renderStep2,
  "step3-merge-revise": renderStep3,
};

async function confirmReload(): Promise<"reload" | "keep-editing"> {
  return window.confirm(
    "Another save landed first (version conflict). Reload the server copy and merge "
    + "your changes by hand?") ? "reload" : "keep-editing";
}

export async function bootstrap(root: HTMLElement, baseUrl = ""): Promise<void> {
  clear(root);
  const token = window.localStorage.getItem("factcheck-token")
    ?? window.prompt("annotator token") ?? "";
  window.localStorage.setItem("factcheck-token", token);
  const api = new ApiClient(baseUrl, token);

  let config: ServiceConfig;
  try {
    config = await api.getConfig();
  } catch (error) {
    root.append(el("p", { class: "inline-error" },
      `cannot reach the annotation service: ${error}`));
    return;
  }

  const header = el("header", {},
    el("h1", {}, "Factcheck annotation"),
    el("button", {
      class: "back", onclick: () => { window.location.hash = ""; route(); },
    }, "documents"));
  const main = el("main", {});
  root.append(header, main);

  async function showDocumentList(): Promise<void> {
    clear(main);
    const documents = await api.listDocuments();
    if (documents.length === 0) {
      main.append(el("p", {}, "no documents imported yet"));
      return;
    }
    const list = el("ul", { class: "document-list" });
    for (const doc of documents) {
      const item = el("li", { class: "document-entry" },
        el("strong", {}, doc.document_id), ` — ${doc.question} `,
        el("span", { class: "step-badge" },
          doc.discarded ? "discarded" : doc.current_step ?? "complete"));
      if (!doc.discarded && doc.current_step) {
        item.append(el("button", {
          class: "annotate",
          onclick: () => { window.location.hash = `#/doc/${doc.document_id}`; route(); },
        }, "annotate"));
        item.append(el("button", {
          class: "consolidate-view",
          onclick: () => {
            window.location.hash = `#/doc/${doc.document_id}/consolidate`;
            route();
          },
        }, "consolidation"));
      }
      list.append(item);
    }
    main.append(list);
  }

  async function showAnnotation(documentId: string): Promise<void> {
    clear(main);
    try {
      const store = await openSession(api, documentId, { onConflict: confirmReload });
      main.append(SCREENS[store.session.step](store, config));
    } catch (error) {
      if (error instanceof ApiRequestError) {
        main.append(el("p", { class: "inline-error" },
          `${error.code}: ${error.message}`));
        return;
      }
      throw error;
    }
  }

  async function showConsolidation(documentId: string): Promise<void> {
    clear(main);
    const state = await api.getDocument(documentId);
    if (!state.current_step) {
      main.append(el("p", {}, "document fully consolidated"));
      return;
    }
    main.append(await renderConsolidation(api, documentId, state.current_step, {
      onConsolidated: () => { window.location.hash = ""; route(); },
    }));
  }

  async function route(): Promise<void> {
    const hash = window.location.hash;
    const consolidate = hash.match(/^#\/doc\/([^/]+)\/consolidate$/);
    const annotate = hash.match(/^#\/doc\/([^/]+)$/);
    if (consolidate) await showConsolidation(decodeURIComponent(consolidate[1]));
    else if (annotate) await showAnnotation(decodeURIComponent(annotate[1]));
    else await showDocumentList();
  }

  window.addEventListener("hashchange", () => { void route(); });
  await route();
}

const appRoot = document.getElementById("app");
if (appRoot && !("__FACTCHECK_TEST__" in window)) {
  void bootstrap(appRoot);
}
