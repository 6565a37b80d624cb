// Step 3: claim merge, deduplication, and final response revision.
// Shows the deterministic merge preview with a word-level diff against the
// original response, lists dedup suggestions, and lets the annotator edit
// the final revision before submitting.

import { wordDiff } from "../diff";
import { clear, el, select } from "../dom";
import { mergePreview } from "../merge";
import type { SessionStore } from "../state";
import type { DocumentVerdict, ServiceConfig } from "../types";

export function renderStep3(store: SessionStore, config: ServiceConfig): HTMLElement {
  const root = el("section", { class: "screen step3" });
  const stopwords = new Set(config.stopwords);

  const draw = () => {
    clear(root);
    root.append(el("h2", {}, "Step 3 · Merge, dedup & revision"));

    const merge = mergePreview(store.draft, stopwords);
    root.append(el("p", { class: "context" }, el("strong", {}, "Original: "),
      store.draft.response));

    const diffBox = el("p", { class: "diff", "aria-label": "revision diff" });
    const revised = store.draft.revised_response ?? merge.merged;
    for (const segment of wordDiff(store.draft.response, revised)) {
      diffBox.append(el("span", { class: `diff-${segment.op}` }, segment.text + " "));
    }
    root.append(el("div", { class: "card" },
      el("h3", {}, "merge preview"),
      el("p", { class: "merge-preview" }, merge.merged),
      el("h3", {}, "diff vs original"),
      diffBox));

    if (merge.dedupDropped.length > 0) {
      root.append(el("p", { class: "dedup-suggestions" },
        `dedup dropped reduplicative sentence(s): ${merge.dedupDropped.join(", ")}`));
    }
    if (merge.allDeleted) {
      root.append(el("p", { class: "inline-error" },
        "warning: every sentence was deleted; the revision is empty"));
    }

    const revisionBox = el("textarea", {
      class: "revision", "aria-label": "final revision",
    }) as HTMLTextAreaElement;
    revisionBox.value = revised;
    revisionBox.addEventListener("input", () => {
      store.edit((draft) => {
        draft.revised_response = revisionBox.value;
      });
    });
    const useMerge = el("button", {
      class: "use-merge-preview",
      onclick: () => {
        store.edit((draft) => {
          draft.revised_response = merge.merged;
        });
        draw();
      },
    }, "use merge preview as revision");

    const verdictPicker = select(
      ["factually-correct", "contains-errors", "no-checkworthy-claims"],
      store.draft.document_verdict ?? "factually-correct",
      (value) => {
        store.edit((draft) => {
          draft.document_verdict = value as DocumentVerdict;
        });
      }, { class: "document-verdict", "aria-label": "document verdict" });

    root.append(el("div", { class: "card" },
      el("h3", {}, "final revision"), revisionBox, useMerge,
      el("label", {}, " document verdict ", verdictPicker)));

    root.append(el("div", { class: "actions" },
      el("button", { class: "save", onclick: async () => { await store.save(); draw(); } },
        store.dirty ? "save draft *" : "save draft"),
      el("button", { class: "submit", onclick: async () => { await store.submit(); draw(); } },
        "submit step 3"),
      el("span", { class: "status" },
        `status: ${store.session.status}, v${store.session.version}`
        + (store.lastError ? ` — error: ${store.lastError}` : ""))));
  };

  draw();
  return root;
}
