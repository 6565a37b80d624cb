// Consolidation view: both annotators' values side by side per disagreeing
// field path, with resolution pickers. Submission stays blocked until every
// disagreement has a resolved value.

import { ApiClient } from "../api";
import { clear, el } from "../dom";
import type { Disagreement, Step } from "../types";

export interface ConsolidationCallbacks {
  onConsolidated?: (outcome: string) => void;
}

export async function renderConsolidation(api: ApiClient, documentId: string, step: Step,
                                          callbacks: ConsolidationCallbacks = {}):
    Promise<HTMLElement> {
  const root = el("section", { class: "screen consolidation" });
  let disagreements: Disagreement[] = [];
  let loadError: string | null = null;
  try {
    disagreements = (await api.getDisagreements(documentId, step)).disagreements;
  } catch (error) {
    loadError = error instanceof Error ? error.message : String(error);
  }
  const resolutions = new Map<string, unknown>();

  const draw = () => {
    clear(root);
    root.append(el("h2", {}, `Consolidation · ${documentId} · ${step}`));
    if (loadError) {
      root.append(el("p", { class: "inline-error" }, loadError));
      return;
    }
    if (disagreements.length === 0) {
      root.append(el("p", { class: "no-disagreements" },
        "no disagreements: drafts are identical"));
    }
    disagreements.forEach((disagreement) => {
      const picked = resolutions.has(disagreement.field_path);
      const row = el("div", { class: "card disagreement", "data-path": disagreement.field_path });
      row.append(el("h3", {}, disagreement.field_path));
      const sideBySide = el("div", { class: "side-by-side" });
      const valueA = el("div", { class: "value value-a" },
        el("pre", {}, JSON.stringify(disagreement.value_a, null, 1)),
        el("button", {
          class: "pick-a",
          onclick: () => { resolutions.set(disagreement.field_path, disagreement.value_a); draw(); },
        }, "use annotator A"));
      const valueB = el("div", { class: "value value-b" },
        el("pre", {}, JSON.stringify(disagreement.value_b, null, 1)),
        el("button", {
          class: "pick-b",
          onclick: () => { resolutions.set(disagreement.field_path, disagreement.value_b); draw(); },
        }, "use annotator B"));
      sideBySide.append(valueA, valueB);
      row.append(sideBySide);
      row.append(el("p", { class: picked ? "resolved" : "unresolved" },
        picked ? `resolved: ${JSON.stringify(resolutions.get(disagreement.field_path))}`
               : "unresolved"));
      root.append(row);
    });

    const unresolved = disagreements.filter((d) => !resolutions.has(d.field_path));
    const thirdRater = el("input", { type: "text", placeholder: "third rater (optional)",
                                     "aria-label": "third rater" }) as HTMLInputElement;
    const errorBox = el("p", { class: "inline-error consolidation-error" });
    const consolidateButton = el("button", { class: "consolidate" },
      "consolidate") as HTMLButtonElement;
    consolidateButton.disabled = unresolved.length > 0;
    consolidateButton.addEventListener("click", async () => {
      try {
        const result = await api.consolidate(documentId, step,
          Object.fromEntries(resolutions),
          { thirdRater: thirdRater.value || undefined });
        callbacks.onConsolidated?.(result.outcome);
        root.append(el("p", { class: "consolidated" }, `outcome: ${result.outcome}`));
      } catch (error) {
        errorBox.textContent = error instanceof Error ? error.message : String(error);
      }
    });
    const discardButton = el("button", {
      class: "discard",
      onclick: async () => {
        try {
          const result = await api.consolidate(documentId, step, {},
            { thirdRater: thirdRater.value || undefined, discard: true });
          callbacks.onConsolidated?.(result.outcome);
        } catch (error) {
          errorBox.textContent = error instanceof Error ? error.message : String(error);
        }
      },
    }, "discard document");

    root.append(el("div", { class: "actions" },
      thirdRater, consolidateButton, discardButton,
      el("span", { class: "status" },
        unresolved.length > 0 ? `${unresolved.length} unresolved disagreement(s)` : "ready"),
      errorBox));
  };

  draw();
  return root;
}
