// Step 2: evidence stance identification and claim correction.
// One panel per claim: its evidence snippets with stance radios and source
// reliability toggles, a manual-evidence form, and an edit composer that
// previews the revised claim live with the server's edit semantics.

import { clear, el, select } from "../dom";
import { applyEdit, editProblem } from "../edits";
import type { SessionStore } from "../state";
import { previewVerdict } from "../verdict";
import type { EditKind, EditOperation, Reliability, ServiceConfig, Stance, Verdict } from "../types";

const ASSESSABLE_STANCES: Stance[] = [
  "completely-support", "partially-support", "refute", "irrelevant"];

export function renderStep2(store: SessionStore, config: ServiceConfig): HTMLElement {
  const root = el("section", { class: "screen step2" });

  const draw = () => {
    clear(root);
    root.append(el("h2", {}, "Step 2 · Evidence stance & claim correction"));

    store.draft.sentences.forEach((sentence, sentenceIndex) => {
      sentence.claims.forEach((claim, claimIndex) => {
        const panel = el("div", { class: "card claim-panel", "data-claim": claim.id });
        panel.append(el("h3", {}, `${claim.id}: ${claim.text}`));

        // evidence snippets with stance + reliability controls
        claim.evidence.forEach((item, evidenceIndex) => {
          const isManual = item.url.startsWith("manual:");
          const block = el("div", {
            class: isManual ? "evidence manual" : "evidence",
            "data-evidence": String(evidenceIndex),
          });
          block.append(el("p", { class: "snippet" }, item.snippet));
          block.append(el("a", { href: item.url, class: "evidence-url" },
            isManual ? `${item.url} (manual)` : item.url));

          const stanceGroup = el("div", { class: "stances", role: "radiogroup" });
          for (const stance of ASSESSABLE_STANCES) {
            const name = `stance-${claim.id}-${evidenceIndex}`;
            const radio = el("input", {
              type: "radio", name, value: stance,
              "aria-label": `${name}-${stance}`,
            }) as HTMLInputElement;
            radio.checked = item.stance === stance;
            radio.addEventListener("change", () => {
              store.edit((draft) => {
                draft.sentences[sentenceIndex].claims[claimIndex]
                  .evidence[evidenceIndex].stance = stance;
              });
              draw();
            });
            stanceGroup.append(el("label", { class: "stance-option" }, radio, stance));
          }
          block.append(stanceGroup);

          block.append(el("label", {}, "source reliability ",
            select(config.reliabilities, item.reliability, (value) => {
              store.edit((draft) => {
                draft.sentences[sentenceIndex].claims[claimIndex]
                  .evidence[evidenceIndex].reliability = value as Reliability;
              });
              draw();
            }, { class: "reliability", "aria-label": `reliability-${claim.id}-${evidenceIndex}` })));
          panel.append(block);
        });

        // live verdict preview from the picked stances
        const preview = previewVerdict(claim, config.aggregation_weights);
        panel.append(el("p", { class: "verdict-preview" },
          `verdict preview: ${preview.verdict} `
          + `(support ${preview.supportWeight.toFixed(2)}, refute ${preview.refuteWeight.toFixed(2)})`));
        panel.append(el("label", {}, "claim verdict ",
          select(config.verdicts, claim.verdict, (value) => {
            store.edit((draft) => {
              draft.sentences[sentenceIndex].claims[claimIndex].verdict = value as Verdict;
            });
          }, { class: "claim-verdict", "aria-label": `verdict-${claim.id}` })));

        // manual evidence form
        const query = el("input", { type: "text", placeholder: "query used",
                                    "aria-label": `manual-query-${claim.id}` }) as HTMLInputElement;
        const url = el("input", { type: "text", placeholder: "URL (optional)",
                                  "aria-label": `manual-url-${claim.id}` }) as HTMLInputElement;
        const snippet = el("textarea", { placeholder: "evidence snippet",
                                         "aria-label": `manual-snippet-${claim.id}` }) as HTMLTextAreaElement;
        panel.append(el("div", { class: "manual-evidence-form" },
          el("h4", {}, "add manual evidence"), query, url, snippet,
          el("button", {
            class: "add-manual-evidence",
            onclick: async () => {
              await store.addManualEvidence(claim.id, snippet.value, query.value, url.value);
              draw();
            },
          }, "add evidence")));

        // claim edit composer with live preview
        const composer = el("div", { class: "edit-composer" });
        composer.append(el("h4", {}, "compose correction"));
        let kind: EditKind = "replace";
        const target = el("input", { type: "text", placeholder: "text to change (X)",
                                     "aria-label": `edit-target-${claim.id}` }) as HTMLInputElement;
        const replacement = el("input", { type: "text", placeholder: "replacement (Y)",
                                          "aria-label": `edit-replacement-${claim.id}` }) as HTMLInputElement;
        const previewBox = el("p", { class: "edit-preview" }, "preview: (no edit)");
        const hint = el("p", { class: "edit-hint" });
        const applyButton = el("button", { class: "apply-edit" }, "apply edit") as HTMLButtonElement;

        const currentOp = (): EditOperation => ({
          kind,
          target_span: kind === "delete-claim" ? null : target.value,
          replacement: kind === "replace" ? replacement.value : null,
        });
        const refreshPreview = () => {
          const op = currentOp();
          const problem = editProblem(claim.text, op);
          if (problem) {
            applyButton.disabled = true;
            hint.textContent = problem;
            previewBox.textContent = "preview: (invalid edit)";
          } else {
            applyButton.disabled = false;
            hint.textContent = "";
            const result = applyEdit(claim.text, op);
            previewBox.textContent = result === null
              ? "preview: (claim deleted)" : `preview: ${result}`;
          }
        };
        const kindPicker = select(["replace", "delete-span", "delete-claim"], kind, (value) => {
          kind = value as EditKind;
          replacement.disabled = kind !== "replace";
          target.disabled = kind === "delete-claim";
          refreshPreview();
        }, { class: "edit-kind", "aria-label": `edit-kind-${claim.id}` });
        target.addEventListener("input", refreshPreview);
        replacement.addEventListener("input", refreshPreview);
        applyButton.addEventListener("click", () => {
          const op = currentOp();
          store.edit((draft) => {
            const targetClaim = draft.sentences[sentenceIndex].claims[claimIndex];
            targetClaim.edits.push(op);
            targetClaim.revised_text = op.kind === "delete-claim"
              ? null : applyEdit(claim.text, op);
          });
          draw();
        });
        refreshPreview();
        composer.append(kindPicker, target, replacement, applyButton, previewBox, hint);
        if (claim.edits.length > 0) {
          composer.append(el("p", { class: "current-edits" },
            "edits: " + claim.edits.map((e) =>
              e.kind === "delete-claim" ? "delete-claim"
                : `${e.kind}(${JSON.stringify(e.target_span)}`
                  + (e.kind === "replace" ? ` -> ${JSON.stringify(e.replacement)})` : ")")).join(", ")));
          composer.append(el("button", {
            class: "clear-edits",
            onclick: () => {
              store.edit((draft) => {
                const targetClaim = draft.sentences[sentenceIndex].claims[claimIndex];
                targetClaim.edits = [];
                targetClaim.revised_text = null;
              });
              draw();
            },
          }, "clear edits"));
        }
        panel.append(composer);
        root.append(panel);
      });
    });

    root.append(el("div", { class: "actions" },
      el("button", { class: "save", onclick: async () => { await store.save(); draw(); } },
        store.dirty ? "save draft *" : "save draft"),
      el("button", { class: "submit", onclick: async () => { await store.submit(); draw(); } },
        "submit step 2"),
      el("span", { class: "status" },
        `status: ${store.session.status}, v${store.session.version}`
        + (store.lastError ? ` — error: ${store.lastError}` : ""))));
  };

  draw();
  return root;
}
