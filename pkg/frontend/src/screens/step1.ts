// Step 1: decomposition, decontextualisation, checkworthiness.
// Annotators edit claim lists inline (auto-decomposed claims are pre-filled),
// pick categories and importance tiers, and can add or remove claims.

import { clear, el, select } from "../dom";
import type { SessionStore } from "../state";
import type { Category, SentenceUnit, ServiceConfig } from "../types";

function nextClaimId(sentence: SentenceUnit): string {
  const taken = new Set(sentence.claims.map((c) => c.id));
  let n = 1;
  while (taken.has(`${sentence.id}c${n}`)) n++;
  return `${sentence.id}c${n}`;
}

export function renderStep1(store: SessionStore, config: ServiceConfig): HTMLElement {
  const root = el("section", { class: "screen step1" });

  const draw = () => {
    clear(root);
    root.append(el("h2", {}, "Step 1 · Decomposition & checkworthiness"));
    root.append(el("p", { class: "context" },
      el("strong", {}, "Question: "), store.draft.question));
    root.append(el("p", { class: "context" },
      el("strong", {}, "Response: "), store.draft.response));

    store.draft.sentences.forEach((sentence, sentenceIndex) => {
      const card = el("div", { class: "card sentence", "data-sentence": sentence.id });
      card.append(el("div", { class: "sentence-text" }, `${sentence.id}: ${sentence.text}`));

      const categoryPicker = select(config.categories, sentence.category, (value) => {
        store.edit((draft) => {
          const target = draft.sentences[sentenceIndex];
          target.category = value as Category;
          target.checkworthy = value === "factual";
          if (!target.checkworthy) target.claims = [];
        });
        draw();
      }, { class: "sentence-category", "aria-label": `category for ${sentence.id}` });
      const importancePicker = select(config.importance_levels, sentence.importance, (value) => {
        store.edit((draft) => {
          draft.sentences[sentenceIndex].importance = value as never;
        });
      }, { "aria-label": `importance for ${sentence.id}` });
      card.append(el("div", { class: "row" },
        el("label", {}, "category "), categoryPicker,
        el("label", {}, " importance "), importancePicker));

      if (sentence.checkworthy) {
        const claimList = el("ul", { class: "claims" });
        sentence.claims.forEach((claim, claimIndex) => {
          const input = el("input", {
            type: "text", value: claim.text, class: "claim-text",
            "data-claim": claim.id, "aria-label": `claim ${claim.id} text`,
          }) as HTMLInputElement;
          input.value = claim.text;
          input.addEventListener("input", () => {
            store.edit((draft) => {
              draft.sentences[sentenceIndex].claims[claimIndex].text = input.value;
            });
          });
          const category = select(config.categories, claim.category, (value) => {
            store.edit((draft) => {
              draft.sentences[sentenceIndex].claims[claimIndex].category = value as Category;
            });
          }, { "aria-label": `claim ${claim.id} category` });
          const importance = select(config.importance_levels, claim.importance, (value) => {
            store.edit((draft) => {
              draft.sentences[sentenceIndex].claims[claimIndex].importance = value as never;
            });
          }, { "aria-label": `claim ${claim.id} importance` });
          const remove = el("button", {
            class: "remove-claim",
            onclick: () => {
              if (sentence.claims.length === 1) {
                card.querySelector(".inline-error")?.remove();
                card.append(el("p", { class: "inline-error" },
                  "a checkworthy sentence needs at least one claim "
                  + "(mark the sentence non-factual instead)"));
                return;
              }
              store.edit((draft) => {
                draft.sentences[sentenceIndex].claims.splice(claimIndex, 1);
              });
              draw();
            },
          }, "remove");
          claimList.append(el("li", { class: "claim-row" }, input, category, importance, remove));
        });
        card.append(claimList);
        card.append(el("button", {
          class: "add-claim",
          onclick: () => {
            store.edit((draft) => {
              const target = draft.sentences[sentenceIndex];
              target.claims.push({
                id: nextClaimId(target),
                text: sentence.text,
                category: "factual",
                importance: "intermediate",
                evidence: [],
                verdict: "unassessed",
                edits: [],
                revised_text: null,
              });
            });
            draw();
          },
        }, "add claim"));
      }
      root.append(card);
    });

    const saveButton = el("button", {
      class: "save", onclick: async () => { await store.save(); draw(); },
    }, store.dirty ? "save draft *" : "save draft");
    const submitButton = el("button", {
      class: "submit", onclick: async () => { await store.submit(); draw(); },
    }, "submit step 1");
    root.append(el("div", { class: "actions" }, saveButton, submitButton,
      el("span", { class: "status" },
        `status: ${store.session.status}, v${store.session.version}`
        + (store.lastError ? ` — error: ${store.lastError}` : ""))));
  };

  draw();
  return root;
}
