// Merged-response preview for step 3, mirroring the server's deterministic
// merge: order-preserving, deleted sentences dropped, edits mapped onto the
// sentence text (claim-concatenation fallback), subset dedup on content words
// when a rebuilt sentence is involved.

import { contentTokens, isSubset } from "./tokenize";
import type { FactcheckDocument, SentenceUnit } from "./types";

function cleanup(text: string): string {
  return text.replace(/\s+/g, " ").trim().replace(/\s+([.,;:!?])/g, "$1");
}

function rebuildSentence(sentence: SentenceUnit): string | null {
  if (sentence.revised_text !== null) return cleanup(sentence.revised_text) || null;

  const deleted = (claimIndex: number) =>
    sentence.claims[claimIndex].edits.some((e) => e.kind === "delete-claim");
  const survivors = sentence.claims.filter((_, i) => !deleted(i));
  if (sentence.claims.length > 0 && survivors.length === 0) return null;
  if (!sentence.claims.some((c) => c.edits.length > 0)) return sentence.text;

  let text = sentence.text;
  let mapped = true;
  for (const claim of sentence.claims) {
    for (const op of claim.edits) {
      if (op.kind === "delete-claim") {
        if (text.includes(claim.text)) text = text.replace(claim.text, "");
        else mapped = false;
      } else if (op.target_span !== null && text.includes(op.target_span)) {
        text = text.replace(op.target_span, op.replacement ?? "");
      } else {
        mapped = false;
      }
    }
  }
  if (mapped) return cleanup(text) || null;
  const parts = survivors.map((c) => c.revised_text ?? c.text);
  return cleanup(parts.join(" ")) || null;
}

export interface MergeResult {
  merged: string;
  /** sentence ids dropped as reduplicative, for the dedup-suggestions panel */
  dedupDropped: string[];
  allDeleted: boolean;
}

export function mergePreview(doc: FactcheckDocument, stopwords: Set<string>): MergeResult {
  const kept: { text: string; rebuilt: boolean; tokens: Set<string> }[] = [];
  const dedupDropped: string[] = [];

  for (const sentence of doc.sentences) {
    if (sentence.deleted) continue;
    let text: string | null;
    let rebuilt = false;
    if (!sentence.checkworthy) {
      text = sentence.text;
    } else {
      rebuilt = sentence.claims.some((c) => c.edits.length > 0) || sentence.revised_text !== null;
      text = rebuildSentence(sentence);
    }
    if (text === null) continue;
    const tokens = contentTokens(text, stopwords);
    let duplicate = false;
    if (tokens.size > 0) {
      for (const earlier of kept) {
        if ((rebuilt || earlier.rebuilt) && isSubset(tokens, earlier.tokens)) {
          duplicate = true;
          break;
        }
      }
    }
    if (duplicate) {
      dedupDropped.push(sentence.id);
      continue;
    }
    kept.push({ text, rebuilt, tokens });
  }
  return {
    merged: kept.map((k) => k.text).join(" "),
    dedupDropped,
    allDeleted: kept.length === 0 && doc.sentences.length > 0,
  };
}
