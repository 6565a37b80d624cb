// Client-side mirror of the claim edit semantics, used by the step-2 edit
// composer for live previews. Must agree with the server: first verbatim
// occurrence, whitespace collapsed, delete-claim short-circuits to null.

import type { EditOperation } from "./types";

export class EditPreviewError extends Error {}

function cleanup(text: string): string {
  return text.replace(/\s+/g, " ").trim().replace(/\s+([.,;:!?])/g, "$1");
}

export function applyEdit(claimText: string, op: EditOperation): string | null {
  if (op.kind === "delete-claim") return null;
  if (op.target_span === null || op.target_span === undefined) {
    throw new EditPreviewError(`${op.kind} requires a target span`);
  }
  const index = claimText.indexOf(op.target_span);
  if (index < 0) {
    throw new EditPreviewError(`target span ${JSON.stringify(op.target_span)} not found verbatim`);
  }
  const replacement = op.kind === "replace" ? op.replacement ?? "" : "";
  if (op.kind === "replace" && op.replacement === null) {
    throw new EditPreviewError("replace requires a replacement");
  }
  return cleanup(
    claimText.slice(0, index) + replacement + claimText.slice(index + op.target_span.length));
}

export function applyEdits(claimText: string, ops: EditOperation[]): string | null {
  let text: string | null = claimText;
  for (const op of ops) {
    if (text === null) return null;
    text = applyEdit(text, op);
  }
  return text;
}

/** Whether the composer's current inputs form a valid operation (drives the
 * disabled state of the submit button). */
export function editProblem(claimText: string, op: EditOperation): string | null {
  try {
    applyEdit(claimText, op);
    return null;
  } catch (error) {
    return error instanceof EditPreviewError ? error.message : String(error);
  }
}
