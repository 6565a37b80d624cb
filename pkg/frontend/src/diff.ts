// Word-level diff (LCS) for the revision preview: original vs revised,
// rendered as kept / deleted / inserted word runs.

export type DiffOp = "same" | "del" | "ins";

export interface DiffSegment {
  op: DiffOp;
  text: string;
}

function words(text: string): string[] {
  return text.split(/\s+/).filter(Boolean);
}

export function wordDiff(original: string, revised: string): DiffSegment[] {
  const a = words(original);
  const b = words(revised);
  // LCS table; documents here are short (sentences / short answers)
  const n = a.length;
  const m = b.length;
  const lcs: number[][] = Array.from({ length: n + 1 }, () => new Array(m + 1).fill(0));
  for (let i = n - 1; i >= 0; i--) {
    for (let j = m - 1; j >= 0; j--) {
      lcs[i][j] = a[i] === b[j]
        ? lcs[i + 1][j + 1] + 1
        : Math.max(lcs[i + 1][j], lcs[i][j + 1]);
    }
  }
  const segments: DiffSegment[] = [];
  const push = (op: DiffOp, text: string) => {
    const last = segments[segments.length - 1];
    if (last && last.op === op) last.text += ` ${text}`;
    else segments.push({ op, text });
  };
  let i = 0;
  let j = 0;
  while (i < n && j < m) {
    if (a[i] === b[j]) {
      push("same", a[i]);
      i++;
      j++;
    } else if (lcs[i + 1][j] >= lcs[i][j + 1]) {
      push("del", a[i]);
      i++;
    } else {
      push("ins", b[j]);
      j++;
    }
  }
  while (i < n) push("del", a[i++]);
  while (j < m) push("ins", b[j++]);
  return segments;
}

export function changedWordCount(segments: DiffSegment[]): number {
  return segments
    .filter((s) => s.op !== "same")
    .reduce((count, s) => count + words(s.text).length, 0);
}
