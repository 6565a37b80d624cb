// Word tokenizer kept in lockstep with the evaluation metrics: whitespace
// split, case fold, punctuation stripped from token edges. Diff rendering
// and dedup suggestions both use it so what the annotator sees matches what
// the metrics count.

const PUNCT = new Set([..."!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~‘’“”–—…"]);

function stripPunct(token: string): string {
  let start = 0;
  let end = token.length;
  while (start < end && PUNCT.has(token[start])) start++;
  while (end > start && PUNCT.has(token[end - 1])) end--;
  return token.slice(start, end);
}

export function tokenize(text: string): string[] {
  const tokens: string[] = [];
  for (const raw of text.split(/\s+/)) {
    if (!raw) continue;
    const token = stripPunct(raw.toLowerCase());
    if (token) tokens.push(token);
  }
  return tokens;
}

export function contentTokens(text: string, stopwords: Set<string>): Set<string> {
  return new Set(tokenize(text).filter((t) => !stopwords.has(t)));
}

export function isSubset<T>(a: Set<T>, b: Set<T>): boolean {
  for (const item of a) if (!b.has(item)) return false;
  return true;
}
