// Live verdict preview for step 2: folds the stances the annotator has picked
// so far into the same weighted decision the pipeline uses.

import type { AtomicClaim, Verdict } from "./types";
import type { ServiceConfig } from "./types";

export interface VerdictPreview {
  verdict: Verdict;
  supportWeight: number;
  refuteWeight: number;
}

export function previewVerdict(claim: AtomicClaim,
                               weights: ServiceConfig["aggregation_weights"]): VerdictPreview {
  let support = 0;
  let refute = 0;
  let assessed = 0;
  for (const item of claim.evidence) {
    if (item.stance === "unassessed") continue;
    assessed++;
    const w = weights[item.reliability];
    if (item.stance === "completely-support") support += w;
    else if (item.stance === "partially-support") support += w * weights.partial_support_factor;
    else if (item.stance === "refute") refute += w;
  }
  let verdict: Verdict;
  if (assessed === 0) verdict = "unassessed";
  else if (refute > support) verdict = "false";
  else if (support > refute) verdict = "true";
  else verdict = "not-enough-evidence";
  return { verdict, supportWeight: support, refuteWeight: refute };
}
