/** Pure view transforms: filtering, sorting, and decision-document edits.
 *
 * Nothing in here touches the DOM or the network, so the triage rules
 * (filters restore the full set when cleared, at most one candidate is
 * selected, provisional marks toggle) are all unit-testable.
 */

import type {
  DecisionsDoc,
  DecisionStatus,
  Manifest,
  ManifestCandidate,
  MetricValue,
} from "./types.js";

export type GateFilter = "all" | "pass" | "ruled_out" | "error";
export type DecisionFilter = "all" | "undecided" | DecisionStatus;
export type SortKey =
  | "manifest"
  | "silhouette"
  | "calinski_harabasz"
  | "davies_bouldin"
  | "n_significant";

export interface Filters {
  gate: GateFilter;
  algorithm: string; // "all" or an algorithm tag
  decision: DecisionFilter;
  minSilhouette: number | null;
}

export function defaultFilters(): Filters {
  return { gate: "all", algorithm: "all", decision: "all", minSilhouette: null };
}

/** "inf"/"-inf" sentinels to comparable numbers; null for absent metrics. */
export function metricNumber(value: MetricValue): number | null {
  if (value === null) return null;
  if (value === "inf") return Infinity;
  if (value === "-inf") return -Infinity;
  return value;
}

export function isGated(candidate: ManifestCandidate): boolean {
  return candidate.status === "ok" && candidate.gate?.status === "ruled_out";
}

export function decisionOf(
  doc: DecisionsDoc,
  candidateId: string
): DecisionStatus | null {
  return doc.decisions[candidateId]?.status ?? null;
}

export function selectedId(doc: DecisionsDoc): string | null {
  for (const [id, decision] of Object.entries(doc.decisions)) {
    if (decision.status === "selected") return id;
  }
  return null;
}

function matches(
  candidate: ManifestCandidate,
  filters: Filters,
  doc: DecisionsDoc
): boolean {
  if (filters.gate === "error") {
    if (candidate.status !== "error") return false;
  } else if (filters.gate !== "all") {
    if (candidate.status !== "ok" || candidate.gate?.status !== filters.gate)
      return false;
  }
  if (filters.algorithm !== "all" && candidate.algorithm !== filters.algorithm)
    return false;
  if (filters.decision !== "all") {
    const decision = decisionOf(doc, candidate.candidate_id);
    if (filters.decision === "undecided" ? decision !== null : decision !== filters.decision)
      return false;
  }
  if (filters.minSilhouette !== null) {
    const sil = metricNumber(candidate.metrics?.silhouette ?? null);
    if (sil === null || sil < filters.minSilhouette) return false;
  }
  return true;
}

const SORT_ACCESSORS: Record<
  Exclude<SortKey, "manifest">,
  (c: ManifestCandidate) => number | null
> = {
  silhouette: (c) => metricNumber(c.metrics?.silhouette ?? null),
  calinski_harabasz: (c) => metricNumber(c.metrics?.calinski_harabasz ?? null),
  davies_bouldin: (c) => metricNumber(c.metrics?.davies_bouldin ?? null),
  n_significant: (c) => c.n_significant_features,
};

// Davies-Bouldin is lower-is-better; everything else is higher-is-better.
const ASCENDING: SortKey[] = ["davies_bouldin"];

/** The displayed set: manifest order, filtered, then stably sorted. */
export function visibleCandidates(
  manifest: Manifest,
  filters: Filters,
  sortKey: SortKey,
  doc: DecisionsDoc
): ManifestCandidate[] {
  const kept = manifest.candidates.filter((c) => matches(c, filters, doc));
  if (sortKey === "manifest") return kept;
  const accessor = SORT_ACCESSORS[sortKey];
  const direction = ASCENDING.includes(sortKey) ? 1 : -1;
  return kept
    .map((candidate, index) => ({ candidate, index }))
    .sort((a, b) => {
      const va = accessor(a.candidate);
      const vb = accessor(b.candidate);
      if (va === null && vb === null) return a.index - b.index;
      if (va === null) return 1; // metric-less (failed) candidates sink
      if (vb === null) return -1;
      if (va !== vb) return direction * (va - vb);
      return a.index - b.index;
    })
    .map((entry) => entry.candidate);
}

export interface DecisionEdit {
  doc: DecisionsDoc;
  /** Candidate that lost `selected` status when a selection transferred. */
  demoted: string | null;
}

/**
 * Set or clear one candidate's decision, keeping at most one `selected`.
 * Transferring a selection demotes the previous holder to shortlisted.
 */
export function applyDecision(
  doc: DecisionsDoc,
  candidateId: string,
  status: DecisionStatus | null,
  note: string,
  now: string
): DecisionEdit {
  const decisions = { ...doc.decisions };
  let demoted: string | null = null;
  if (status === null) {
    delete decisions[candidateId];
  } else {
    if (status === "selected") {
      const current = selectedId(doc);
      if (current !== null && current !== candidateId) {
        decisions[current] = {
          ...decisions[current],
          status: "shortlisted",
          updated_at: now,
        };
        demoted = current;
      }
    }
    decisions[candidateId] = { status, note, updated_at: now };
  }
  return { doc: { schema_version: 1, decisions }, demoted };
}

/** Gallery click: flip a provisional ruled_out mark on/off. */
export function toggleRuledOut(
  doc: DecisionsDoc,
  candidateId: string,
  now: string
): DecisionsDoc {
  const current = decisionOf(doc, candidateId);
  const note = doc.decisions[candidateId]?.note ?? "";
  if (current === "ruled_out") {
    return applyDecision(doc, candidateId, null, note, now).doc;
  }
  return applyDecision(doc, candidateId, "ruled_out", note, now).doc;
}
