/** Wire formats served by `clustergrid serve` (manifest + decisions API). */

export type MetricValue = number | "inf" | "-inf" | null;

export interface GateOutcome {
  status: "pass" | "ruled_out";
  reasons: string[];
}

export interface CandidateMetrics {
  silhouette: MetricValue;
  calinski_harabasz: MetricValue;
  davies_bouldin: MetricValue;
}

export interface ManifestCandidate {
  candidate_id: string;
  algorithm: string;
  params: Record<string, number | string>;
  status: "ok" | "error";
  gate: GateOutcome | null;
  metrics: CandidateMetrics | null;
  sizes: number[] | null;
  n_significant_features: number | null;
  files: { profile: string; chart: string } | null;
  error: string | null;
  timing_ms: number;
}

export interface Manifest {
  schema_version: number;
  run_id: string;
  created_at: string;
  elapsed_ms: number;
  dataset: {
    rows: number;
    columns: string[];
    key_features: string[];
    dropped_rows: number;
    scaling: Record<string, string>;
  };
  settings: {
    seed: number;
    alpha: number;
    min_cluster_fraction: number;
    bonferroni: boolean;
  };
  candidates: ManifestCandidate[];
}

export type DecisionStatus = "ruled_out" | "shortlisted" | "selected";

export interface Decision {
  status: DecisionStatus;
  note: string;
  updated_at: string;
}

export interface DecisionsDoc {
  schema_version: 1;
  decisions: Record<string, Decision>;
}

export function emptyDecisions(): DecisionsDoc {
  return { schema_version: 1, decisions: {} };
}
