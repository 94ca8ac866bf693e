/** Small display formatters shared by the table and the detail panel. */

import type { ManifestCandidate, MetricValue } from "./types.js";

export function fmtMetric(value: MetricValue): string {
  if (value === null) return "–";
  if (value === "inf") return "∞";
  if (value === "-inf") return "-∞";
  const text = value.toPrecision(4);
  // trim float noise like 0.8570 -> 0.857, 200.0 -> 200
  return text.includes("e") ? text : String(Number(text));
}

export function fmtParams(params: Record<string, number | string>): string {
  return Object.keys(params)
    .sort()
    .map((name) => `${name}=${String(params[name])}`)
    .join(" ");
}

export function fmtSizes(sizes: number[] | null): string {
  return sizes === null ? "–" : sizes.join("/");
}

export function gateLabel(candidate: ManifestCandidate): string {
  if (candidate.status === "error") return "error";
  return candidate.gate?.status ?? "?";
}

export function gateTooltip(candidate: ManifestCandidate): string {
  if (candidate.status === "error") return candidate.error ?? "failed";
  const reasons = candidate.gate?.reasons ?? [];
  return reasons.length ? reasons.join(", ") : "all meta-criteria satisfied";
}
