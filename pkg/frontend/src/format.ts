// Rendering helpers. Risk values always show two decimals, matching the
// precision of the published tables; the underlying numbers stay untouched.

import type { RiskEntry } from "./types";

export function pct(value: number): string {
  return value.toFixed(2);
}

export function scenarioLabel(scenario: string[]): string {
  return scenario.join(", ");
}

export function riskSummary(entry: RiskEntry): string {
  if (entry.status !== "ok") return "n/a";
  return `${pct(entry.risk_percent)}%`;
}

export function metricBadge(entry: RiskEntry): string {
  if (entry.status !== "ok") return "not applicable";
  return entry.metric === "KAnonymity" ? "k-anonymity" : "record linkage";
}

export function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}
