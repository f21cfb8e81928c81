import { kHistogramSvg } from "../charts";
import { escapeHtml, metricBadge, pct, scenarioLabel } from "../format";
import type { SessionStore } from "../state";
import type { RiskEntry } from "../types";

let selectedScenario = 0;
let lastSubsetHtml = "";

export function renderDashboard(root: HTMLElement, store: SessionStore): void {
  const state = store.get();
  if (!state.sessionId) {
    root.innerHTML = `<section class="panel"><p>Start a session first.</p></section>`;
    return;
  }
  if (selectedScenario >= state.riskMatrix.length) selectedScenario = 0;

  const rows = state.riskMatrix
    .map((entry, i) => {
      const label = escapeHtml(scenarioLabel(entry.scenario));
      if (entry.status !== "ok") {
        return `<tr data-scenario="${i}">
          <td>${label}</td>
          <td><span class="badge na">n/a</span></td>
          <td data-risk="${i}">-</td><td>-</td>
          <td class="muted">${escapeHtml(entry.reason)}</td>
        </tr>`;
      }
      const detail =
        entry.metric === "KAnonymity"
          ? `${entry.unique_count} unique, min k ${entry.min_k}`
          : `correct ${pct(entry.correct_match_percent)}%, false ${pct(entry.false_match_percent)}%, ` +
            `ambiguous ${pct(entry.ambiguous_percent)}%, margin ${pct(entry.margin_of_error_percent)}%`;
      return `<tr data-scenario="${i}" class="${i === selectedScenario ? "selected" : ""}">
        <td>${label}</td>
        <td><span class="badge ${entry.metric === "KAnonymity" ? "kanon" : "linkage"}">${metricBadge(entry)}</span></td>
        <td data-risk="${i}">${pct(entry.risk_percent)}</td>
        <td>${entry.metric === "KAnonymity" ? entry.min_k : "-"}</td>
        <td class="muted">${detail}</td>
      </tr>`;
    })
    .join("");

  const selected: RiskEntry | undefined = state.riskMatrix[selectedScenario];
  const histogram =
    selected && selected.status === "ok" && selected.metric === "KAnonymity"
      ? kHistogramSvg(selected.k_histogram)
      : `<p class="muted">k histogram only applies to k-anonymity scenarios</p>`;

  root.innerHTML = `
    <section class="panel">
      <h2>Risk Dashboard</h2>
      <p>${state.records} records; ${state.history.length} step(s) applied.</p>
      <table id="risk-matrix">
        <thead><tr><th>scenario</th><th>metric</th><th>risk %</th><th>min k</th><th></th></tr></thead>
        <tbody>${rows}</tbody>
      </table>
      <div class="row">
        <button id="undo-button" ${state.busy || state.history.length === 0 ? "disabled" : ""}>Undo last step</button>
      </div>
      <h3>Equivalence class sizes (scenario ${selectedScenario + 1})</h3>
      ${histogram}
      <h3>Subset risk</h3>
      <div class="row">
        <input id="subset-where" placeholder="Outcome:eq:D" />
        <select id="subset-scenario">
          ${state.riskMatrix
            .map(
              (e, i) =>
                `<option value="${i}">${escapeHtml(scenarioLabel(e.scenario))}</option>`,
            )
            .join("")}
        </select>
        <button id="subset-check">Check subset</button>
      </div>
      <div id="subset-result">${lastSubsetHtml}</div>
    </section>
  `;

  for (const row of root.querySelectorAll<HTMLTableRowElement>("tr[data-scenario]")) {
    row.addEventListener("click", () => {
      selectedScenario = Number(row.dataset.scenario);
      renderDashboard(root, store);
    });
  }
  root.querySelector("#undo-button")!.addEventListener("click", () => {
    lastSubsetHtml = "";
    void store.undo();
  });
  root.querySelector("#subset-check")!.addEventListener("click", async () => {
    const where = root.querySelector<HTMLInputElement>("#subset-where")!.value;
    const index = Number(
      root.querySelector<HTMLSelectElement>("#subset-scenario")!.value,
    );
    const target = root.querySelector<HTMLDivElement>("#subset-result")!;
    try {
      const result = await store.client.getSubsetRisk(state.sessionId!, where, index);
      lastSubsetHtml =
        result.status === "ok"
          ? `<p class="ok">subset risk ${pct(result.risk_percent)}% over ${result.records} records (min k ${result.min_k})</p>`
          : `<p class="muted">subset is empty: ${escapeHtml(result.reason)}</p>`;
    } catch (err) {
      lastSubsetHtml = `<p class="error">${escapeHtml(String(err))}</p>`;
    }
    target.innerHTML = lastSubsetHtml;
  });
}
