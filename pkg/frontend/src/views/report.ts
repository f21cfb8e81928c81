import { escapeHtml, metricBadge, pct, scenarioLabel } from "../format";
import type { SessionStore } from "../state";

function download(name: string, text: string, type: string): void {
  const a = document.createElement("a");
  a.href = URL.createObjectURL(new Blob([text], { type }));
  a.download = name;
  a.click();
  URL.revokeObjectURL(a.href);
}

export function renderReport(root: HTMLElement, store: SessionStore): void {
  const state = store.get();
  if (!state.sessionId) {
    root.innerHTML = `<section class="panel"><p>Start a session first.</p></section>`;
    return;
  }
  if (!state.report) {
    root.innerHTML = `<section class="panel"><h2>Report</h2><p>Building report…</p></section>`;
    void store.loadReport();
    return;
  }
  const final = state.report.final;
  const banner =
    final.decision === "Release"
      ? "release"
      : final.decision === "ReleaseWithControls"
        ? "controls"
        : "stop";
  const rows = final.risk_matrix
    .map((entry) => {
      const label = escapeHtml(scenarioLabel(entry.scenario));
      if (entry.status !== "ok") {
        return `<tr><td>${label}</td><td>n/a</td><td>-</td></tr>`;
      }
      return `<tr><td>${label}</td><td>${metricBadge(entry)}</td><td>${pct(entry.risk_percent)}</td></tr>`;
    })
    .join("");
  const warnings = final.direct_identifier_warnings;
  root.innerHTML = `
    <section class="panel">
      <h2>Report</h2>
      <div class="banner ${banner}">
        Decision: <strong>${final.decision}</strong>
        (risk ${final.risk_level} × benefit ${final.benefit_level});
        thresholds ${final.pass ? "PASS" : "FAIL"};
        smallest equivalence class ${final.min_k ?? "n/a"}
      </div>
      ${
        warnings.length
          ? `<p class="error">Direct identifiers still present: ${warnings
              .map(escapeHtml)
              .join(", ")}</p>`
          : ""
      }
      <table>
        <thead><tr><th>scenario</th><th>metric</th><th>final risk %</th></tr></thead>
        <tbody>${rows}</tbody>
      </table>
      <h3>Five Safes</h3>
      <ul>
        ${state.report.five_safes
          .map(
            (item) =>
              `<li><strong>${escapeHtml(item.stage)}</strong>: ${escapeHtml(item.note)}</li>`,
          )
          .join("")}
      </ul>
      <div class="row">
        <button id="dl-json">Download JSON</button>
        <button id="dl-md">Download Markdown</button>
        <button id="dl-csv">Download protected CSV</button>
      </div>
    </section>
  `;

  root.querySelector("#dl-json")!.addEventListener("click", () => {
    download("report.json", JSON.stringify(state.report, null, 2), "application/json");
  });
  root.querySelector("#dl-md")!.addEventListener("click", async () => {
    download(
      "report.md",
      await store.client.getReportMarkdown(state.sessionId!),
      "text/markdown",
    );
  });
  root.querySelector("#dl-csv")!.addEventListener("click", async () => {
    download("protected.csv", await store.client.exportCsv(state.sessionId!), "text/csv");
  });
}
