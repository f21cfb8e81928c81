import { histogramSvg } from "../charts";
import { escapeHtml } from "../format";
import type { SessionStore } from "../state";

export function renderUtility(root: HTMLElement, store: SessionStore): void {
  const state = store.get();
  if (!state.sessionId) {
    root.innerHTML = `<section class="panel"><p>Start a session first.</p></section>`;
    return;
  }
  if (!state.report) {
    root.innerHTML = `<section class="panel"><h2>Utility View</h2>
      <p>Loading distribution diagnostics…</p></section>`;
    void store.loadReport();
    return;
  }
  const sections = state.report.steps
    .filter((step) => step.utility.length > 0)
    .map((step) => {
      const charts = step.utility
        .map(
          (u) => `
          <div class="chart-pair">
            <h4>${escapeHtml(u.column)}</h4>
            <div class="row">
              <figure><figcaption>before (counts)</figcaption>${histogramSvg(u.before, "count")}</figure>
              <figure><figcaption>after (frequency)</figcaption>${histogramSvg(u.after, "frequency")}</figure>
            </div>
          </div>`,
        )
        .join("");
      return `<section>
        <h3>Step ${step.index + 1}: ${escapeHtml(step.step.variant)}</h3>
        ${charts}
      </section>`;
    })
    .join("");
  root.innerHTML = `
    <section class="panel">
      <h2>Utility View</h2>
      <p>Before/after distributions of every transformed column: count
      histograms beside frequency (count per unit width) so coarser bins stay
      comparable.</p>
      ${sections || "<p class='muted'>No value-transforming steps applied yet.</p>"}
    </section>
  `;
}
