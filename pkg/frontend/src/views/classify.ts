import { effectiveClasses, type SessionStore } from "../state";
import { escapeHtml } from "../format";
import type { AttributeClass } from "../types";

const CLASSES: AttributeClass[] = [
  "DirectIdentifier",
  "QuasiIdentifier",
  "Sensitive",
  "Insensitive",
];

export function renderClassify(root: HTMLElement, store: SessionStore): void {
  const state = store.get();
  if (!state.datasetId) {
    root.innerHTML = `<section class="panel"><p>Upload a dataset first.</p></section>`;
    return;
  }
  const current = effectiveClasses(state);
  const rows = state.schema
    .map(
      (column) => `
      <tr>
        <td>${escapeHtml(column.name)}</td>
        <td>${column.kind}</td>
        <td>
          <select data-attribute="${escapeHtml(column.name)}">
            ${CLASSES.map(
              (klass) =>
                `<option value="${klass}" ${current[column.name] === klass ? "selected" : ""}>${klass}</option>`,
            ).join("")}
          </select>
        </td>
      </tr>`,
    )
    .join("");
  root.innerHTML = `
    <section class="panel">
      <h2>Classification</h2>
      <p>Assign each attribute a privacy class. Direct identifiers are flagged
      for removal in reports; only quasi-identifiers can join attacker
      scenarios. Applying records an explicit Classify step.</p>
      <table>
        <thead><tr><th>attribute</th><th>kind</th><th>class</th></tr></thead>
        <tbody>${rows}</tbody>
      </table>
      <button id="apply-classification" ${state.busy ? "disabled" : ""}>
        Apply classification
      </button>
      ${state.sessionId ? `<p class="ok">Session ${state.sessionId} active.</p>` : ""}
    </section>
  `;

  root
    .querySelector("#apply-classification")!
    .addEventListener("click", async () => {
      const assignments: Record<string, AttributeClass> = {};
      for (const select of root.querySelectorAll<HTMLSelectElement>(
        "select[data-attribute]",
      )) {
        const name = select.dataset.attribute!;
        const chosen = select.value as AttributeClass;
        if (current[name] !== chosen) assignments[name] = chosen;
      }
      if (!store.get().sessionId) {
        await store.startSession([]);
      }
      if (Object.keys(assignments).length > 0) {
        await store.applyClassification(assignments);
      }
      if (!store.get().error) store.goTo("scenarios");
    });
}
