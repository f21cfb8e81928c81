import { effectiveClasses, type SessionStore } from "../state";
import { escapeHtml, scenarioLabel } from "../format";

export function renderScenarios(root: HTMLElement, store: SessionStore): void {
  const state = store.get();
  if (!state.sessionId) {
    root.innerHTML = `<section class="panel"><p>Classify attributes and start a session first.</p></section>`;
    return;
  }
  const classes = effectiveClasses(state);
  const qis = state.schema
    .map((c) => c.name)
    .filter((name) => classes[name] === "QuasiIdentifier");
  const grid = state.scenarios
    .map(
      (scenario, row) => `
      <tr>
        <td>${row + 1}</td>
        ${qis
          .map(
            (name) => `
          <td class="center">
            <input type="checkbox" data-row="${row}" data-qi="${escapeHtml(name)}"
                   ${scenario.includes(name) ? "checked" : ""} />
          </td>`,
          )
          .join("")}
        <td><button class="link" data-remove="${row}">remove</button></td>
      </tr>`,
    )
    .join("");
  root.innerHTML = `
    <section class="panel">
      <h2>Scenario Builder</h2>
      <p>Each row is one attacker: the set of quasi-identifiers they are
      assumed to know. Applying changes rebuilds the session and replays the
      step history.</p>
      <table>
        <thead>
          <tr><th>#</th>${qis.map((n) => `<th>${escapeHtml(n)}</th>`).join("")}<th></th></tr>
        </thead>
        <tbody>${grid}</tbody>
      </table>
      <div class="row">
        <button id="add-scenario">Add scenario</button>
        <button id="apply-scenarios" ${state.busy ? "disabled" : ""}>Apply scenarios</button>
      </div>
      <p class="muted">${state.scenarios.length} scenario(s): ${state.scenarios
        .map((s) => escapeHtml(scenarioLabel(s)))
        .join(" | ")}</p>
    </section>
  `;

  const readGrid = (): string[][] => {
    const rows: string[][] = state.scenarios.map(() => []);
    for (const box of root.querySelectorAll<HTMLInputElement>(
      "input[type=checkbox][data-row]",
    )) {
      if (box.checked) rows[Number(box.dataset.row)].push(box.dataset.qi!);
    }
    return rows.filter((r) => r.length > 0);
  };

  root.querySelector("#add-scenario")!.addEventListener("click", () => {
    void store.setScenarios([...readGrid(), qis.slice(0, 2)]);
  });
  root.querySelector("#apply-scenarios")!.addEventListener("click", () => {
    void store.setScenarios(readGrid());
  });
  for (const button of root.querySelectorAll<HTMLButtonElement>("[data-remove]")) {
    button.addEventListener("click", () => {
      const grid = readGrid();
      grid.splice(Number(button.dataset.remove), 1);
      void store.setScenarios(grid);
    });
  }
}
