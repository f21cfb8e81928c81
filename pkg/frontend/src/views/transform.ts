import { currentColumns, type SessionStore } from "../state";
import { escapeHtml } from "../format";
import type { TransformStepBody } from "../types";

interface Field {
  key: string;
  label: string;
  input: "column" | "columns" | "number" | "text" | "pairs" | "numbers" | "flag";
  placeholder?: string;
}

const VARIANTS: Record<string, Field[]> = {
  SuppressCells: [
    { key: "column", label: "column", input: "column" },
    { key: "where", label: "where (col:op:value,…)", input: "text", placeholder: "Age:ge:1" },
    { key: "symbol", label: "symbol", input: "text", placeholder: "*" },
  ],
  SuppressDuplicateRows: [
    { key: "key_columns", label: "key columns", input: "columns" },
    { key: "order_column", label: "order column", input: "column" },
  ],
  RecodeCategories: [
    { key: "column", label: "column", input: "column" },
    { key: "mapping", label: "mapping (old=new per line)", input: "pairs", placeholder: "H=Recovered\nN=Recovered" },
  ],
  TruncateDateTime: [{ key: "column", label: "column", input: "column" }],
  GeneralizeDatePeriod: [
    { key: "column", label: "column", input: "column" },
    { key: "period_days", label: "period (days)", input: "number" },
    { key: "anchor", label: "anchor (YYYY/MM/DD or dataset-min)", input: "text", placeholder: "dataset-min" },
  ],
  BinFixedWidth: [
    { key: "column", label: "column", input: "column" },
    { key: "width", label: "width", input: "number" },
    { key: "origin", label: "origin", input: "number", placeholder: "0" },
  ],
  BinQuantiles: [
    { key: "column", label: "column", input: "column" },
    { key: "q", label: "quantiles (q)", input: "number", placeholder: "4" },
  ],
  BinCustomRanges: [
    { key: "column", label: "column", input: "column" },
    { key: "edges", label: "edges (comma separated)", input: "numbers", placeholder: "0,16,30,40,120" },
  ],
  AddUniformIntegerNoise: [
    { key: "column", label: "column", input: "column" },
    { key: "lo", label: "lo", input: "number", placeholder: "-3" },
    { key: "hi", label: "hi", input: "number", placeholder: "3" },
  ],
  DropColumns: [{ key: "names", label: "columns", input: "columns" }],
  DeriveDuration: [
    { key: "start", label: "start column", input: "column" },
    { key: "end", label: "end column", input: "column" },
    { key: "new_name", label: "new column name", input: "text" },
    { key: "drop_sources", label: "drop source columns", input: "flag" },
  ],
};

const PERTURBATIVE = new Set(["AddUniformIntegerNoise"]);

export function renderTransform(root: HTMLElement, store: SessionStore): void {
  const state = store.get();
  if (!state.sessionId) {
    root.innerHTML = `<section class="panel"><p>Start a session first.</p></section>`;
    return;
  }
  const columns = currentColumns(state);
  const variant =
    root.querySelector<HTMLSelectElement>("#variant")?.value ?? "TruncateDateTime";
  const history = state.history
    .map(
      (record) => `
      <li>
        <code>${escapeHtml(record.step.variant)}</code>
        ${escapeHtml(JSON.stringify(record.step.params))}
        <span class="muted">→ ${record.records} records</span>
      </li>`,
    )
    .join("");

  root.innerHTML = `
    <section class="panel">
      <h2>Transform Studio</h2>
      <div class="row">
        <label class="stack"><span>step</span>
          <select id="variant">
            ${Object.keys(VARIANTS)
              .map(
                (name) =>
                  `<option value="${name}" ${name === variant ? "selected" : ""}>${name}${PERTURBATIVE.has(name) ? " (perturbative)" : ""}</option>`,
              )
              .join("")}
          </select>
        </label>
        <div id="params" class="row"></div>
        <label class="stack" id="seed-field" hidden><span>seed</span>
          <input id="param-seed" type="number" placeholder="random" />
        </label>
      </div>
      <div class="row">
        <button id="apply-step" ${state.busy ? "disabled" : ""}>Apply step</button>
        <button id="undo-button" ${state.busy || state.history.length === 0 ? "disabled" : ""}>Undo last step</button>
      </div>
      <h3>Applied steps (${state.history.length})</h3>
      <ol id="step-history">${history}</ol>
    </section>
  `;

  const paramsHost = root.querySelector<HTMLDivElement>("#params")!;
  const variantSelect = root.querySelector<HTMLSelectElement>("#variant")!;
  const seedField = root.querySelector<HTMLElement>("#seed-field")!;

  const renderParams = () => {
    const fields = VARIANTS[variantSelect.value];
    seedField.hidden = !PERTURBATIVE.has(variantSelect.value);
    paramsHost.innerHTML = fields
      .map((field) => {
        const id = `param-${field.key}`;
        if (field.input === "column") {
          return `<label class="stack"><span>${field.label}</span>
            <select id="${id}">${columns.map((c) => `<option>${escapeHtml(c)}</option>`).join("")}</select>
          </label>`;
        }
        if (field.input === "columns") {
          return `<label class="stack"><span>${field.label}</span>
            <select id="${id}" multiple size="4">${columns.map((c) => `<option>${escapeHtml(c)}</option>`).join("")}</select>
          </label>`;
        }
        if (field.input === "pairs") {
          return `<label class="stack"><span>${field.label}</span>
            <textarea id="${id}" rows="3" placeholder="${field.placeholder ?? ""}"></textarea>
          </label>`;
        }
        if (field.input === "flag") {
          return `<label class="stack"><span>${field.label}</span>
            <input id="${id}" type="checkbox" checked />
          </label>`;
        }
        const type = field.input === "number" ? "number" : "text";
        return `<label class="stack"><span>${field.label}</span>
          <input id="${id}" type="${type}" placeholder="${field.placeholder ?? ""}" />
        </label>`;
      })
      .join("");
  };
  renderParams();
  variantSelect.addEventListener("change", renderParams);

  root.querySelector("#apply-step")!.addEventListener("click", () => {
    const name = variantSelect.value;
    const params: Record<string, unknown> = {};
    for (const field of VARIANTS[name]) {
      const el = root.querySelector<HTMLElement>(`#param-${field.key}`)!;
      if (field.input === "column") {
        params[field.key] = (el as HTMLSelectElement).value;
      } else if (field.input === "columns") {
        params[field.key] = Array.from(
          (el as HTMLSelectElement).selectedOptions,
        ).map((o) => o.value);
      } else if (field.input === "number") {
        const raw = (el as HTMLInputElement).value || field.placeholder || "";
        if (raw !== "") params[field.key] = Number(raw);
      } else if (field.input === "numbers") {
        const raw = (el as HTMLInputElement).value || field.placeholder || "";
        params[field.key] = raw
          .split(",")
          .map((s) => Number(s.trim()))
          .filter((v) => Number.isFinite(v));
      } else if (field.input === "pairs") {
        const mapping: Record<string, string> = {};
        for (const line of (el as HTMLTextAreaElement).value.split("\n")) {
          const [from, to] = line.split("=", 2);
          if (from?.trim() && to !== undefined) mapping[from.trim()] = to.trim();
        }
        params[field.key] = mapping;
      } else if (field.input === "flag") {
        params[field.key] = (el as HTMLInputElement).checked;
      } else {
        const raw = (el as HTMLInputElement).value.trim();
        if (raw !== "") params[field.key] = raw;
      }
    }
    const step: TransformStepBody = { variant: name, params };
    if (PERTURBATIVE.has(name)) {
      const seedRaw = root.querySelector<HTMLInputElement>("#param-seed")!.value;
      if (seedRaw !== "") step.seed = Number(seedRaw);
    }
    void store.applyStep(step);
  });

  root.querySelector("#undo-button")!.addEventListener("click", () => {
    void store.undo();
  });
}
