import type { SessionStore } from "../state";
import type { SchemaColumn } from "../types";

export function renderUpload(root: HTMLElement, store: SessionStore): void {
  const state = store.get();
  root.innerHTML = `
    <section class="panel">
      <h2>Upload &amp; Schema</h2>
      <p>Paste or choose a CSV (header row required). The schema side-car is
      optional; without it, column kinds are inferred and every attribute
      starts as Insensitive.</p>
      <label class="stack">
        <span>CSV</span>
        <input id="csv-file" type="file" accept=".csv,text/csv" />
        <textarea id="csv-text" rows="8" placeholder="Age,Gender\n67,M"></textarea>
      </label>
      <label class="stack">
        <span>Schema side-car JSON (optional)</span>
        <input id="schema-file" type="file" accept=".json,application/json" />
        <textarea id="schema-text" rows="4" placeholder='[{"name":"Age","kind":"Numeric","class":"QuasiIdentifier"}]'></textarea>
      </label>
      <button id="upload-button" ${state.busy ? "disabled" : ""}>Upload</button>
      ${state.datasetId ? `<p class="ok">Dataset ${state.datasetId}: ${state.records} records.</p>` : ""}
    </section>
  `;

  const csvText = root.querySelector<HTMLTextAreaElement>("#csv-text")!;
  const schemaText = root.querySelector<HTMLTextAreaElement>("#schema-text")!;
  wireFilePicker(root.querySelector("#csv-file")!, csvText);
  wireFilePicker(root.querySelector("#schema-file")!, schemaText);

  root.querySelector("#upload-button")!.addEventListener("click", () => {
    let schema: SchemaColumn[] | undefined;
    const schemaRaw = schemaText.value.trim();
    if (schemaRaw) {
      try {
        schema = JSON.parse(schemaRaw) as SchemaColumn[];
      } catch {
        window.alert("schema side-car is not valid JSON");
        return;
      }
    }
    void store.uploadCsv(csvText.value, schema);
  });
}

function wireFilePicker(input: HTMLInputElement, target: HTMLTextAreaElement): void {
  input.addEventListener("change", () => {
    const file = input.files?.[0];
    if (!file) return;
    void file.text().then((text) => {
      target.value = text;
    });
  });
}
