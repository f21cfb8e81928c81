import { describe, expect, it } from "vitest";

import { mountApp } from "../src/main";
import { currentColumns, effectiveClasses } from "../src/state";
import { freshStore, loadFixture, waitFor } from "./helpers";

const SCENARIOS = [
  ["Age", "Gender"],
  ["Age", "Gender", "Outcome"],
];

async function startedStore() {
  const store = freshStore();
  const { csv, schema } = loadFixture();
  await store.uploadCsv(csv, schema);
  await store.startSession(SCENARIOS);
  expect(store.get().error).toBeNull();
  return store;
}

describe("session store", () => {
  it("tracks classification and column bookkeeping from the applied history", async () => {
    const store = await startedStore();
    await store.applyClassification({ PlaceOfInfection: "Sensitive" });
    expect(effectiveClasses(store.get()).PlaceOfInfection).toBe("Sensitive");

    await store.applyStep({
      variant: "DropColumns",
      params: { names: ["AgeDay", "AgeMonth"] },
    });
    await store.applyStep({
      variant: "DeriveDuration",
      params: {
        start: "DateOfHospitalisation",
        end: "DateOfDischarge",
        new_name: "HospitalisationDays",
        drop_sources: true,
      },
    });
    const columns = currentColumns(store.get());
    expect(columns).toContain("HospitalisationDays");
    expect(columns).not.toContain("AgeDay");
    expect(columns).not.toContain("DateOfHospitalisation");
  });

  it("surfaces service precondition text verbatim", async () => {
    const store = await startedStore();
    await store.applyStep({
      variant: "TruncateDateTime",
      params: { column: "Age" },
    });
    expect(store.get().error).toContain("expected DateTime");
    expect(store.get().history).toHaveLength(0);
  });

  it("scenario changes rebuild the session and replay applied steps", async () => {
    const store = await startedStore();
    await store.applyStep({
      variant: "BinFixedWidth",
      params: { column: "Age", width: 5, origin: 0 },
    });
    const riskBefore = store.get().riskMatrix[0];
    await store.setScenarios([["Age", "Gender"]]);
    expect(store.get().error).toBeNull();
    expect(store.get().history).toHaveLength(1);
    expect(store.get().riskMatrix).toHaveLength(1);
    expect(store.get().riskMatrix[0]).toEqual(riskBefore);
  });

  it("rehydrates the same dashboard from GET endpoints only", async () => {
    const store = await startedStore();
    await store.applyStep({
      variant: "TruncateDateTime",
      params: { column: "DateOfFirstPositiveLabResult" },
    });
    await store.applyStep({
      variant: "BinFixedWidth",
      params: { column: "Age", width: 5, origin: 0 },
    });
    const sessionId = store.get().sessionId!;
    const original = store.get();

    document.body.innerHTML = `<div id="app"></div>`;
    const host = document.querySelector<HTMLElement>("#app")!;
    window.location.hash = `session=${sessionId}`;
    const revived = freshStore();
    mountApp(host, revived);
    await waitFor(
      () => revived.get().sessionId === sessionId && !revived.get().busy,
    );

    expect(revived.get().riskMatrix).toEqual(original.riskMatrix);
    expect(revived.get().history.map((h) => h.step.variant)).toEqual(
      original.history.map((h) => h.step.variant),
    );
    expect(revived.get().screen).toBe("dashboard");
    const cells = host.querySelectorAll("[data-risk]");
    expect(cells.length).toBe(original.riskMatrix.length);
  });
});
