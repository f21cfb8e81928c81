import { readFileSync } from "node:fs";
import { inject } from "vitest";

import { SdclabClient } from "../src/api";
import { SessionStore } from "../src/state";
import type { SchemaColumn } from "../src/types";

export function testClient(): SdclabClient {
  return new SdclabClient(inject("baseUrl"));
}

export function loadFixture(): { csv: string; schema: SchemaColumn[] } {
  return {
    csv: readFileSync(inject("csvPath"), "utf-8"),
    schema: JSON.parse(readFileSync(inject("schemaPath"), "utf-8")),
  };
}

export function freshStore(): SessionStore {
  return new SessionStore(testClient());
}

export async function waitFor(
  condition: () => boolean,
  timeoutMs = 30_000,
  context?: () => string,
): Promise<void> {
  const start = Date.now();
  while (!condition()) {
    if (Date.now() - start > timeoutMs) {
      const extra = context ? `: ${context()}` : "";
      throw new Error(`waitFor timed out${extra}`);
    }
    await new Promise((resolve) => setTimeout(resolve, 25));
  }
}

export function settled(store: SessionStore): () => boolean {
  return () => !store.get().busy;
}
