// Thin typed client for the sdclab service. Every mutation returns the
// server's updated risk matrix, which the store adopts wholesale.

import type {
  Histogram,
  Report,
  RiskEntry,
  SchemaColumn,
  SessionResponse,
  StepResponse,
  SubsetRiskResponse,
  TransformStepBody,
  UploadResponse,
} from "./types";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    detail: string,
  ) {
    super(detail);
  }
}

async function parseOrThrow<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = await response.json();
      if (typeof body.detail === "string") detail = body.detail;
    } catch {
      // keep the status text
    }
    throw new ApiError(response.status, detail);
  }
  return (await response.json()) as T;
}

export class SdclabClient {
  constructor(readonly baseUrl: string = "") {}

  private url(path: string): string {
    return `${this.baseUrl}/v1${path}`;
  }

  async uploadDataset(csv: string, schema?: SchemaColumn[]): Promise<UploadResponse> {
    const response = await fetch(this.url("/datasets"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(schema ? { csv, schema } : { csv }),
    });
    return parseOrThrow(response);
  }

  async getSchema(datasetId: string): Promise<SchemaColumn[]> {
    return parseOrThrow(await fetch(this.url(`/datasets/${datasetId}/schema`)));
  }

  async getColumnHistogram(
    datasetId: string,
    column: string,
    bins = 10,
  ): Promise<Histogram> {
    return parseOrThrow(
      await fetch(
        this.url(
          `/datasets/${datasetId}/columns/${encodeURIComponent(column)}/histogram?bins=${bins}`,
        ),
      ),
    );
  }

  async createSession(
    datasetId: string,
    scenarios: string[][],
    benefitLevel = "M",
  ): Promise<SessionResponse> {
    const response = await fetch(this.url("/sessions"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({
        dataset_id: datasetId,
        scenarios,
        benefit_level: benefitLevel,
      }),
    });
    return parseOrThrow(response);
  }

  async applyStep(sessionId: string, step: TransformStepBody): Promise<StepResponse> {
    const response = await fetch(this.url(`/sessions/${sessionId}/steps`), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(step),
    });
    return parseOrThrow(response);
  }

  async undo(sessionId: string): Promise<StepResponse> {
    const response = await fetch(this.url(`/sessions/${sessionId}/undo`), {
      method: "POST",
    });
    return parseOrThrow(response);
  }

  async getRiskMatrix(sessionId: string): Promise<RiskEntry[]> {
    const body = await parseOrThrow<{ risk_matrix: RiskEntry[] }>(
      await fetch(this.url(`/sessions/${sessionId}/risk`)),
    );
    return body.risk_matrix;
  }

  async getSubsetRisk(
    sessionId: string,
    where: string,
    scenarioIndex: number,
  ): Promise<SubsetRiskResponse> {
    return parseOrThrow(
      await fetch(
        this.url(
          `/sessions/${sessionId}/subset-risk?where=${encodeURIComponent(where)}&scenario=${scenarioIndex}`,
        ),
      ),
    );
  }

  async getReport(sessionId: string): Promise<Report> {
    return parseOrThrow(await fetch(this.url(`/sessions/${sessionId}/report`)));
  }

  async getReportMarkdown(sessionId: string): Promise<string> {
    const response = await fetch(
      this.url(`/sessions/${sessionId}/report?format=markdown`),
    );
    if (!response.ok) throw new ApiError(response.status, response.statusText);
    return response.text();
  }

  async exportCsv(sessionId: string): Promise<string> {
    const response = await fetch(this.url(`/sessions/${sessionId}/export`));
    if (!response.ok) throw new ApiError(response.status, response.statusText);
    return response.text();
  }
}
