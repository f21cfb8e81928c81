// Session store: holds exactly what the service returned, plus navigation.
// Optimistic updates are deliberately absent; every mutation waits for the
// service response and adopts its risk matrix verbatim.

import { ApiError, SdclabClient } from "./api";
import type {
  AttributeClass,
  Report,
  RiskEntry,
  SchemaColumn,
  TransformStepBody,
} from "./types";

export type Screen =
  | "upload"
  | "classify"
  | "scenarios"
  | "transform"
  | "dashboard"
  | "utility"
  | "report";

export interface StepRecord {
  step: TransformStepBody;
  records: number;
  riskMatrix: RiskEntry[];
}

export interface UiSessionState {
  screen: Screen;
  busy: boolean;
  error: string | null;
  datasetId: string | null;
  records: number;
  schema: SchemaColumn[];
  sessionId: string | null;
  scenarios: string[][];
  baselineMatrix: RiskEntry[];
  riskMatrix: RiskEntry[];
  history: StepRecord[];
  report: Report | null;
}

/** Attribute classes as the session currently sees them: the uploaded
 * schema overridden by every Classify step in the applied history. */
export function effectiveClasses(
  state: UiSessionState,
): Record<string, AttributeClass> {
  const classes: Record<string, AttributeClass> = {};
  for (const column of state.schema) classes[column.name] = column.class;
  for (const record of state.history) {
    if (record.step.variant !== "Classify") continue;
    const assignments = record.step.params.assignments as
      | Record<string, AttributeClass>
      | undefined;
    Object.assign(classes, assignments ?? {});
  }
  return classes;
}

/** Column names as the session currently sees them (drops and derivations
 * from the applied history folded in). Display-only bookkeeping. */
export function currentColumns(state: UiSessionState): string[] {
  let columns = state.schema.map((c) => c.name);
  for (const record of state.history) {
    const params = record.step.params as Record<string, unknown>;
    if (record.step.variant === "DropColumns") {
      const names = (params.names as string[]) ?? [];
      columns = columns.filter((c) => !names.includes(c));
    } else if (record.step.variant === "DeriveDuration") {
      if (params.drop_sources) {
        columns = columns.filter(
          (c) => c !== params.start && c !== params.end,
        );
      }
      columns.push(params.new_name as string);
    }
  }
  return columns;
}

const INITIAL: UiSessionState = {
  screen: "upload",
  busy: false,
  error: null,
  datasetId: null,
  records: 0,
  schema: [],
  sessionId: null,
  scenarios: [],
  baselineMatrix: [],
  riskMatrix: [],
  history: [],
  report: null,
};

type Listener = (state: UiSessionState) => void;

export class SessionStore {
  private state: UiSessionState = { ...INITIAL };
  private listeners: Listener[] = [];

  constructor(readonly client: SdclabClient) {}

  get(): UiSessionState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private set(patch: Partial<UiSessionState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
  }

  goTo(screen: Screen): void {
    this.set({ screen });
  }

  private async guarded<T>(work: () => Promise<T>): Promise<T | undefined> {
    this.set({ busy: true, error: null });
    try {
      return await work();
    } catch (err) {
      const message =
        err instanceof ApiError ? `${err.status}: ${err.message}` : String(err);
      this.set({ error: message });
      return undefined;
    } finally {
      this.set({ busy: false });
    }
  }

  async uploadCsv(csv: string, schema?: SchemaColumn[]): Promise<void> {
    await this.guarded(async () => {
      const uploaded = await this.client.uploadDataset(csv, schema);
      const fullSchema = await this.client.getSchema(uploaded.dataset_id);
      this.set({
        datasetId: uploaded.dataset_id,
        records: uploaded.records,
        schema: fullSchema,
        sessionId: null,
        scenarios: [],
        baselineMatrix: [],
        riskMatrix: [],
        history: [],
        report: null,
        screen: "classify",
      });
    });
  }

  async startSession(scenarios: string[][], benefitLevel = "M"): Promise<void> {
    const { datasetId } = this.state;
    if (!datasetId) return;
    await this.guarded(async () => {
      const session = await this.client.createSession(
        datasetId,
        scenarios,
        benefitLevel,
      );
      this.set({
        sessionId: session.session_id,
        scenarios,
        records: session.records,
        baselineMatrix: session.risk_matrix,
        riskMatrix: session.risk_matrix,
        history: [],
        report: null,
      });
    });
  }

  /** Classification rides on the session as an explicit Classify step. */
  async applyClassification(
    assignments: Record<string, AttributeClass>,
  ): Promise<void> {
    await this.applyStep({ variant: "Classify", params: { assignments } });
    if (!this.state.error && this.state.datasetId) {
      // baseline matrix is before classification; recompute it as the
      // current matrix so later undo comparisons stay meaningful
      this.set({ baselineMatrix: this.state.riskMatrix });
    }
  }

  async applyStep(step: TransformStepBody): Promise<void> {
    const { sessionId } = this.state;
    if (!sessionId) return;
    await this.guarded(async () => {
      const response = await this.client.applyStep(sessionId, step);
      this.set({
        records: response.records,
        riskMatrix: response.risk_matrix,
        history: [
          ...this.state.history,
          {
            step,
            records: response.records,
            riskMatrix: response.risk_matrix,
          },
        ],
        report: null,
      });
    });
  }

  async undo(): Promise<void> {
    const { sessionId } = this.state;
    if (!sessionId) return;
    await this.guarded(async () => {
      const response = await this.client.undo(sessionId);
      this.set({
        records: response.records,
        riskMatrix: response.risk_matrix,
        history: this.state.history.slice(0, -1),
        report: null,
      });
    });
  }

  /** Scenario changes rebuild the session and replay the step history. */
  async setScenarios(scenarios: string[][]): Promise<void> {
    const previous = this.state.history.map((h) => h.step);
    await this.startSession(scenarios);
    for (const step of previous) {
      if (this.state.error) break;
      await this.applyStep(step);
    }
  }

  async loadReport(): Promise<void> {
    const { sessionId } = this.state;
    if (!sessionId) return;
    await this.guarded(async () => {
      this.set({ report: await this.client.getReport(sessionId) });
    });
  }

  /** Rebuild the dashboard for an existing session purely from GET endpoints. */
  async rehydrate(sessionId: string): Promise<void> {
    await this.guarded(async () => {
      const report = await this.client.getReport(sessionId);
      const matrix = await this.client.getRiskMatrix(sessionId);
      this.set({
        sessionId,
        scenarios: report.baseline.risk_matrix.map((e) => e.scenario),
        records: report.final.records,
        baselineMatrix: report.baseline.risk_matrix,
        riskMatrix: matrix,
        history: report.steps.map((s) => ({
          step: {
            variant: s.step.variant,
            params: s.step.params,
            seed: s.step.seed,
          },
          records: s.records,
          riskMatrix: s.risk_matrix_after,
        })),
        report,
        screen: "dashboard",
      });
    });
  }
}
