// Wire types for the sdclab /v1 API. The UI renders these verbatim and
// never derives risk numbers of its own.

export type ValueKind = "Numeric" | "Categorical" | "Date" | "DateTime" | "Identifier";

export type AttributeClass =
  | "DirectIdentifier"
  | "QuasiIdentifier"
  | "Sensitive"
  | "Insensitive";

export interface SchemaColumn {
  name: string;
  kind: ValueKind;
  class: AttributeClass;
  missing_tokens: string[];
}

export interface UploadResponse {
  dataset_id: string;
  records: number;
  columns: string[];
}

export interface KAnonymityEntry {
  scenario: string[];
  status: "ok";
  metric: "KAnonymity";
  risk_percent: number;
  unique_count: number;
  k_histogram: Record<string, number>;
  min_k: number;
  records: number;
}

export interface LinkageEntry {
  scenario: string[];
  status: "ok";
  metric: "RecordLinkage";
  risk_percent: number;
  total_match_percent: number;
  correct_match_percent: number;
  false_match_percent: number;
  ambiguous_percent: number;
  margin_of_error_percent: number;
  records: number;
}

export interface NotApplicableEntry {
  scenario: string[];
  status: "not-applicable";
  reason: string;
}

export type RiskEntry = KAnonymityEntry | LinkageEntry | NotApplicableEntry;

export interface SessionResponse {
  session_id: string;
  records: number;
  risk_matrix: RiskEntry[];
}

export interface StepResponse {
  records: number;
  steps_applied: number;
  risk_matrix: RiskEntry[];
}

export interface SubsetRiskOk extends Omit<KAnonymityEntry, "status"> {
  status: "ok";
  where: string;
}

export interface SubsetRiskEmpty {
  status: "empty";
  reason: string;
  where: string;
}

export type SubsetRiskResponse = SubsetRiskOk | SubsetRiskEmpty;

export interface HistogramBin {
  lo: string;
  hi: string;
  count: number;
}

export interface NumericHistogram {
  column: string;
  kind: "numeric";
  missing: number;
  bins: HistogramBin[];
}

export interface CategoryFrequencies {
  column: string;
  kind: "categorical";
  missing: number;
  categories: { value: string; count: number }[];
}

export type Histogram = NumericHistogram | CategoryFrequencies;

export interface TransformStepBody {
  variant: string;
  params: Record<string, unknown>;
  seed?: number;
}

export interface ReportStep {
  index: number;
  step: { variant: string; params: Record<string, unknown>; seed?: number };
  affected: Record<string, number>;
  records: number;
  risk_matrix_before: RiskEntry[];
  risk_matrix_after: RiskEntry[];
  subset_risks: unknown[];
  utility: { column: string; before: Histogram; after: Histogram }[];
}

export interface Report {
  records_in: number;
  baseline: { records: number; risk_matrix: RiskEntry[] };
  steps: ReportStep[];
  final: {
    records: number;
    risk_matrix: RiskEntry[];
    min_k: number | null;
    pass: boolean;
    risk_level: "L" | "M" | "H" | "VH";
    benefit_level: "L" | "M" | "H" | "VH";
    decision: "Release" | "ReleaseWithControls" | "DoNotRelease";
    direct_identifier_warnings: string[];
  };
  five_safes: { stage: string; note: string }[];
}
