/** Shared types mirroring the review API's JSON payloads. */

export interface WindowRef {
  doc_id: string;
  disease_id: string;
  window_words: number;
}

export interface TaskLabel {
  identification: "yes" | "no";
  disease: string;
  annotator_id: string;
  labeled_at?: string;
}

export interface TaskView {
  task_id: string;
  backend_id: string;
  context_size: number;
  window: WindowRef;
  window_text: string | null;
  raw_text: string;
  status: "pending" | "labeled";
  label: TaskLabel | null;
}

export interface TaskPage {
  tasks: TaskView[];
  total: number;
  page: number;
  page_size: number;
}

export interface ComplianceRow {
  backend_id: string;
  total: number;
  failures: number;
  compliance_rate: number;
}

export interface Stats {
  run_id: string;
  compliance: ComplianceRow[];
  overall: ComplianceRow | null;
  queue: { pending: number; labeled: number };
  coverage: Record<string, { complete: number; total: number }>;
}

export interface DiseaseClass {
  disease_id: string;
  label: string;
  synonyms: string[];
}

export interface Meta {
  run_id: string;
  classes: DiseaseClass[];
  label_space: string[];
}

export interface TaskFilters {
  backend?: string;
  context?: number;
  page?: number;
  pageSize?: number;
}
