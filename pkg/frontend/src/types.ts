/** Documents exchanged with the HTTP service (stable keys, shared with the CLI). */

export interface ObjectiveInfo {
  name: string;
  direction: "minimize" | "maximize";
  display_unit: string | null;
}

export interface CreateResponse {
  id: string;
  created_at: string;
  n_models: number;
  n_objectives: number;
  objectives: string[];
}

export interface SelectionDoc {
  kind: "selection";
  criterion: { method: string; p: number | "inf"; weights: number[] };
  constraints: string[];
  objectives: string[];
  model_id: string;
  model_index: number;
  criterion_value: number;
  raw_values: number[];
  normalized_values: number[];
  top_percent: number[];
  is_pareto_optimal: boolean;
  tie_broken: boolean;
}

export interface SweepEntryDoc {
  alpha_lo: number;
  alpha_hi: number;
  alpha_mid: number;
  model_id: string;
  model_index: number;
  n_grid_points: number;
  criterion_value: number;
  raw_values: number[];
  normalized_values: number[];
}

export interface SweepDoc {
  kind: "sweep";
  method: string;
  p: number | "inf";
  grid_size: number;
  focus_objective: number;
  objectives: string[];
  entries: SweepEntryDoc[];
}

export interface FrontDoc {
  kind: "front";
  objectives: string[];
  indices: number[];
  model_ids: string[];
  raw_values: number[][];
  rank_values: number[][];
}

export interface NormalizedDoc {
  kind: "normalized";
  method: string;
  objectives: string[];
  model_ids: string[];
  values: number[][];
  raw_values: number[][];
  warnings: string[];
}

export interface ServiceErrorBody {
  error: { code: string; message: string };
}
