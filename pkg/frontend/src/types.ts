/** Wire types mirroring the retrieval service's JSON bodies. */

export interface Weights {
  w_text: number;
  w_cit: number;
  w_court: number;
}

export interface ScoreBreakdown {
  text_sim: number;
  citation: number;
  court: number;
  fused: number;
}

export interface RankedResult {
  rank: number;
  case_id: string;
  opinion_id: string;
  case_name: string;
  year: number;
  court_id: string;
  scores: ScoreBreakdown;
  best_chunk: string;
  excerpts: Record<string, string[]>;
}

export interface ExpansionEntry {
  rank: number;
  case_id: string;
  source_case_id: string;
  score: number;
}

export interface QueryResponse {
  k: number;
  n: number;
  weights: Weights;
  factor_mode: string;
  factor_filter: string | null;
  results: RankedResult[];
  expansions: ExpansionEntry[];
  timing: Record<string, number>;
  prompts?: string[];
}

export interface QueryRequestBody {
  text: string;
  weights: Weights;
  k: number;
  n: number;
  factor_mode: FactorMode;
}

export type FactorMode = "whole_query" | "per_factor";

export interface CorpusStats {
  case_count: number;
  opinion_count: number;
  court_count: number;
  year_min: number | null;
  year_max: number | null;
}
