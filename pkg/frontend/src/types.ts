// Payload shapes of the review service API.

export interface Project {
  project_id: string;
  name: string;
  created: string;
  updated: string;
  extraction: unknown;
  model: TrainingSummary | null;
}

export interface SeedRecord {
  text: string;
  intent_id: string;
  scenario: string;
  phrase: PhraseRecord | null;
}

export interface PhraseRecord {
  verb: string;
  object: string[];
  scenario: string;
}

export interface OperationRecord {
  path: string;
  method: string;
  operation_id: string | null;
  summary: string | null;
  description: string | null;
  intent_id: string;
  seeds: SeedRecord[];
}

export type CandidateStatus = "pending" | "accepted" | "rejected" | "auto_selected";

export interface CandidateRecord {
  candidate_id: string;
  text: string;
  generator_id: string;
  seed_text: string;
  intent_id: string;
  similarity_to_seed: number | null;
  status: CandidateStatus;
  selection_rank?: number;
  delta_ngram?: number;
}

export type Decision = "accepted" | "rejected";

export interface ReviewCounts {
  accepted: number;
  rejected: number;
  auto_selected: number;
  pending: number;
}

export interface TrainingSummary {
  intents: Record<string, number>;
  n_examples: number;
  trained_at: string;
}

export interface RankedIntent {
  intent_id: string;
  confidence: number;
}

export interface Classification {
  intent_id: string;
  confidence: number;
  ranked: RankedIntent[];
  operation: { method: string; path: string } | null;
}

export interface GenerateResult {
  selected: CandidateRecord[];
  persisted: number;
  traces: unknown[];
  failures: { generator_id: string; code: string; detail: string }[];
}

export interface ApiError {
  error: string;
  detail: string;
}
