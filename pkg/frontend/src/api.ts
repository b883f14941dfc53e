// Typed client for the review service. Every server interaction in the app
// goes through this module, so the documented REST routes are the only way
// the UI can touch state.

import type {
  CandidateRecord,
  Classification,
  Decision,
  GenerateResult,
  OperationRecord,
  Project,
  ReviewCounts,
  TrainingSummary,
} from "./types";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ServiceError extends Error {
  constructor(
    public readonly code: string,
    public readonly detail: string,
    public readonly status: number,
  ) {
    super(`${code}: ${detail}`);
  }
}

async function parseError(response: Response): Promise<ServiceError> {
  try {
    const body = (await response.json()) as { error?: string; detail?: string };
    return new ServiceError(
      body.error ?? "http_error",
      body.detail ?? response.statusText,
      response.status,
    );
  } catch {
    return new ServiceError("http_error", response.statusText, response.status);
  }
}

export class ApiClient {
  constructor(
    private readonly fetchImpl: FetchLike,
    private readonly base: string = "",
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(this.base + path, init);
    if (!response.ok) {
      throw await parseError(response);
    }
    return (await response.json()) as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  listProjects(): Promise<{ projects: Project[] }> {
    return this.request("/api/projects");
  }

  createProject(name: string): Promise<Project> {
    return this.post("/api/projects", { name });
  }

  getProject(projectId: string): Promise<Project> {
    return this.request(`/api/projects/${projectId}`);
  }

  async ingestSpec(projectId: string, raw: string): Promise<{ operations: number; seeds: number }> {
    const response = await this.fetchImpl(`${this.base}/api/projects/${projectId}/spec`, {
      method: "POST",
      body: raw,
    });
    if (!response.ok) {
      throw await parseError(response);
    }
    return (await response.json()) as { operations: number; seeds: number };
  }

  operations(projectId: string): Promise<{ operations: OperationRecord[] }> {
    return this.request(`/api/projects/${projectId}/operations`);
  }

  generate(projectId: string, operations?: string[]): Promise<GenerateResult> {
    return this.post(`/api/projects/${projectId}/generate`, operations ? { operations } : {});
  }

  candidates(
    projectId: string,
    filter: { operation?: string; status?: string } = {},
  ): Promise<{ candidates: CandidateRecord[] }> {
    const params = new URLSearchParams();
    if (filter.operation) params.set("operation", filter.operation);
    if (filter.status) params.set("status", filter.status);
    const query = params.toString();
    return this.request(`/api/projects/${projectId}/candidates${query ? `?${query}` : ""}`);
  }

  review(
    projectId: string,
    decisions: { candidate_id: string; decision: Decision; actor?: string }[],
  ): Promise<ReviewCounts> {
    return this.post(`/api/projects/${projectId}/review`, { decisions });
  }

  addCandidate(
    projectId: string,
    body: { intent_id: string; text: string; seed_text?: string; actor?: string },
  ): Promise<CandidateRecord> {
    return this.post(`/api/projects/${projectId}/candidates`, body);
  }

  train(projectId: string): Promise<TrainingSummary> {
    return this.post(`/api/projects/${projectId}/train`, {});
  }

  classify(projectId: string, text: string): Promise<Classification> {
    return this.post(`/api/projects/${projectId}/classify`, { text });
  }

  exportUrl(projectId: string, format: "skill" | "csv"): string {
    return `${this.base}/api/projects/${projectId}/export?format=${format}`;
  }
}
