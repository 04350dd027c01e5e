/** Thin typed client for /api/v1. The fetch function is injected so tests
 * can mock the network layer and assert that no number is invented
 * client-side. */

import type {
  JobInfo,
  ModelDocument,
  ModelInfo,
  ScenarioDocument,
  SolveResult,
  SweepResult,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(public status: number, public body: unknown) {
    super(`HTTP ${status}: ${JSON.stringify(body)}`);
  }
}

export class ApiClient {
  constructor(
    private base: string = "",
    private fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(this.base + "/api/v1" + path, init);
    let body: unknown = null;
    try {
      body = await response.json();
    } catch {
      body = null;
    }
    if (!response.ok) throw new ApiError(response.status, body);
    return body as T;
  }

  health(): Promise<{ status: string }> {
    return this.request("/health");
  }

  listModels(): Promise<{ models: ModelInfo[] }> {
    return this.request("/models");
  }

  getModel(id: string): Promise<ModelDocument> {
    return this.request(`/models/${id}`);
  }

  putScenario(id: string, doc: ScenarioDocument, overwrite = false): Promise<{ id: string }> {
    return this.request(`/scenarios/${id}`, {
      method: overwrite ? "PUT" : "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(doc),
    });
  }

  getScenario(id: string): Promise<ScenarioDocument> {
    return this.request(`/scenarios/${id}`);
  }

  deleteScenario(id: string): Promise<unknown> {
    return this.request(`/scenarios/${id}`, { method: "DELETE" });
  }

  submitJob(body: {
    kind: "solve" | "sweep" | "roll";
    model_id: string;
    scenario_id?: string | null;
    options?: Record<string, unknown>;
  }): Promise<{ job_id: string }> {
    return this.request("/jobs", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  getJob(id: string): Promise<JobInfo> {
    return this.request(`/jobs/${id}`);
  }

  getResult<T = SolveResult | SweepResult>(id: string): Promise<T> {
    return this.request(`/jobs/${id}/result`);
  }

  cancelJob(id: string): Promise<unknown> {
    return this.request(`/jobs/${id}`, { method: "DELETE" });
  }
}
