import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import { pollJob } from "../src/poll.js";
import type { JobInfo } from "../src/types.js";

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

function recordingClient(routes: Record<string, unknown>) {
  const calls: Array<{ url: string; method: string; body: unknown }> = [];
  const client = new ApiClient("", async (url, init) => {
    calls.push({
      url,
      method: init?.method ?? "GET",
      body: init?.body ? JSON.parse(String(init.body)) : null,
    });
    const hit = routes[`${init?.method ?? "GET"} ${url}`];
    if (hit === undefined) return jsonResponse({ error: "unknown id" }, 404);
    return jsonResponse(hit);
  });
  return { client, calls };
}

describe("api client", () => {
  it("targets the documented endpoints with the right verbs", async () => {
    const { client, calls } = recordingClient({
      "GET /api/v1/health": { status: "ok" },
      "GET /api/v1/models": { models: [] },
      "POST /api/v1/scenarios/s1": { id: "s1" },
      "PUT /api/v1/scenarios/s1": { id: "s1" },
      "DELETE /api/v1/scenarios/s1": { id: "s1", deleted: true },
      "POST /api/v1/jobs": { job_id: "job-1" },
      "GET /api/v1/jobs/job-1": { id: "job-1", state: "done" },
      "GET /api/v1/jobs/job-1/result": { status: "optimal" },
      "DELETE /api/v1/jobs/job-1": { id: "job-1", canceling: true },
    });
    await client.health();
    await client.listModels();
    const doc = { schema_version: 1 as const, label: "", events: [], orders: [] };
    await client.putScenario("s1", doc);
    await client.putScenario("s1", doc, true);
    await client.deleteScenario("s1");
    await client.submitJob({ kind: "solve", model_id: "m" });
    await client.getJob("job-1");
    await client.getResult("job-1");
    await client.cancelJob("job-1");
    expect(calls.map((c) => `${c.method} ${c.url}`)).toEqual([
      "GET /api/v1/health",
      "GET /api/v1/models",
      "POST /api/v1/scenarios/s1",
      "PUT /api/v1/scenarios/s1",
      "DELETE /api/v1/scenarios/s1",
      "POST /api/v1/jobs",
      "GET /api/v1/jobs/job-1",
      "GET /api/v1/jobs/job-1/result",
      "DELETE /api/v1/jobs/job-1",
    ]);
    expect(calls[5].body).toEqual({ kind: "solve", model_id: "m" });
  });

  it("raises ApiError with the status and server body", async () => {
    const { client } = recordingClient({});
    await expect(client.getModel("ghost")).rejects.toThrowError(ApiError);
    try {
      await client.getModel("ghost");
    } catch (error) {
      expect((error as ApiError).status).toBe(404);
      expect((error as ApiError).body).toEqual({ error: "unknown id" });
    }
  });
});

describe("job polling", () => {
  it("polls until a terminal state with backoff", async () => {
    const states: JobInfo["state"][] = ["queued", "running", "running", "done"];
    let call = 0;
    const client = new ApiClient("", async () =>
      jsonResponse({
        id: "job-9",
        kind: "solve",
        state: states[Math.min(call++, states.length - 1)],
        submitted_at: "",
        progress: 0,
        result_ref: null,
        diagnostic: "",
      }),
    );
    const waits: number[] = [];
    const job = await pollJob(client, "job-9", {
      intervalMs: 10,
      backoff: 2,
      maxIntervalMs: 25,
      sleep: async (ms) => {
        waits.push(ms);
      },
    });
    expect(job.state).toBe("done");
    expect(waits).toEqual([10, 20, 25]); // capped exponential backoff
    expect(call).toBe(4);
  });
});
