/** Job polling: 1 s interval with exponential backoff, capped. */

import type { ApiClient } from "./api.js";
import type { JobInfo } from "./types.js";

export interface PollOptions {
  intervalMs?: number;
  backoff?: number;
  maxIntervalMs?: number;
  onUpdate?: (job: JobInfo) => void;
  sleep?: (ms: number) => Promise<void>;
}

const defaultSleep = (ms: number) => new Promise<void>((resolve) => setTimeout(resolve, ms));

export async function pollJob(
  client: ApiClient,
  jobId: string,
  options: PollOptions = {},
): Promise<JobInfo> {
  const base = options.intervalMs ?? 1000;
  const backoff = options.backoff ?? 1.5;
  const cap = options.maxIntervalMs ?? 10_000;
  const sleep = options.sleep ?? defaultSleep;
  let wait = base;
  for (;;) {
    const job = await client.getJob(jobId);
    options.onUpdate?.(job);
    if (job.state === "done" || job.state === "error") return job;
    await sleep(wait);
    wait = Math.min(cap, wait * backoff);
  }
}
