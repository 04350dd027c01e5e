/** Browser bootstrap: wires the editor, jobs, and dashboards together.
 *
 * State is a single ViewState object; every mutation goes through the draft
 * state machine in editor.ts, and every number on screen comes from a
 * service response.
 */

import { ApiClient } from "./api.js";
import {
  canceledPanel,
  cellScenario,
  delayedPanel,
  heatmap,
  kpiSummary,
  procurementOverlay,
  seriesPanel,
} from "./dashboard.js";
import { Draft, emptyDraft, fromDocument, toDocument, validate } from "./editor.js";
import { pollJob } from "./poll.js";
import { previewProfile } from "./profile.js";
import { el, emptyNote, heatmapSvg, lineChart, overlayChart, table } from "./render.js";
import type { ModelDocument, SolveResult, SweepResult } from "./types.js";

interface ViewState {
  modelId: string | null;
  model: ModelDocument | null;
  draft: Draft;
  activeJobs: string[];
  results: Record<string, SolveResult | SweepResult>;
  baseline: SolveResult | null;
}

const state: ViewState = {
  modelId: null,
  model: null,
  draft: emptyDraft(),
  activeJobs: [],
  results: {},
  baseline: null,
};

const client = new ApiClient("");

function mount(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing mount point #${id}`);
  node.replaceChildren();
  return node;
}

function renderEditor(): void {
  const root = mount("editor");
  if (!state.model) {
    root.append(emptyNote("Scenario editor", "Load a model to start editing."));
    return;
  }
  const problems = validate(state.draft, state.model);
  root.append(
    table(
      ["field", "message"],
      problems.map((p) => [p.field, p.message]),
      problems.length ? "Fix before submitting" : "Draft is valid",
    ),
  );
  state.draft.events.forEach((event, k) => {
    const preview = previewProfile(state.model as ModelDocument, event);
    if (preview) {
      root.append(
        lineChart(
          [
            { key: "nominal", values: preview.nominal },
            { key: "disrupted", values: preview.disrupted },
          ],
          `event ${k}: ${event.target.kind}`,
        ),
      );
    }
  });
}

function renderResult(result: SolveResult): void {
  const root = mount("results");
  root.append(table(["kpi", "value"], kpiSummary(result).map((r) => [r.name, r.value]), "KPIs"));
  const delayed = delayedPanel(result);
  root.append(
    delayed.length
      ? lineChart(delayed, "Outstanding late material")
      : emptyNote("Outstanding late material", "No late deliveries."),
  );
  const canceled = canceledPanel(result);
  root.append(
    canceled.length
      ? table(["material", "customer", "period"],
              canceled.map((c) => [c.material, c.customer, c.period]), "Canceled orders")
      : emptyNote("Canceled orders", "No cancellations."),
  );
  for (const family of ["inventory", "production", "procurement", "shipments_in"] as const) {
    const rows = seriesPanel(result, family);
    if (rows.length) root.append(lineChart(rows, family));
  }
  if (state.baseline && state.baseline !== result) {
    root.append(overlayChart(procurementOverlay(state.baseline, result), "Cumulative procurement"));
  }
}

function renderSweep(result: SweepResult): void {
  const root = mount("sweep");
  root.append(
    heatmapSvg(heatmap(result, "profit"), (i, j) => {
      const scenario = cellScenario(result, i, j);
      if (scenario) {
        state.draft = fromDocument(scenario); // the drill-down becomes the next draft
        renderEditor();
      }
    }),
  );
}

async function submitSolve(): Promise<void> {
  if (!state.modelId || !state.model) return;
  const problems = validate(state.draft, state.model);
  if (problems.length) {
    renderEditor();
    return;
  }
  const scenarioId = `draft-${Date.now()}`;
  await client.putScenario(scenarioId, toDocument(state.draft));
  const { job_id } = await client.submitJob({
    kind: "solve",
    model_id: state.modelId,
    scenario_id: scenarioId,
  });
  state.activeJobs.push(job_id);
  const job = await pollJob(client, job_id);
  if (job.state === "done") {
    const result = await client.getResult<SolveResult>(job_id);
    state.results[job_id] = result;
    if (!state.baseline) state.baseline = result;
    renderResult(result);
  }
}

async function boot(): Promise<void> {
  const models = await client.listModels();
  const picker = mount("models");
  for (const info of models.models) {
    const button = el("button", {}, [`${info.id} (${info.periods} periods)`]);
    button.addEventListener("click", async () => {
      state.modelId = info.id;
      state.model = await client.getModel(info.id);
      state.draft = emptyDraft(`what-if on ${info.id}`);
      renderEditor();
    });
    picker.append(button);
  }
  const solveButton = el("button", { class: "primary" }, ["Solve draft"]);
  solveButton.addEventListener("click", () => void submitSolve());
  picker.append(solveButton);
}

if (typeof document !== "undefined" && document.getElementById("models")) {
  void boot();
}

export { state, renderEditor, renderResult, renderSweep, submitSolve };
