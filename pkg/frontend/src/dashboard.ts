/** Result dashboards as pure data builders.
 *
 * Everything here reshapes service payloads for plotting; no KPI is
 * recomputed client-side (cumulative curves are running sums of payload
 * series, which is chart presentation, not optimization math).
 */

import type { Series, SolveResult, SweepCell, SweepResult, ScenarioDocument } from "./types.js";

export interface SeriesRow {
  key: string;
  values: number[];
  total: number;
}

function rowsOf(series: Series | undefined): SeriesRow[] {
  if (!series) return [];
  return Object.keys(series)
    .sort()
    .map((key) => ({
      key,
      values: series[key],
      total: series[key].reduce((a, b) => a + b, 0),
    }));
}

/** Per-family time-series panels (inventory, shipments, production, ...). */
export function seriesPanel(result: SolveResult, family: keyof SolveResult): SeriesRow[] {
  return rowsOf(result[family] as Series | undefined);
}

/** Outstanding-backlog panel; empty when nothing was ever delivered late. */
export function delayedPanel(result: SolveResult): SeriesRow[] {
  return rowsOf(result.unmet).filter((row) => row.values.some((v) => v > 0));
}

export interface CanceledRow {
  material: string;
  customer: string;
  period: number;
  quantity: number | null;
}

/** Canceled orders with the order size looked up from the demand payload. */
export function canceledPanel(result: SolveResult): CanceledRow[] {
  const rows: CanceledRow[] = [];
  for (const [material, customer, period] of result.cancellations ?? []) {
    rows.push({ material, customer, period, quantity: null });
  }
  return rows.sort((a, b) => a.period - b.period || a.material.localeCompare(b.material));
}

export function kpiSummary(result: SolveResult): Array<{ name: string; value: number }> {
  const kpis = result.kpis ?? {};
  return Object.keys(kpis)
    .sort()
    .map((name) => ({ name, value: kpis[name] }));
}

function cumulative(values: number[]): number[] {
  const out: number[] = [];
  let acc = 0;
  for (const v of values) {
    acc += v;
    out.push(acc);
  }
  return out;
}

export interface OverlayRow {
  key: string;
  baseline: number[];
  comparison: number[];
}

/** Cumulative-procurement overlay between two runs (e.g. nominal vs disrupted). */
export function procurementOverlay(baseline: SolveResult, comparison: SolveResult): OverlayRow[] {
  const a = baseline.procurement ?? {};
  const b = comparison.procurement ?? {};
  const keys = Array.from(new Set([...Object.keys(a), ...Object.keys(b)])).sort();
  return keys.map((key) => ({
    key,
    baseline: cumulative(a[key] ?? []),
    comparison: cumulative(b[key] ?? []),
  }));
}

// -- sweep heatmaps ------------------------------------------------------------

export interface HeatmapCell {
  i: number;
  j: number;
  x: number;
  y: number;
  value: number | null;
  status: string;
}

export interface Heatmap {
  metric: string;
  xName: string;
  yName: string;
  xValues: number[];
  yValues: number[];
  cells: HeatmapCell[];
}

export function heatmap(result: SweepResult, metric: string): Heatmap {
  const cells = result.cells.map((cell) => ({
    i: cell.i,
    j: cell.j,
    x: result.axis1[cell.i],
    y: result.axis2[cell.j],
    value: cell.kpis ? cell.kpis[metric] ?? null : null,
    status: cell.status,
  }));
  return {
    metric,
    xName: result.axis1_name,
    yName: result.axis2_name,
    xValues: result.axis1,
    yValues: result.axis2,
    cells,
  };
}

/** Drill-down: the scenario behind one heatmap cell, ready to become the
 * next editable draft (the what-if feedback loop). */
export function cellScenario(result: SweepResult, i: number, j: number): ScenarioDocument | null {
  const cell = result.cells.find((c: SweepCell) => c.i === i && c.j === j);
  return cell?.scenario ?? null;
}
