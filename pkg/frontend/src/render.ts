/** Minimal DOM rendering: tables, line charts, and heatmaps as inline SVG.
 * No chart library; the console stays dependency-free. */

import type { Heatmap, OverlayRow, SeriesRow } from "./dashboard.js";

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  children: Array<Node | string> = [],
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  for (const child of children) node.append(child);
  return node;
}

function svgEl(tag: string, attrs: Record<string, string>): SVGElement {
  const node = document.createElementNS("http://www.w3.org/2000/svg", tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  return node;
}

function polyline(values: number[], width: number, height: number, vMax: number, color: string) {
  const step = values.length > 1 ? width / (values.length - 1) : width;
  const points = values
    .map((v, t) => `${(t * step).toFixed(1)},${(height - (vMax ? (v / vMax) * height : 0)).toFixed(1)}`)
    .join(" ");
  return svgEl("polyline", { points, fill: "none", stroke: color, "stroke-width": "1.5" });
}

export function lineChart(rows: Array<{ key: string; values: number[] }>, title: string): HTMLElement {
  const width = 360;
  const height = 120;
  const vMax = Math.max(1e-9, ...rows.flatMap((r) => r.values.filter(Number.isFinite)));
  const svg = svgEl("svg", { width: String(width), height: String(height), class: "chart" });
  const palette = ["#2563eb", "#dc2626", "#059669", "#d97706", "#7c3aed", "#0891b2"];
  rows.forEach((row, k) => svg.append(polyline(row.values, width, height, vMax, palette[k % palette.length])));
  const box = el("div", { class: "panel" }, [el("h3", {}, [title])]);
  box.append(svg);
  box.append(el("div", { class: "legend" }, rows.map((r, k) =>
    el("span", { style: `color:${palette[k % palette.length]}` }, [r.key + " "]))));
  return box;
}

export function table(headers: string[], rows: Array<Array<string | number>>, title: string): HTMLElement {
  const head = el("tr", {}, headers.map((h) => el("th", {}, [h])));
  const body = rows.map((row) => el("tr", {}, row.map((v) => el("td", {}, [String(v)]))));
  const node = el("table", { class: "grid" }, [head, ...body]);
  return el("div", { class: "panel" }, [el("h3", {}, [title]), node]);
}

export function emptyNote(title: string, note: string): HTMLElement {
  return el("div", { class: "panel empty" }, [el("h3", {}, [title]), el("p", {}, [note])]);
}

export function overlayChart(rows: OverlayRow[], title: string): HTMLElement {
  const flattened: SeriesRow[] = rows.flatMap((row) => [
    { key: `${row.key} (baseline)`, values: row.baseline, total: 0 },
    { key: `${row.key} (scenario)`, values: row.comparison, total: 0 },
  ]);
  return lineChart(flattened, title);
}

export function heatmapSvg(
  map: Heatmap,
  onCell: (i: number, j: number) => void,
): HTMLElement {
  const cellSize = 34;
  const width = map.yValues.length * cellSize + 60;
  const height = map.xValues.length * cellSize + 40;
  const svg = svgEl("svg", { width: String(width), height: String(height), class: "heatmap" });
  const values = map.cells.map((c) => c.value).filter((v): v is number => v !== null);
  const lo = Math.min(...values, 0);
  const hi = Math.max(...values, 1);
  for (const cell of map.cells) {
    const frac = cell.value === null ? 0 : (cell.value - lo) / Math.max(1e-9, hi - lo);
    const shade = Math.round(240 - frac * 160);
    const rect = svgEl("rect", {
      x: String(60 + cell.j * cellSize),
      y: String(10 + cell.i * cellSize),
      width: String(cellSize - 2),
      height: String(cellSize - 2),
      fill: cell.value === null ? "#ddd" : `rgb(${shade},${shade},255)`,
      "data-i": String(cell.i),
      "data-j": String(cell.j),
      cursor: "pointer",
    });
    rect.addEventListener("click", () => onCell(cell.i, cell.j));
    svg.append(rect);
  }
  const box = el("div", { class: "panel" }, [
    el("h3", {}, [`${map.metric} by ${map.xName} x ${map.yName} (click a cell to edit)`]),
  ]);
  box.append(svg);
  return box;
}
