/** Wire types for the /api/v1 contract. Field names match the JSON exactly. */

export interface TargetDoc {
  kind: string;
  node?: string;
  arc?: string;
  recipe?: string;
  material?: string | null;
}

export interface EventDoc {
  target: TargetDoc;
  shape: "immediate" | "scheduled" | "permanent" | "custom";
  start: number;
  end: number | null;
  fraction: number;
  ramp_in: number;
  ramp_out: number;
  override: number | null;
  profile: number[] | null;
}

export interface InjectedOrderDoc {
  material: string;
  customer: string;
  period: number;
  quantity: number;
  late_cost: number | number[];
  cancel_cost: number;
  price?: number | number[] | null;
  no_late: boolean;
  no_cancel: boolean;
}

export interface ExtensionsDoc {
  patp: boolean;
  ftc: boolean;
  sla: "off" | "simple" | "window";
  terminal: "hard" | "fid";
  inventory_floor: "hard" | "nid";
  shared_volume: boolean;
  enforce_u_upper: boolean;
}

export interface ScenarioDocument {
  schema_version: 1;
  label: string;
  events: EventDoc[];
  orders: InjectedOrderDoc[];
  extensions?: ExtensionsDoc;
  solver?: { mip_gap?: number; node_limit?: number | null; time_limit?: number | null };
}

export interface ModelInfo {
  id: string;
  periods: number;
  materials: string[];
}

/** The subset of a model document the console needs for editing/preview. */
export interface ModelDocument {
  schema_version: number;
  time: { periods: number; period_hours: number };
  materials: string[];
  nodes: Array<{
    id: string;
    kind: "supplier" | "plant" | "warehouse" | "customer";
    materials: string[];
    recipes?: Array<{ id: string; upper: number | number[] }>;
    buy_upper?: Record<string, number | number[] | string>;
  }>;
  arcs: Array<{
    id: string;
    origin: string;
    destination: string;
    materials: string[];
    upper: Record<string, number | number[] | string>;
  }>;
  orders: Array<{ material: string; customer: string; period: number; quantity: number }>;
}

export interface JobInfo {
  id: string;
  kind: "solve" | "sweep" | "roll";
  state: "queued" | "running" | "done" | "error";
  submitted_at: string;
  progress: number;
  result_ref: string | null;
  diagnostic: string;
}

export type Series = Record<string, number[]>;

export interface SolveResult {
  status: string;
  objective: number | null;
  horizon?: number;
  kpis?: Record<string, number>;
  cancellations?: Array<[string, string, number]>;
  unmet?: Series;
  demand_met?: Series;
  procurement?: Series;
  production?: Series;
  inventory?: Series;
  shipments_in?: Series;
  shipments_out?: Series;
  changes?: Array<{ path: string[]; start: number; end: number; old: number; new: number }>;
}

export interface SweepCell {
  i: number;
  j: number;
  status: string;
  kpis: Record<string, number> | null;
  scenario: ScenarioDocument | null;
  [axis: string]: unknown;
}

export interface SweepResult {
  axis1: number[];
  axis2: number[];
  axis1_name: string;
  axis2_name: string;
  cells: SweepCell[];
  table: string;
}
