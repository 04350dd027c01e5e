/** Scenario draft state machine.
 *
 * The draft is always serializable; `validate` mirrors the server's 422
 * semantics field by field so problems surface inline before submission.
 * All mutations return a new draft (undo/history stays trivial).
 */

import type {
  EventDoc,
  ExtensionsDoc,
  InjectedOrderDoc,
  ModelDocument,
  ScenarioDocument,
  TargetDoc,
} from "./types.js";

export interface Draft {
  label: string;
  events: EventDoc[];
  orders: InjectedOrderDoc[];
  extensions: ExtensionsDoc | null;
  solver: { mip_gap?: number } | null;
}

export interface Problem {
  field: string; // e.g. "events[0].end"
  message: string;
}

const OVERRIDE_KINDS = new Set([
  "lead_time",
  "production_lead",
  "flow_cost",
  "buy_cost",
  "production_cost",
  "price",
  "late_cost",
  "cancel_cost",
]);
const BOUND_KINDS = new Set([
  "production_upper",
  "flow_upper",
  "buy_upper",
  "inventory_upper",
  "demand_upper",
]);

export function emptyDraft(label = "untitled"): Draft {
  return { label, events: [], orders: [], extensions: null, solver: null };
}

export function defaultEvent(target: TargetDoc): EventDoc {
  return {
    target,
    shape: "immediate",
    start: 0,
    end: null,
    fraction: 1,
    ramp_in: 0,
    ramp_out: 0,
    override: null,
    profile: null,
  };
}

export function addEvent(draft: Draft, event: EventDoc): Draft {
  return { ...draft, events: [...draft.events, event] };
}

export function updateEvent(draft: Draft, index: number, patch: Partial<EventDoc>): Draft {
  const events = draft.events.map((e, k) => (k === index ? { ...e, ...patch } : e));
  return { ...draft, events };
}

export function removeEvent(draft: Draft, index: number): Draft {
  return { ...draft, events: draft.events.filter((_, k) => k !== index) };
}

export function addOrder(draft: Draft, order: InjectedOrderDoc): Draft {
  return { ...draft, orders: [...draft.orders, order] };
}

export function updateOrder(draft: Draft, index: number, patch: Partial<InjectedOrderDoc>): Draft {
  const orders = draft.orders.map((o, k) => (k === index ? { ...o, ...patch } : o));
  return { ...draft, orders };
}

export function setExtensions(draft: Draft, extensions: ExtensionsDoc | null): Draft {
  return { ...draft, extensions };
}

function checkEvent(event: EventDoc, model: ModelDocument, where: string, out: Problem[]) {
  const horizon = model.time.periods;
  const end = event.end === null ? horizon : event.end;
  const kind = event.target.kind;
  if (!BOUND_KINDS.has(kind) && !OVERRIDE_KINDS.has(kind)) {
    out.push({ field: `${where}.target.kind`, message: `unknown target kind '${kind}'` });
    return;
  }
  if (kind.startsWith("production_")) {
    const plant = model.nodes.find((n) => n.id === event.target.node);
    if (!plant || plant.kind !== "plant") {
      out.push({ field: `${where}.target.node`, message: "pick a plant" });
    } else if (!plant.recipes?.some((r) => r.id === event.target.recipe)) {
      out.push({ field: `${where}.target.recipe`, message: "unknown recipe at this plant" });
    }
  } else if (kind === "flow_upper" || kind === "flow_cost" || kind === "lead_time") {
    if (!model.arcs.some((a) => a.id === event.target.arc)) {
      out.push({ field: `${where}.target.arc`, message: "unknown arc" });
    }
  } else {
    if (!model.nodes.some((n) => n.id === event.target.node)) {
      out.push({ field: `${where}.target.node`, message: "unknown node" });
    }
  }
  if (end < event.start) {
    out.push({ field: `${where}.end`, message: "end must not precede start" });
    return;
  }
  if (event.start < 0 || end > horizon) {
    out.push({ field: `${where}.start`, message: `window must stay inside [0, ${horizon}]` });
  }
  if (event.fraction < 0 || event.fraction > 1) {
    out.push({ field: `${where}.fraction`, message: "severity fraction lies in [0, 1]" });
  }
  if (event.shape === "scheduled" && event.start === 0) {
    out.push({ field: `${where}.start`, message: "scheduled events start after period 0" });
  }
  if (event.shape === "permanent" && event.end !== null && event.end !== horizon) {
    out.push({ field: `${where}.end`, message: "permanent events run to the horizon" });
  }
  if (event.shape === "custom" && (!event.profile || event.profile.length !== horizon)) {
    out.push({ field: `${where}.profile`, message: `custom shape needs ${horizon} multipliers` });
  }
  if (event.ramp_in < 0 || event.ramp_out < 0 || event.ramp_in + event.ramp_out > end - event.start) {
    out.push({ field: `${where}.ramp_in`, message: "ramps exceed the disrupted window" });
  }
  if (OVERRIDE_KINDS.has(kind) && event.override === null) {
    out.push({ field: `${where}.override`, message: "this target needs a replacement value" });
  }
  if (BOUND_KINDS.has(kind) && event.override !== null) {
    out.push({ field: `${where}.override`, message: "bound targets use the fraction" });
  }
}

function checkOrder(order: InjectedOrderDoc, model: ModelDocument, draft: Draft,
                    where: string, out: Problem[]) {
  const customer = model.nodes.find((n) => n.id === order.customer);
  if (!customer || customer.kind !== "customer") {
    out.push({ field: `${where}.customer`, message: "pick a customer" });
  } else if (!customer.materials.includes(order.material)) {
    out.push({ field: `${where}.material`, message: "customer does not take this material" });
  }
  if (order.period < 0 || order.period >= model.time.periods) {
    out.push({ field: `${where}.period`, message: "period outside the horizon" });
  }
  if (order.quantity < 0) {
    out.push({ field: `${where}.quantity`, message: "quantity must be nonnegative" });
  }
  if (order.late_cost === null || order.late_cost === undefined) {
    out.push({ field: `${where}.late_cost`, message: "late-delivery cost profile is required" });
  }
  if (order.cancel_cost === null || order.cancel_cost === undefined) {
    out.push({ field: `${where}.cancel_cost`, message: "cancellation cost is required" });
  }
  if ((order.no_late || order.no_cancel) && draft.extensions?.terminal !== "fid") {
    out.push({
      field: `${where}.no_late`,
      message: "hard order guarantees need the soft terminal mode (extensions.terminal = fid)",
    });
  }
}

export function validate(draft: Draft, model: ModelDocument): Problem[] {
  const out: Problem[] = [];
  draft.events.forEach((event, k) => checkEvent(event, model, `events[${k}]`, out));
  draft.orders.forEach((order, k) => checkOrder(order, model, draft, `orders[${k}]`, out));
  return out;
}

export function toDocument(draft: Draft): ScenarioDocument {
  const doc: ScenarioDocument = {
    schema_version: 1,
    label: draft.label,
    events: draft.events.map((e) => ({ ...e, target: { ...e.target } })),
    orders: draft.orders.map((o) => ({ ...o })),
  };
  if (draft.extensions) doc.extensions = { ...draft.extensions };
  if (draft.solver) doc.solver = { ...draft.solver };
  return doc;
}

export function fromDocument(doc: ScenarioDocument): Draft {
  return {
    label: doc.label ?? "",
    events: (doc.events ?? []).map((e) => ({
      target: { ...e.target },
      shape: e.shape ?? "immediate",
      start: e.start ?? 0,
      end: e.end ?? null,
      fraction: e.fraction ?? 1,
      ramp_in: e.ramp_in ?? 0,
      ramp_out: e.ramp_out ?? 0,
      override: e.override ?? null,
      profile: e.profile ?? null,
    })),
    orders: (doc.orders ?? []).map((o) => ({
      ...o,
      no_late: o.no_late ?? false,
      no_cancel: o.no_cancel ?? false,
    })),
    extensions: doc.extensions ? { ...doc.extensions } : null,
    solver: doc.solver ? { ...doc.solver } : null,
  };
}
