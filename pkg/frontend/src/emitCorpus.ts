/** Emit the editor's fixture corpus of scenario documents as JSON on stdout.
 *
 * The server-side contract test feeds every emitted document to
 * POST /scenarios and expects zero rejections, so this file defines the
 * corpus in one place for both test suites.
 */

import {
  Draft,
  addEvent,
  addOrder,
  defaultEvent,
  emptyDraft,
  setExtensions,
  toDocument,
  updateEvent,
} from "./editor.js";
import type { ExtensionsDoc, ScenarioDocument } from "./types.js";

const SOFT: ExtensionsDoc = {
  patp: false,
  ftc: false,
  sla: "off",
  terminal: "fid",
  inventory_floor: "hard",
  shared_volume: false,
  enforce_u_upper: false,
};

export function corpus(): ScenarioDocument[] {
  const drafts: Draft[] = [];

  let d = emptyDraft("reactor slowdown");
  d = addEvent(d, defaultEvent({ kind: "production_upper", node: "PL1", recipe: "MAKE_INT" }));
  d = updateEvent(d, 0, { fraction: 0.25, start: 0, end: 10 });
  drafts.push(d);

  d = emptyDraft("scheduled maintenance with ramps");
  d = addEvent(d, defaultEvent({ kind: "production_upper", node: "PL1", recipe: "MAKE_INT" }));
  d = updateEvent(d, 0, { shape: "scheduled", start: 4, end: 14, fraction: 0.5, ramp_in: 2, ramp_out: 2 });
  drafts.push(d);

  d = emptyDraft("permanent route loss");
  d = addEvent(d, defaultEvent({ kind: "flow_upper", arc: "w1-c1", material: "INT" }));
  d = updateEvent(d, 0, { shape: "permanent", fraction: 0, start: 2, end: null });
  drafts.push(d);

  d = emptyDraft("slow shipping");
  d = addEvent(d, defaultEvent({ kind: "lead_time", arc: "w1-w2-road", material: "INT" }));
  d = updateEvent(d, 0, { shape: "scheduled", start: 1, end: 8, override: 4 });
  drafts.push(d);

  d = emptyDraft("supplier price spike");
  d = addEvent(d, defaultEvent({ kind: "buy_cost", node: "S1", material: "RAW" }));
  d = updateEvent(d, 0, { start: 0, end: 12, override: 3 });
  drafts.push(d);

  d = emptyDraft("custom decay curve");
  d = addEvent(d, defaultEvent({ kind: "production_upper", node: "PL2", recipe: "MAKE_GOOD" }));
  d = updateEvent(d, 0, {
    shape: "custom",
    profile: Array.from({ length: 20 }, (_, t) => (t < 6 ? 0.5 + t / 12 : 1)),
  });
  drafts.push(d);

  d = emptyDraft("unexpected order");
  d = setExtensions(d, SOFT);
  d = addOrder(d, {
    material: "INT",
    customer: "C1",
    period: 7,
    quantity: 12,
    late_cost: 2,
    cancel_cost: 96,
    price: 8,
    no_late: false,
    no_cancel: false,
  });
  drafts.push(d);

  d = emptyDraft("contractual order, no fallback");
  d = setExtensions(d, SOFT);
  d = addOrder(d, {
    material: "GOOD",
    customer: "C2",
    period: 9,
    quantity: 4,
    late_cost: [1, 1, 1, 1, 1, 1, 1, 1, 1, 2, 2, 2, 2, 2, 4, 4, 4, 4, 4, 4],
    cancel_cost: 256,
    price: 16,
    no_late: true,
    no_cancel: true,
  });
  drafts.push(d);

  d = emptyDraft("combined outage and demand shock");
  d = setExtensions(d, { ...SOFT, ftc: false, inventory_floor: "nid" });
  d = addEvent(d, defaultEvent({ kind: "production_upper", node: "PL1", recipe: "MAKE_INT" }));
  d = updateEvent(d, 0, { fraction: 0.25, start: 0, end: 10 });
  d = addEvent(d, defaultEvent({ kind: "buy_upper", node: "S1", material: "RAW" }));
  d = updateEvent(d, 1, { shape: "scheduled", fraction: 0.5, start: 3, end: 9 });
  d = addOrder(d, {
    material: "INT",
    customer: "C1",
    period: 11,
    quantity: 8,
    late_cost: 1,
    cancel_cost: 64,
    no_late: false,
    no_cancel: false,
  });
  drafts.push(d);

  d = emptyDraft("empty what-if");
  drafts.push(d);

  return drafts.map(toDocument);
}

const runningAsScript =
  typeof process !== "undefined" && process.argv[1]?.endsWith("emitCorpus.js");
if (runningAsScript) {
  process.stdout.write(JSON.stringify(corpus(), null, 2) + "\n");
}
