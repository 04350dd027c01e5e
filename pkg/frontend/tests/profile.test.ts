import { describe, expect, it } from "vitest";

import { defaultEvent } from "../src/editor.js";
import { multipliers, previewProfile } from "../src/profile.js";
import type { EventDoc, ModelDocument } from "../src/types.js";
import { fixture } from "./helpers.js";

const model = fixture<ModelDocument>("model.json");

function capacityEvent(patch: Partial<EventDoc>): EventDoc {
  return { ...defaultEvent({ kind: "production_upper", node: "PL1", recipe: "MAKE_INT" }), ...patch };
}

describe("bound profile preview", () => {
  it("renders a 75%-reduced capacity curve for fraction 0.25", () => {
    const preview = previewProfile(model, capacityEvent({ fraction: 0.25, start: 0, end: 10 }));
    expect(preview).not.toBeNull();
    expect(preview!.nominal[0]).toBe(16);
    expect(preview!.disrupted.slice(0, 10)).toEqual(new Array(10).fill(4));
    expect(preview!.disrupted.slice(10)).toEqual(new Array(10).fill(16));
  });

  it("renders the nominal curve unchanged for fraction 1", () => {
    const preview = previewProfile(model, capacityEvent({ fraction: 1, start: 0, end: 20 }));
    expect(preview!.disrupted).toEqual(preview!.nominal);
  });

  it("ramps tighten and recover linearly", () => {
    const event = capacityEvent({ shape: "scheduled", start: 2, end: 10, fraction: 0.5, ramp_in: 2, ramp_out: 2 });
    const g = multipliers(event, 12);
    expect(g[2]).toBe(1);
    expect(g[3]).toBe(0.75);
    expect(g[4]).toBe(0.5);
    expect(g[8]).toBe(0.5);
    expect(g[9]).toBe(0.75);
    expect(g[10]).toBe(1);
  });

  it("uses explicit multipliers for custom shapes", () => {
    const profile = Array.from({ length: 20 }, (_, t) => (t % 2 ? 1 : 0.5));
    const event = capacityEvent({ shape: "custom", profile });
    expect(multipliers(event, 20)).toEqual(profile);
  });

  it("resolves flow bounds from the model document", () => {
    const event: EventDoc = {
      ...defaultEvent({ kind: "flow_upper", arc: "w1-c1", material: "INT" }),
      fraction: 0,
      start: 1,
      end: 7,
      shape: "scheduled",
    };
    const preview = previewProfile(model, event);
    expect(preview!.nominal[0]).toBe(32);
    expect(preview!.disrupted[1]).toBe(0);
    expect(preview!.disrupted[7]).toBe(32);
  });
});
