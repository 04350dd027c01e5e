/** Bound-profile preview: the same multiplier curve the server applies.
 * The preview multiplies a nominal bound series fetched from the model
 * document, so every plotted number traces back to a service response. */

import type { EventDoc, ModelDocument } from "./types.js";

export function multipliers(event: EventDoc, horizon: number): number[] {
  if (event.shape === "custom" && event.profile) {
    return event.profile.slice(0, horizon);
  }
  const end = event.end === null || event.end === undefined ? horizon : event.end;
  const g = new Array<number>(horizon).fill(1);
  const f = event.fraction;
  for (let t = event.start; t < end && t < horizon; t++) {
    if (event.ramp_in && t < event.start + event.ramp_in) {
      g[t] = 1 + (f - 1) * ((t - event.start) / event.ramp_in);
    } else if (event.ramp_out && t >= end - event.ramp_out) {
      g[t] = f + (1 - f) * ((t - (end - event.ramp_out)) / event.ramp_out);
    } else {
      g[t] = f;
    }
  }
  return g;
}

function expand(value: number | number[] | string, horizon: number): number[] {
  if (typeof value === "string") {
    return new Array(horizon).fill(Number.POSITIVE_INFINITY);
  }
  if (Array.isArray(value)) return value.slice(0, horizon);
  return new Array(horizon).fill(value);
}

/** Nominal series of the parameter an event targets, from the model doc. */
export function nominalBound(model: ModelDocument, event: EventDoc): number[] | null {
  const horizon = model.time.periods;
  const target = event.target;
  if (target.kind === "production_upper") {
    const plant = model.nodes.find((n) => n.id === target.node);
    const recipe = plant?.recipes?.find((r) => r.id === target.recipe);
    return recipe ? expand(recipe.upper, horizon) : null;
  }
  if (target.kind === "flow_upper") {
    const arc = model.arcs.find((a) => a.id === target.arc);
    if (!arc) return null;
    const material = target.material ?? arc.materials[0];
    const bound = arc.upper[material];
    return bound === undefined ? null : expand(bound, horizon);
  }
  if (target.kind === "buy_upper") {
    const node = model.nodes.find((n) => n.id === target.node);
    if (!node?.buy_upper) return null;
    const material = target.material ?? node.materials[0];
    const bound = node.buy_upper[material];
    return bound === undefined ? null : expand(bound, horizon);
  }
  return null;
}

export interface ProfilePreview {
  nominal: number[];
  disrupted: number[];
}

export function previewProfile(model: ModelDocument, event: EventDoc): ProfilePreview | null {
  const nominal = nominalBound(model, event);
  if (!nominal) return null;
  const g = multipliers(event, model.time.periods);
  return { nominal, disrupted: nominal.map((v, t) => v * g[t]) };
}
