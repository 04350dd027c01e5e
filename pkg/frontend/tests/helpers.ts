import { readFileSync } from "node:fs";

export function fixture<T>(name: string): T {
  const url = new URL(`../fixtures/${name}`, import.meta.url);
  return JSON.parse(readFileSync(url, "utf-8")) as T;
}

/** Collect every numeric leaf of a JSON payload (used to assert that all
 * displayed numbers originate from service responses). */
export function numericLeaves(value: unknown, out = new Set<number>()): Set<number> {
  if (typeof value === "number") out.add(value);
  else if (Array.isArray(value)) value.forEach((v) => numericLeaves(v, out));
  else if (value && typeof value === "object") {
    Object.values(value).forEach((v) => numericLeaves(v, out));
  }
  return out;
}
