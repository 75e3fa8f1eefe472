/**
 * Rating widget logic: kind-correct dimension sets on a 1..5 scale.
 *
 * The widget is the only place rating bodies are built, so a submission
 * can never reach the API with the wrong dimensions for its node kind.
 */

import { RATING_DIMENSIONS, type NodeKind } from "./types.js";

export const RATING_MIN = 1;
export const RATING_MAX = 5;

/** Dimension names for a node kind, or null when the kind is unrated. */
export function dimensionsFor(kind: NodeKind): readonly string[] | null {
  return RATING_DIMENSIONS[kind] ?? null;
}

/**
 * Validate slider values against the kind's dimension set and produce the
 * exact POST body. Throws on unrated kinds, missing or extra dimensions,
 * and out-of-scale or non-integer values.
 */
export function buildRatingBody(
  kind: NodeKind,
  values: Record<string, number>,
): { dimensions: Record<string, number> } {
  const expected = dimensionsFor(kind);
  if (expected === null) {
    throw new Error(`${kind} nodes do not take ratings`);
  }
  const got = Object.keys(values).sort();
  const want = [...expected].sort();
  if (got.length !== want.length || got.some((key, i) => key !== want[i])) {
    throw new Error(`${kind} ratings need dimensions [${want.join(", ")}], got [${got.join(", ")}]`);
  }
  const dimensions: Record<string, number> = {};
  for (const name of expected) {
    const value = values[name];
    if (!Number.isInteger(value) || value < RATING_MIN || value > RATING_MAX) {
      throw new Error(`${name} must be an integer in ${RATING_MIN}..${RATING_MAX}, got ${value}`);
    }
    dimensions[name] = value;
  }
  return { dimensions };
}
