/**
 * The one algorithm the explorer owns: preference-nearest selection over the
 * stored pseudo-weights. The arithmetic mirrors the core exactly — normalize
 * the preference (all-zero means uniform), sum |w - u| components in order,
 * and break distance ties toward the smallest round — so golden vectors from
 * the core must agree bit for bit.
 */

import { ParetoBundle, Triple } from "./bundle.js";

export const UNIFORM: Triple = [1 / 3, 1 / 3, 1 / 3];

export function normalizePreference(values: readonly number[]): Triple {
  if (values.length !== 3) {
    throw new Error(`preference needs exactly 3 components, got ${values.length}`);
  }
  const [a, b, c] = values as [number, number, number];
  if (Math.min(a, b, c) < 0) {
    throw new Error("preference components must be non-negative");
  }
  const total = a + b + c;
  if (total === 0) return [...UNIFORM] as Triple;
  return [a / total, b / total, c / total];
}

export function l1Distance(a: Triple, b: Triple): number {
  return Math.abs(a[0] - b[0]) + Math.abs(a[1] - b[1]) + Math.abs(a[2] - b[2]);
}

export interface SelectionResult {
  round: number;
  frontPosition: number;
  distance: number;
}

export function selectRound(bundle: ParetoBundle, preference: readonly number[]): SelectionResult {
  const u = normalizePreference(preference);
  let best: SelectionResult | null = null;
  bundle.front_indices.forEach((solutionIndex, position) => {
    const round = bundle.solutions[solutionIndex]!.round;
    const distance = l1Distance(bundle.pseudo_weights[position]!, u);
    if (
      best === null ||
      distance < best.distance ||
      (distance === best.distance && round < best.round)
    ) {
      best = { round, frontPosition: position, distance };
    }
  });
  return best!;
}
