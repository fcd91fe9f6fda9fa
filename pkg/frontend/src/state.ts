/** Explorer state transitions: load, reselect, inspect. All pure and DOM-free. */

import { EvalEntry, ParetoBundle, SolutionPoint, Triple, validateBundle } from "./bundle.js";
import { normalizePreference, selectRound } from "./selection.js";

export interface ExplorerState {
  bundle: ParetoBundle;
  preference: Triple;
  selectedRound: number;
  hoveredRound: number | null;
}

/** Validate a parsed JSON document and seed the state from its stored selection. */
export function loadBundle(doc: unknown): ExplorerState {
  const bundle = validateBundle(doc);
  const preference = normalizePreference(bundle.selected.preference);
  return {
    bundle,
    preference,
    selectedRound: selectRound(bundle, preference).round,
    hoveredRound: null,
  };
}

/** Re-run preference-nearest selection; slider values need not be normalized. */
export function reselect(state: ExplorerState, rawPreference: readonly number[]): ExplorerState {
  const preference = normalizePreference(rawPreference);
  return {
    ...state,
    preference,
    selectedRound: selectRound(state.bundle, preference).round,
  };
}

export interface InspectDetail {
  round: number;
  solution: SolutionPoint;
  onFront: boolean;
  dominated: boolean;
  pseudoWeight: Triple | null;
  evalEntry: EvalEntry | null;
  classBiasedAttributes: string[];
  undefinedRateWarnings: string[];
}

/** Drill-down for one round; null means the round is unknown (caller toasts). */
export function inspect(state: ExplorerState, round: number): InspectDetail | null {
  const solution = state.bundle.solutions.find((s) => s.round === round);
  if (solution === undefined) return null;
  const position = state.bundle.front_indices.findIndex(
    (idx) => state.bundle.solutions[idx]!.round === round,
  );
  const onFront = position >= 0;
  const evalEntry = onFront ? state.bundle.eval[position] ?? null : null;
  const classBiased: string[] = [];
  const warnings: string[] = [];
  for (const attr of evalEntry?.per_attribute ?? []) {
    if (attr.class_biased) classBiased.push(attr.attribute);
    for (const rate of attr.undefined_rates ?? []) {
      warnings.push(`${attr.attribute}.${rate}`);
    }
  }
  return {
    round,
    solution,
    onFront,
    dominated: !onFront,
    pseudoWeight: onFront ? state.bundle.pseudo_weights[position] ?? null : null,
    evalEntry,
    classBiasedAttributes: classBiased,
    undefinedRateWarnings: warnings,
  };
}
