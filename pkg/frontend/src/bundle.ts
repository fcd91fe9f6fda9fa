/**
 * Result-bundle schema and validation.
 *
 * The explorer never recomputes losses, fronts, or pseudo-weights: every
 * number it shows comes from a bundle field, and the only algorithm it
 * reimplements is the preference-nearest selection step.
 */

export type Triple = [number, number, number];

export interface SolutionPoint {
  round: number;
  o1: number;
  o2: number;
  o3: number;
}

export interface AttributeReport {
  attribute: string;
  fpr_s: number;
  fnr_s: number;
  fpr_ns: number;
  fnr_ns: number;
  dm: number;
  cdm: number;
  class_biased: boolean;
  delta_fnr?: number;
  delta_fpr?: number;
  undefined_rates?: string[];
}

export interface EvalEntry {
  round: number;
  acc: number;
  wc_acc: number;
  auc: number;
  gm: number;
  mmm: number;
  per_attribute: AttributeReport[];
}

export interface BundleMeta {
  dataset: string;
  T: number;
  mode: string;
  seed: number;
}

export interface SelectedInfo {
  round: number;
  preference: Triple;
}

export interface ParetoBundle {
  meta: BundleMeta;
  solutions: SolutionPoint[];
  front_indices: number[];
  pseudo_weights: Triple[];
  selected: SelectedInfo;
  eval: EvalEntry[];
}

/** Schema violation; `path` points at the offending JSON location. */
export class BundleValidationError extends Error {
  constructor(public readonly path: string, detail: string) {
    super(`${path}: ${detail}`);
    this.name = "BundleValidationError";
  }
}

function fail(path: string, detail: string): never {
  throw new BundleValidationError(path, detail);
}

function isObject(value: unknown): value is Record<string, unknown> {
  return typeof value === "object" && value !== null && !Array.isArray(value);
}

function requireNumber(value: unknown, path: string): number {
  if (typeof value !== "number" || !Number.isFinite(value)) {
    fail(path, `expected a finite number, got ${JSON.stringify(value)}`);
  }
  return value;
}

function requireTriple(value: unknown, path: string): Triple {
  if (!Array.isArray(value) || value.length !== 3) {
    fail(path, "expected a 3-vector");
  }
  return [
    requireNumber(value[0], `${path}[0]`),
    requireNumber(value[1], `${path}[1]`),
    requireNumber(value[2], `${path}[2]`),
  ];
}

const REQUIRED_KEYS = ["meta", "solutions", "front_indices", "pseudo_weights", "selected", "eval"] as const;
const EVAL_NUMBERS = ["acc", "wc_acc", "auc", "gm", "mmm"] as const;

/** Parse an untrusted document into a typed bundle or throw with a JSON path. */
export function validateBundle(doc: unknown): ParetoBundle {
  if (!isObject(doc)) fail("$", "bundle must be a JSON object");
  for (const key of REQUIRED_KEYS) {
    if (!(key in doc)) fail(`$.${key}`, "missing required key");
  }

  const rawSolutions = doc.solutions;
  if (!Array.isArray(rawSolutions) || rawSolutions.length === 0) {
    fail("$.solutions", "must be a non-empty array");
  }
  const solutions: SolutionPoint[] = rawSolutions.map((s, i) => {
    if (!isObject(s)) fail(`$.solutions[${i}]`, "expected an object");
    return {
      round: requireNumber(s.round, `$.solutions[${i}].round`),
      o1: requireNumber(s.o1, `$.solutions[${i}].o1`),
      o2: requireNumber(s.o2, `$.solutions[${i}].o2`),
      o3: requireNumber(s.o3, `$.solutions[${i}].o3`),
    };
  });

  const rawIndices = doc.front_indices;
  if (!Array.isArray(rawIndices) || rawIndices.length === 0) {
    fail("$.front_indices", "must be a non-empty array");
  }
  const frontIndices = rawIndices.map((idx, i) => {
    const value = requireNumber(idx, `$.front_indices[${i}]`);
    if (!Number.isInteger(value) || value < 0 || value >= solutions.length) {
      fail(`$.front_indices[${i}]`, `must index into solutions, got ${JSON.stringify(idx)}`);
    }
    return value;
  });

  const rawWeights = doc.pseudo_weights;
  if (!Array.isArray(rawWeights) || rawWeights.length !== frontIndices.length) {
    fail("$.pseudo_weights", "must align with front_indices");
  }
  const weights = rawWeights.map((w, i) => requireTriple(w, `$.pseudo_weights[${i}]`));

  const rawSelected = doc.selected;
  if (!isObject(rawSelected) || !("round" in rawSelected)) {
    fail("$.selected.round", "missing required key");
  }
  const selectedRound = requireNumber(rawSelected.round, "$.selected.round");
  const frontRounds = new Set(frontIndices.map((i) => solutions[i]!.round));
  if (!frontRounds.has(selectedRound)) {
    fail("$.selected.round", "selected round is not a front member");
  }
  const preference = requireTriple(rawSelected.preference, "$.selected.preference");

  const rawEval = doc.eval;
  if (!Array.isArray(rawEval) || rawEval.length !== frontIndices.length) {
    fail("$.eval", "must align with front_indices");
  }
  const evalEntries: EvalEntry[] = rawEval.map((e, i) => {
    if (!isObject(e)) fail(`$.eval[${i}]`, "expected an object");
    for (const key of EVAL_NUMBERS) {
      requireNumber(e[key], `$.eval[${i}].${key}`);
    }
    const perAttribute = Array.isArray(e.per_attribute) ? (e.per_attribute as AttributeReport[]) : [];
    return {
      round: requireNumber(e.round, `$.eval[${i}].round`),
      acc: e.acc as number,
      wc_acc: e.wc_acc as number,
      auc: e.auc as number,
      gm: e.gm as number,
      mmm: e.mmm as number,
      per_attribute: perAttribute,
    };
  });

  const meta = isObject(doc.meta) ? doc.meta : fail("$.meta", "expected an object");
  return {
    meta: {
      dataset: String(meta.dataset ?? "bundle"),
      T: Number(meta.T ?? solutions.length),
      mode: String(meta.mode ?? "multi_fair"),
      seed: Number(meta.seed ?? 0),
    },
    solutions,
    front_indices: frontIndices,
    pseudo_weights: weights,
    selected: { round: selectedRound, preference },
    eval: evalEntries,
  };
}
