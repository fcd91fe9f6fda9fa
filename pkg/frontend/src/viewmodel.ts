/** Pure geometry for the three pairwise loss scatters; render.ts only paints it. */

import { ParetoBundle } from "./bundle.js";
import { ExplorerState } from "./state.js";

export const LOSS_LABELS = ["O1 (0-1 loss)", "O2 (balanced loss)", "O3 (worst group gap)"] as const;
export const PLOT_PAIRS: ReadonlyArray<readonly [number, number]> = [
  [0, 1],
  [0, 2],
  [1, 2],
];

export interface ScatterPoint {
  round: number;
  x: number;
  y: number;
  px: number;
  py: number;
  onFront: boolean;
  selected: boolean;
  hovered: boolean;
}

export interface ScatterPlot {
  xLabel: string;
  yLabel: string;
  width: number;
  height: number;
  points: ScatterPoint[];
}

export interface ViewModel {
  title: string;
  plots: ScatterPlot[];
  preference: readonly number[];
  selectedRound: number;
}

const MARGIN = 34;

function scale(values: number[], size: number): (v: number) => number {
  const lo = Math.min(...values);
  const hi = Math.max(...values);
  const span = hi - lo;
  if (span === 0) return () => size / 2;
  return (v: number) => MARGIN + ((v - lo) / span) * (size - 2 * MARGIN);
}

function lossOf(bundle: ParetoBundle, index: number): number[] {
  const keys = ["o1", "o2", "o3"] as const;
  const key = keys[index]!;
  return bundle.solutions.map((s) => s[key]);
}

export function buildViewModel(state: ExplorerState, width = 330, height = 300): ViewModel {
  const bundle = state.bundle;
  const frontRounds = new Set(bundle.front_indices.map((i) => bundle.solutions[i]!.round));
  const plots = PLOT_PAIRS.map(([a, b]) => {
    const xs = lossOf(bundle, a);
    const ys = lossOf(bundle, b);
    const sx = scale(xs, width);
    const sy = scale(ys, height);
    const points = bundle.solutions.map((s, i) => ({
      round: s.round,
      x: xs[i]!,
      y: ys[i]!,
      px: sx(xs[i]!),
      py: height - sy(ys[i]!),
      onFront: frontRounds.has(s.round),
      selected: s.round === state.selectedRound,
      hovered: s.round === state.hoveredRound,
    }));
    return {
      xLabel: LOSS_LABELS[a]!,
      yLabel: LOSS_LABELS[b]!,
      width,
      height,
      points,
    };
  });
  return {
    title: `${bundle.meta.dataset} — ${bundle.meta.mode}, T=${bundle.meta.T}, seed ${bundle.meta.seed}`,
    plots,
    preference: state.preference,
    selectedRound: state.selectedRound,
  };
}
