/** Wiring: file input -> state, sliders -> reselect, clicks -> inspect. */

import { ExplorerState, inspect, loadBundle, reselect } from "./state.js";
import { renderDetail, renderError, renderPlots, renderPreference, toast } from "./render.js";

let state: ExplorerState | null = null;

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (found === null) throw new Error(`missing element #${id}`);
  return found as T;
}

function sliderValues(): [number, number, number] {
  return [
    Number(el<HTMLInputElement>("slider-o1").value),
    Number(el<HTMLInputElement>("slider-o2").value),
    Number(el<HTMLInputElement>("slider-o3").value),
  ];
}

function setSliders(preference: readonly number[]): void {
  el<HTMLInputElement>("slider-o1").value = String(preference[0]);
  el<HTMLInputElement>("slider-o2").value = String(preference[1]);
  el<HTMLInputElement>("slider-o3").value = String(preference[2]);
}

function repaint(): void {
  if (state === null) return;
  renderPlots(el("plots"), state, pick);
  renderPreference(el("preference-readout"), state.preference);
  const detail = inspect(state, state.selectedRound);
  if (detail !== null) renderDetail(el("detail"), detail);
}

function pick(round: number): void {
  if (state === null) return;
  const detail = inspect(state, round);
  if (detail === null) {
    toast(`round ${round} is not in this bundle`);
    return;
  }
  state = { ...state, hoveredRound: round };
  renderPlots(el("plots"), state, pick);
  renderDetail(el("detail"), detail);
}

function onSliderInput(): void {
  if (state === null) return;
  state = reselect(state, sliderValues());
  repaint();
}

async function onFileChosen(event: Event): Promise<void> {
  const input = event.target as HTMLInputElement;
  const file = input.files?.[0];
  if (file === undefined) return;
  try {
    const parsed: unknown = JSON.parse(await file.text());
    state = loadBundle(parsed);
    setSliders(state.preference);
    el("controls").classList.remove("hidden");
    repaint();
  } catch (error) {
    state = null;
    renderError(el("plots"), error);
  }
}

function init(): void {
  el<HTMLInputElement>("bundle-file").addEventListener("change", onFileChosen);
  for (const id of ["slider-o1", "slider-o2", "slider-o3"]) {
    el<HTMLInputElement>(id).addEventListener("input", onSliderInput);
  }
}

document.addEventListener("DOMContentLoaded", init);
