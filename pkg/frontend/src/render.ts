/** DOM painting of the view model: SVG scatters, metric panel, toasts. */

import { BundleValidationError } from "./bundle.js";
import { ExplorerState, InspectDetail } from "./state.js";
import { ScatterPlot, buildViewModel } from "./viewmodel.js";

const SVG_NS = "http://www.w3.org/2000/svg";

function svgElement<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | number>,
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, String(value));
  }
  return el;
}

function renderPlot(plot: ScatterPlot, onPick: (round: number) => void): SVGSVGElement {
  const svg = svgElement("svg", {
    viewBox: `0 0 ${plot.width} ${plot.height}`,
    width: plot.width,
    height: plot.height,
    class: "scatter",
  });
  const xLabel = svgElement("text", { x: plot.width / 2, y: plot.height - 4, class: "axis-label" });
  xLabel.textContent = plot.xLabel;
  const yLabel = svgElement("text", {
    x: 10,
    y: plot.height / 2,
    class: "axis-label",
    transform: `rotate(-90 10 ${plot.height / 2})`,
  });
  yLabel.textContent = plot.yLabel;
  svg.append(xLabel, yLabel);

  for (const point of plot.points) {
    const cls = point.selected
      ? "point selected"
      : point.onFront
        ? "point front"
        : "point context";
    const circle = svgElement("circle", {
      cx: point.px,
      cy: point.py,
      r: point.selected ? 7 : point.onFront ? 5 : 2.6,
      class: cls + (point.hovered ? " hovered" : ""),
    });
    circle.addEventListener("click", () => onPick(point.round));
    const tooltip = svgElement("title", {});
    tooltip.textContent = `round ${point.round}: (${point.x.toFixed(4)}, ${point.y.toFixed(4)})`;
    circle.append(tooltip);
    svg.append(circle);
  }
  return svg;
}

export function renderPlots(
  container: HTMLElement,
  state: ExplorerState,
  onPick: (round: number) => void,
): void {
  container.replaceChildren();
  const model = buildViewModel(state);
  const heading = document.createElement("h2");
  heading.textContent = model.title;
  container.append(heading);
  const row = document.createElement("div");
  row.className = "plot-row";
  for (const plot of model.plots) {
    row.append(renderPlot(plot, onPick));
  }
  container.append(row);
}

export function renderPreference(container: HTMLElement, preference: readonly number[]): void {
  container.textContent = `U = [${preference.map((u) => u.toFixed(3)).join(", ")}]  (sums to 1)`;
}

export function renderDetail(container: HTMLElement, detail: InspectDetail): void {
  container.replaceChildren();
  const title = document.createElement("h3");
  title.textContent = `Round ${detail.round}`;
  if (detail.dominated) {
    const badge = document.createElement("span");
    badge.className = "badge dominated";
    badge.textContent = "dominated";
    title.append(" ", badge);
  }
  if (detail.undefinedRateWarnings.length > 0) {
    const warn = document.createElement("span");
    warn.className = "badge warning";
    warn.title = `undefined rates treated as 0: ${detail.undefinedRateWarnings.join(", ")}`;
    warn.textContent = "⚠ undefined rates";
    title.append(" ", warn);
  }
  container.append(title);

  const losses = document.createElement("p");
  const s = detail.solution;
  losses.textContent = `losses: o1=${s.o1.toFixed(4)}, o2=${s.o2.toFixed(4)}, o3=${s.o3.toFixed(4)}`;
  container.append(losses);

  if (detail.pseudoWeight) {
    const weight = document.createElement("p");
    weight.textContent = `pseudo-weight: [${detail.pseudoWeight.map((w) => w.toFixed(3)).join(", ")}]`;
    container.append(weight);
  }
  if (detail.evalEntry) {
    const e = detail.evalEntry;
    const table = document.createElement("table");
    table.innerHTML =
      "<tr><th>Acc</th><th>WC_Acc</th><th>AUC</th><th>G.M</th><th>MMM</th></tr>" +
      `<tr><td>${e.acc.toFixed(3)}</td><td>${e.wc_acc.toFixed(3)}</td>` +
      `<td>${e.auc.toFixed(3)}</td><td>${e.gm.toFixed(3)}</td><td>${e.mmm.toFixed(3)}</td></tr>`;
    container.append(table);
    for (const attr of e.per_attribute) {
      const line = document.createElement("p");
      line.className = "attribute-line";
      const flag = attr.class_biased ? " [class-biased]" : "";
      line.textContent =
        `${attr.attribute}: DM=${attr.dm.toFixed(3)} CDM=${attr.cdm.toFixed(3)}${flag}`;
      container.append(line);
    }
  }
}

export function renderError(container: HTMLElement, error: unknown): void {
  container.replaceChildren();
  const box = document.createElement("div");
  box.className = "error-box";
  if (error instanceof BundleValidationError) {
    box.textContent = `Bundle rejected at ${error.path}: ${error.message}`;
  } else {
    box.textContent = `Could not load bundle: ${String(error)}`;
  }
  container.append(box);
}

let toastTimer: ReturnType<typeof setTimeout> | null = null;

export function toast(message: string): void {
  let el = document.getElementById("toast");
  if (el === null) {
    el = document.createElement("div");
    el.id = "toast";
    document.body.append(el);
  }
  el.textContent = message;
  el.classList.add("visible");
  if (toastTimer !== null) clearTimeout(toastTimer);
  toastTimer = setTimeout(() => el!.classList.remove("visible"), 2500);
}
