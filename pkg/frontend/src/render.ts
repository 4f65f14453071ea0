import type { ControllerState } from "./controller.js";
import { formatAmplitude, formatConceptLabel, formatImplication, fullPrecision } from "./format.js";
import { layoutLattice } from "./layout.js";
import type { DimensionDoc, EnsembleDoc, LatticeDoc } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

function clear(el: Element): void {
  while (el.firstChild) {
    el.removeChild(el.firstChild);
  }
}

export function renderPhaseBadge(el: HTMLElement, state: ControllerState): void {
  const summary = state.summary;
  const status = summary === null ? "connecting" : summary.status;
  el.textContent = status;
  el.dataset.phase = status;
}

export function renderLattice(svg: SVGSVGElement, doc: LatticeDoc): void {
  clear(svg);
  const layout = layoutLattice(doc);
  svg.setAttribute("viewBox", `0 0 ${layout.width} ${layout.height}`);
  for (const edge of layout.edges) {
    const lower = layout.nodes[edge.lower];
    const upper = layout.nodes[edge.upper];
    const line = document.createElementNS(SVG_NS, "line");
    line.setAttribute("x1", String(upper.x));
    line.setAttribute("y1", String(upper.y));
    line.setAttribute("x2", String(lower.x));
    line.setAttribute("y2", String(lower.y));
    line.setAttribute("class", "hasse-edge");
    svg.appendChild(line);
  }
  for (const node of layout.nodes) {
    const group = document.createElementNS(SVG_NS, "g");
    group.setAttribute("class", "concept-node");
    const circle = document.createElementNS(SVG_NS, "circle");
    circle.setAttribute("cx", String(node.x));
    circle.setAttribute("cy", String(node.y));
    circle.setAttribute("r", String(6 + Math.min(10, node.extent.length * 2)));
    const title = document.createElementNS(SVG_NS, "title");
    title.textContent =
      `intent: {${node.intent.join(", ")}}\nextent: {${node.extent.join(", ")}}`;
    circle.appendChild(title);
    group.appendChild(circle);
    const text = document.createElementNS(SVG_NS, "text");
    text.setAttribute("x", String(node.x));
    text.setAttribute("y", String(node.y - 14));
    text.setAttribute("text-anchor", "middle");
    text.textContent = formatConceptLabel(node.intent);
    group.appendChild(text);
    svg.appendChild(group);
  }
}

export function renderAmplitudes(el: HTMLElement, doc: EnsembleDoc): void {
  clear(el);
  doc.basis.forEach((attr, i) => {
    const amplitude = doc.amplitudes[i];
    const column = document.createElement("div");
    column.className = "amp-column";
    column.title = fullPrecision(amplitude);
    const bar = document.createElement("div");
    bar.className = "amp-bar";
    bar.style.height = `${Math.round(amplitude * 120)}px`;
    const value = document.createElement("span");
    value.className = "amp-value";
    value.textContent = formatAmplitude(amplitude);
    const label = document.createElement("span");
    label.className = "amp-label";
    label.textContent = attr;
    column.append(value, bar, label);
    el.appendChild(column);
  });
}

export function renderTimeline(
  slider: HTMLInputElement,
  label: HTMLElement,
  state: ControllerState,
): void {
  const summary = state.summary;
  if (summary === null) {
    slider.disabled = true;
    return;
  }
  slider.min = "0";
  slider.max = String(summary.granule);
  const shown = state.viewGranule ?? summary.granule;
  slider.value = String(shown);
  slider.disabled = summary.granule === 0;
  label.textContent = `granule ${shown} / ${summary.granule}`;
}

export function renderCuePanel(el: HTMLElement, state: ControllerState): void {
  clear(el);
  const summary = state.summary;
  if (summary === null) {
    return;
  }
  const line = document.createElement("p");
  line.className = "current-cue";
  if (summary.awaiting_cue) {
    line.textContent = `cue awaiting your verdict: ${formatImplication(summary.awaiting_cue)}`;
  } else if (summary.pending) {
    line.textContent = `uncertain about: ${formatImplication(summary.pending)}` +
      (summary.pending_counterexample?.counterexample
        ? ` (oracle suggests ${summary.pending_counterexample.counterexample.name})`
        : "");
  } else if (summary.suggestion) {
    line.textContent = `suggested next cue: ${formatImplication(summary.suggestion)}`;
  } else {
    line.textContent = "no unconfirmed cue suggested";
  }
  el.appendChild(line);
}

export interface IntentPicker {
  root: HTMLElement;
  read(): string[];
  reset(): void;
}

/** Per-attribute checkboxes grouped by quality dimension. */
export function buildIntentPicker(dimensions: DimensionDoc[], namePrefix: string): IntentPicker {
  const root = document.createElement("div");
  root.className = "intent-picker";
  const boxes: HTMLInputElement[] = [];
  for (const dim of dimensions) {
    const group = document.createElement("fieldset");
    const legend = document.createElement("legend");
    legend.textContent = dim.name;
    group.appendChild(legend);
    for (const attr of dim.attributes) {
      const wrap = document.createElement("label");
      const box = document.createElement("input");
      box.type = "checkbox";
      box.value = attr;
      box.name = `${namePrefix}-${attr}`;
      boxes.push(box);
      wrap.append(box, document.createTextNode(attr));
      group.appendChild(wrap);
    }
    root.appendChild(group);
  }
  return {
    root,
    read: () => boxes.filter((b) => b.checked).map((b) => b.value),
    reset: () => boxes.forEach((b) => (b.checked = false)),
  };
}

export function renderError(el: HTMLElement, message: string | null, retry: () => void): void {
  clear(el);
  if (message === null) {
    el.hidden = true;
    return;
  }
  el.hidden = false;
  const text = document.createElement("span");
  text.textContent = message;
  const button = document.createElement("button");
  button.textContent = "retry";
  button.addEventListener("click", retry);
  el.append(text, button);
}
