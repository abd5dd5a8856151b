/** SVG rendering of a DFG using the deterministic layered layout.
 * Edges can carry a visual state so the compare view highlights deltas. */

import type { DfgJson } from "./types.js";
import { layeredLayout } from "./layout.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export type EdgeState = "normal" | "added" | "removed" | "changed";

export interface EdgeDecoration {
  state: EdgeState;
  label?: string;
}

function svgEl(tag: string, attrs: Record<string, string>): SVGElement {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  return node;
}

const EDGE_COLORS: Record<EdgeState, string> = {
  normal: "#6b7f93",
  added: "#1d8348",
  removed: "#c0392b",
  changed: "#b9770e",
};

export function renderDfgSvg(
  dfg: DfgJson,
  decorate: (from: string, to: string) => EdgeDecoration = () => ({ state: "normal" }),
): SVGSVGElement {
  const layout = layeredLayout(dfg);
  const svg = svgEl("svg", {
    viewBox: `0 0 ${layout.width} ${layout.height}`,
    width: String(layout.width),
    height: String(layout.height),
    class: "dfg",
  }) as SVGSVGElement;

  const maxFreq = Math.max(1, ...dfg.edges.map((e) => e.freq));
  const sorted = [...dfg.edges].sort((a, b) => a.from.localeCompare(b.from) || a.to.localeCompare(b.to));
  for (const edge of sorted) {
    const from = layout.points.get(edge.from)!;
    const to = layout.points.get(edge.to)!;
    const deco = decorate(edge.from, edge.to);
    const color = EDGE_COLORS[deco.state];
    const backward = to.x <= from.x;
    const bend = backward || from.y === to.y ? 26 : 10;
    const midX = (from.x + to.x) / 2;
    const midY = (from.y + to.y) / 2 - bend;
    const path = svgEl("path", {
      d: `M ${from.x} ${from.y} Q ${midX} ${midY} ${to.x} ${to.y}`,
      fill: "none",
      stroke: color,
      "stroke-width": String(1 + (2.5 * edge.freq) / maxFreq),
      opacity: "0.8",
    });
    svg.append(path);
    const label = svgEl("text", {
      x: String(midX),
      y: String(midY + 4),
      "text-anchor": "middle",
      class: "edge-label",
      fill: color,
    });
    label.textContent = deco.label ?? String(edge.freq);
    svg.append(label);
  }

  for (const point of layout.points.values()) {
    const circle = svgEl("circle", {
      cx: String(point.x),
      cy: String(point.y),
      r: "22",
      class: "node",
    });
    svg.append(circle);
    const text = svgEl("text", {
      x: String(point.x),
      y: String(point.y + 4),
      "text-anchor": "middle",
      class: "node-label",
    });
    const name = point.node;
    text.textContent = name.length > 9 ? `${name.slice(0, 8)}…` : name;
    svg.append(text);
    if (name.length > 9) {
      const title = svgEl("title", {});
      title.textContent = name;
      text.append(title);
    }
  }
  return svg;
}
