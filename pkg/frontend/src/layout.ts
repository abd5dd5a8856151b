/** Deterministic layered DFG layout.
 *
 * Layers are breadth-first distances from the start glyph; nodes are
 * ordered by name inside each layer, so the same graph always renders
 * identically and diffs between renders are stable.
 */

import type { DfgJson } from "./types.js";

export const START_GLYPH = "▶";
export const END_GLYPH = "■";

export interface NodePoint {
  node: string;
  x: number;
  y: number;
}

export interface Layout {
  points: Map<string, NodePoint>;
  layers: string[][];
  width: number;
  height: number;
}

export function layeredLayout(dfg: DfgJson): Layout {
  const nodes = new Set<string>();
  const successors = new Map<string, string[]>();
  for (const edge of dfg.edges) {
    nodes.add(edge.from);
    nodes.add(edge.to);
    const out = successors.get(edge.from) ?? [];
    out.push(edge.to);
    successors.set(edge.from, out);
  }

  const layerOf = new Map<string, number>();
  if (nodes.has(START_GLYPH)) {
    layerOf.set(START_GLYPH, 0);
    let frontier = [START_GLYPH];
    while (frontier.length > 0) {
      const next: string[] = [];
      for (const node of frontier.sort()) {
        for (const target of (successors.get(node) ?? []).sort()) {
          if (!layerOf.has(target)) {
            layerOf.set(target, (layerOf.get(node) ?? 0) + 1);
            next.push(target);
          }
        }
      }
      frontier = next;
    }
  }
  let deepest = 0;
  for (const layer of layerOf.values()) deepest = Math.max(deepest, layer);
  for (const node of [...nodes].sort()) {
    if (!layerOf.has(node)) layerOf.set(node, deepest + 1);
  }

  const layers: string[][] = [];
  for (const [node, layer] of layerOf) {
    while (layers.length <= layer) layers.push([]);
    layers[layer].push(node);
  }
  for (const layer of layers) layer.sort();

  const xGap = 140;
  const yGap = 70;
  const points = new Map<string, NodePoint>();
  let tallest = 1;
  layers.forEach((layer, x) => {
    tallest = Math.max(tallest, layer.length);
    layer.forEach((node, i) => {
      const y = (i - (layer.length - 1) / 2) * yGap;
      points.set(node, { node, x: x * xGap + 70, y });
    });
  });
  const height = tallest * yGap + 60;
  for (const point of points.values()) {
    point.y += height / 2;
  }
  return { points, layers, width: layers.length * xGap + 60, height };
}
