/**
 * Deterministic layered layout computed from the relation topology.
 *
 * Events are layered by longest condition-edge distance from a source
 * event (cycles are cut by capping the depth), then spread horizontally
 * within their layer in declaration order.  Manual drag positions win
 * over the computed ones and are persisted per graph in browser storage.
 */

import type { GraphView } from "./model.js";

export interface Point {
  x: number;
  y: number;
}

export const CARD_WIDTH = 170;
export const CARD_HEIGHT = 96;
const H_GAP = 60;
const V_GAP = 70;

export function computeLayout(graph: GraphView): Map<string, Point> {
  const layer = new Map<string, number>();
  for (const event of graph.events) {
    layer.set(event, 0);
  }
  // longest-path layering over condition and response edges, depth-capped
  const edges = [...graph.conditions, ...graph.responses];
  const cap = graph.events.length;
  for (let pass = 0; pass < cap; pass += 1) {
    let changed = false;
    for (const [source, target] of edges) {
      const proposed = (layer.get(source) ?? 0) + 1;
      if (proposed <= cap && proposed > (layer.get(target) ?? 0)) {
        layer.set(target, proposed);
        changed = true;
      }
    }
    if (!changed) {
      break;
    }
  }
  const byLayer = new Map<number, string[]>();
  for (const event of graph.events) {
    const depth = layer.get(event) ?? 0;
    const row = byLayer.get(depth) ?? [];
    row.push(event);
    byLayer.set(depth, row);
  }
  const positions = new Map<string, Point>();
  for (const [depth, row] of byLayer) {
    row.forEach((event, column) => {
      positions.set(event, {
        x: 40 + column * (CARD_WIDTH + H_GAP),
        y: 30 + depth * (CARD_HEIGHT + V_GAP),
      });
    });
  }
  return positions;
}

export function graphKey(graph: GraphView): string {
  return `dcr-layout:${graph.events.join(",")}`;
}

type Stored = Record<string, Point>;

function storage(): Storage | null {
  try {
    return typeof localStorage === "undefined" ? null : localStorage;
  } catch {
    return null;
  }
}

export function loadOverrides(graph: GraphView): Map<string, Point> {
  const store = storage();
  if (!store) {
    return new Map();
  }
  try {
    const raw = store.getItem(graphKey(graph));
    if (!raw) {
      return new Map();
    }
    const parsed = JSON.parse(raw) as Stored;
    return new Map(Object.entries(parsed));
  } catch {
    return new Map();
  }
}

export function saveOverride(graph: GraphView, event: string, point: Point): void {
  const store = storage();
  if (!store) {
    return;
  }
  const current = Object.fromEntries(loadOverrides(graph));
  current[event] = point;
  store.setItem(graphKey(graph), JSON.stringify(current));
}

export function positionsFor(graph: GraphView): Map<string, Point> {
  const computed = computeLayout(graph);
  for (const [event, point] of loadOverrides(graph)) {
    if (computed.has(event)) {
      computed.set(event, point);
    }
  }
  return computed;
}
