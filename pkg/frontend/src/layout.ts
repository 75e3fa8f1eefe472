/**
 * Automatic left-to-right layered layout.
 *
 * Column index is the generation depth: the longest edge path from any
 * root. Rows within a column are ordered by node id, so the layout is a
 * pure function of the snapshot and two renders never disagree.
 */

import type { EdgeWire, NodeWire } from "./types.js";

export interface Position {
  x: number;
  y: number;
}

export const NODE_WIDTH = 200;
export const NODE_HEIGHT = 88;
export const COLUMN_GAP = 72;
export const ROW_GAP = 28;

/** Longest-path depth per node id; roots sit at depth 0. */
export function generationDepths(nodes: readonly NodeWire[], edges: readonly EdgeWire[]): Map<string, number> {
  const ids = new Set(nodes.map((n) => n.id));
  const indegree = new Map<string, number>();
  const children = new Map<string, string[]>();
  for (const id of ids) indegree.set(id, 0);
  for (const edge of edges) {
    if (!ids.has(edge.source) || !ids.has(edge.target)) continue;
    indegree.set(edge.target, (indegree.get(edge.target) ?? 0) + 1);
    const out = children.get(edge.source);
    if (out) out.push(edge.target);
    else children.set(edge.source, [edge.target]);
  }
  const depth = new Map<string, number>();
  const ready: string[] = [];
  for (const [id, deg] of indegree) {
    if (deg === 0) {
      depth.set(id, 0);
      ready.push(id);
    }
  }
  while (ready.length > 0) {
    const id = ready.shift() as string;
    for (const child of children.get(id) ?? []) {
      const candidate = (depth.get(id) ?? 0) + 1;
      if (candidate > (depth.get(child) ?? 0)) depth.set(child, candidate);
      const remaining = (indegree.get(child) ?? 0) - 1;
      indegree.set(child, remaining);
      if (remaining === 0) ready.push(child);
    }
  }
  return depth;
}

/** Assign every node a non-overlapping grid position. */
export function layeredLayout(nodes: readonly NodeWire[], edges: readonly EdgeWire[]): Map<string, Position> {
  const depth = generationDepths(nodes, edges);
  const columns = new Map<number, string[]>();
  for (const node of nodes) {
    const col = depth.get(node.id) ?? 0;
    const members = columns.get(col);
    if (members) members.push(node.id);
    else columns.set(col, [node.id]);
  }
  const positions = new Map<string, Position>();
  for (const [col, members] of columns) {
    members.sort();
    members.forEach((id, row) => {
      positions.set(id, {
        x: col * (NODE_WIDTH + COLUMN_GAP),
        y: row * (NODE_HEIGHT + ROW_GAP),
      });
    });
  }
  return positions;
}

/** True when two node boxes at these positions would intersect. */
export function boxesOverlap(a: Position, b: Position): boolean {
  return Math.abs(a.x - b.x) < NODE_WIDTH && Math.abs(a.y - b.y) < NODE_HEIGHT;
}
