/**
 * Mind-map canvas: view model construction and DOM rendering.
 *
 * The view is a pure function of the flow snapshot plus ephemeral UI
 * state (collapsed ids, selection). Edges are drawn only for edges stored
 * on the server; nothing is synthesized client side.
 */

import { boxesOverlap, layeredLayout, NODE_HEIGHT, NODE_WIDTH, type Position } from "./layout.js";
import { dimensionsFor } from "./ratings.js";
import {
  DEFAULT_GENERATE_TARGET,
  type CritiquePayload,
  type FlowDocument,
  type LiteraturePayload,
  type NodeKind,
  type NodeWire,
  type PersonaPayload,
  type RQPayload,
} from "./types.js";

export interface RatingWidgetState {
  dimensions: readonly string[];
  /** Last stored rating for this node, if any. */
  submitted: Record<string, number> | null;
}

export interface NodeAction {
  id: "generate" | "generate-personas" | "favorite" | "outline";
  label: string;
  target?: NodeKind;
}

export interface CanvasNodeView {
  id: string;
  kind: NodeKind;
  label: string;
  position: Position;
  collapsed: boolean;
  selected: boolean;
  favorite: boolean;
  rating: RatingWidgetState | null;
  actions: NodeAction[];
}

export interface CanvasEdgeView {
  source: string;
  target: string;
  from: Position;
  to: Position;
}

export interface CanvasView {
  flowId: string;
  empty: boolean;
  nodes: CanvasNodeView[];
  edges: CanvasEdgeView[];
}

function nodeLabel(node: NodeWire): string {
  switch (node.kind) {
    case "RQ":
      return (node.payload as RQPayload).question;
    case "Persona":
      return (node.payload as PersonaPayload).persona.persona_name;
    case "Literature": {
      const payload = node.payload as LiteraturePayload;
      return `${payload.topic} (${payload.papers.length} papers)`;
    }
    case "Critique":
      return (node.payload as CritiquePayload).critique.critique_aspect;
  }
}

function nodeActions(node: NodeWire): NodeAction[] {
  const target = DEFAULT_GENERATE_TARGET[node.kind];
  const actions: NodeAction[] = [
    { id: "generate", label: `Generate ${target.toLowerCase()}s`, target },
  ];
  if (node.kind === "Literature") {
    actions.push({ id: "generate-personas", label: "Generate personas", target: "Persona" });
  }
  if (node.kind === "RQ") {
    actions.push({ id: "favorite", label: "Favorite" });
    actions.push({ id: "outline", label: "Build outline" });
  }
  return actions;
}

function lastRating(document: FlowDocument, nodeId: string): Record<string, number> | null {
  for (let i = document.ratings.length - 1; i >= 0; i -= 1) {
    if (document.ratings[i].node === nodeId) return document.ratings[i].dimensions;
  }
  return null;
}

export function buildCanvasView(
  document: FlowDocument,
  collapsed: ReadonlySet<string> = new Set(),
  selectedId: string | null = null,
): CanvasView {
  const live = document.nodes.filter((n) => !n.deleted);
  const liveIds = new Set(live.map((n) => n.id));
  const edges = document.edges.filter((e) => liveIds.has(e.source) && liveIds.has(e.target));
  const positions = layeredLayout(live, edges);

  const nodes: CanvasNodeView[] = live.map((node) => {
    const dimensions = dimensionsFor(node.kind);
    return {
      id: node.id,
      kind: node.kind,
      label: nodeLabel(node),
      position: positions.get(node.id) as Position,
      collapsed: collapsed.has(node.id),
      selected: node.id === selectedId,
      favorite: node.kind === "RQ" && Boolean((node.payload as RQPayload).favorite),
      rating: dimensions
        ? { dimensions, submitted: lastRating(document, node.id) }
        : null,
      actions: nodeActions(node),
    };
  });
  return {
    flowId: document.flow_id,
    empty: nodes.length === 0,
    nodes,
    edges: edges.map((e) => ({
      source: e.source,
      target: e.target,
      from: positions.get(e.source) as Position,
      to: positions.get(e.target) as Position,
    })),
  };
}

/** Ids of node pairs whose boxes intersect; empty for a healthy layout. */
export function overlappingPairs(view: CanvasView): Array<[string, string]> {
  const pairs: Array<[string, string]> = [];
  for (let i = 0; i < view.nodes.length; i += 1) {
    for (let j = i + 1; j < view.nodes.length; j += 1) {
      if (boxesOverlap(view.nodes[i].position, view.nodes[j].position)) {
        pairs.push([view.nodes[i].id, view.nodes[j].id]);
      }
    }
  }
  return pairs;
}

const SVG_NS = "http://www.w3.org/2000/svg";

function renderRatingWidget(doc: Document, node: CanvasNodeView): HTMLElement {
  const widget = doc.createElement("div");
  widget.className = "rating-widget";
  for (const name of node.rating?.dimensions ?? []) {
    const row = doc.createElement("label");
    row.className = "rating-row";
    row.textContent = name;
    const slider = doc.createElement("input");
    slider.type = "range";
    slider.min = "1";
    slider.max = "5";
    slider.step = "1";
    slider.name = name;
    slider.value = String(node.rating?.submitted?.[name] ?? 3);
    row.appendChild(slider);
    widget.appendChild(row);
  }
  return widget;
}

/** Render the whole canvas into the host element, replacing its content. */
export function renderCanvas(view: CanvasView, host: HTMLElement): void {
  const doc = host.ownerDocument;
  host.innerHTML = "";
  host.classList.add("canvas");

  if (view.empty) {
    const blank = doc.createElement("div");
    blank.className = "empty-canvas";
    const button = doc.createElement("button");
    button.className = "create-rq";
    button.textContent = "Create a research question";
    blank.appendChild(button);
    host.appendChild(blank);
    return;
  }

  const wires = doc.createElementNS(SVG_NS, "svg");
  wires.setAttribute("class", "edges");
  for (const edge of view.edges) {
    const line = doc.createElementNS(SVG_NS, "line");
    line.setAttribute("data-source", edge.source);
    line.setAttribute("data-target", edge.target);
    line.setAttribute("x1", String(edge.from.x + NODE_WIDTH));
    line.setAttribute("y1", String(edge.from.y + NODE_HEIGHT / 2));
    line.setAttribute("x2", String(edge.to.x));
    line.setAttribute("y2", String(edge.to.y + NODE_HEIGHT / 2));
    wires.appendChild(line);
  }
  host.appendChild(wires);

  for (const node of view.nodes) {
    const card = doc.createElement("div");
    card.className = `node node-${node.kind.toLowerCase()}`;
    if (node.selected) card.classList.add("selected");
    if (node.collapsed) card.classList.add("collapsed");
    card.dataset.nodeId = node.id;
    card.dataset.kind = node.kind;
    card.style.left = `${node.position.x}px`;
    card.style.top = `${node.position.y}px`;

    const badge = doc.createElement("span");
    badge.className = "kind-badge";
    badge.textContent = node.kind;
    card.appendChild(badge);

    const label = doc.createElement("div");
    label.className = "node-label";
    label.textContent = node.label;
    card.appendChild(label);

    if (node.favorite) {
      const star = doc.createElement("span");
      star.className = "favorite-mark";
      star.textContent = "★";
      card.appendChild(star);
    }

    if (!node.collapsed) {
      if (node.rating) card.appendChild(renderRatingWidget(doc, node));
      const bar = doc.createElement("div");
      bar.className = "actions";
      for (const action of node.actions) {
        const button = doc.createElement("button");
        button.className = `action action-${action.id}`;
        button.textContent = action.label;
        if (action.target) button.dataset.target = action.target;
        bar.appendChild(button);
      }
      card.appendChild(bar);
    }
    host.appendChild(card);
  }
}
