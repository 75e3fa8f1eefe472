/**
 * Session store: the single source of client state.
 *
 * Server-authoritative by construction. Every mutation issues the API
 * call and then re-pulls the snapshot; nothing is patched locally, so
 * the rendered state can never diverge from the server. Failed calls
 * keep the last good snapshot and surface the error.
 */

import { ApiError, type ApiClient } from "./api.js";
import { buildCanvasView, type CanvasView } from "./canvas.js";
import { panelForNode, traitFieldPath, type PanelView, type TraitCategory } from "./panels.js";
import { buildRatingBody } from "./ratings.js";
import type { FlowDocument, NodeKind, NodeWire, PaperWire } from "./types.js";

export type Listener = () => void;

export class SessionStore {
  document: FlowDocument | null = null;
  selectedNodeId: string | null = null;
  lastError: string | null = null;
  private readonly collapsed = new Set<string>();
  private readonly listeners = new Set<Listener>();

  constructor(
    private readonly api: ApiClient,
    readonly flowId: string,
  ) {}

  subscribe(listener: Listener): () => void {
    this.listeners.add(listener);
    return () => this.listeners.delete(listener);
  }

  private emit(): void {
    for (const listener of this.listeners) listener();
  }

  /** Pull the latest snapshot; the only way document state changes. */
  async refresh(): Promise<void> {
    this.document = await this.api.getFlow(this.flowId);
    if (this.selectedNodeId !== null && this.node(this.selectedNodeId) === null) {
      this.selectedNodeId = null;
    }
    this.emit();
  }

  node(nodeId: string): NodeWire | null {
    const found = this.document?.nodes.find((n) => n.id === nodeId && !n.deleted);
    return found ?? null;
  }

  select(nodeId: string | null): void {
    if (nodeId !== null && this.node(nodeId) === null) {
      throw new Error(`no live node ${nodeId}`);
    }
    this.selectedNodeId = nodeId;
    this.emit();
  }

  toggleCollapsed(nodeId: string): void {
    if (this.collapsed.has(nodeId)) this.collapsed.delete(nodeId);
    else this.collapsed.add(nodeId);
    this.emit();
  }

  /** Canvas view model for the current snapshot. */
  canvas(): CanvasView {
    if (!this.document) throw new Error("no snapshot loaded");
    return buildCanvasView(this.document, this.collapsed, this.selectedNodeId);
  }

  /** The single open panel, bound to the selected node; null when nothing is selected. */
  panel(): PanelView | null {
    if (this.selectedNodeId === null) return null;
    const node = this.node(this.selectedNodeId);
    return node ? panelForNode(node) : null;
  }

  private async mutate(call: () => Promise<unknown>): Promise<void> {
    try {
      await call();
      this.lastError = null;
    } catch (error) {
      this.lastError = error instanceof ApiError ? error.message : String(error);
      this.emit();
      throw error;
    }
    await this.refresh();
  }

  // -- persona customizer ----------------------------------------------------

  addTrait(nodeId: string, category: TraitCategory, trait: string, value: string): Promise<void> {
    return this.mutate(() => this.api.editNode(this.flowId, nodeId, traitFieldPath(category, trait), value));
  }

  modifyTrait(nodeId: string, category: TraitCategory, trait: string, value: string): Promise<void> {
    return this.mutate(() => this.api.editNode(this.flowId, nodeId, traitFieldPath(category, trait), value));
  }

  /** Remove is a PATCH with a null value. */
  removeTrait(nodeId: string, category: TraitCategory, trait: string): Promise<void> {
    return this.mutate(() => this.api.editNode(this.flowId, nodeId, traitFieldPath(category, trait), null));
  }

  setInstructions(nodeId: string, text: string | null): Promise<void> {
    return this.mutate(() => this.api.editNode(this.flowId, nodeId, "persona.user_instructions", text));
  }

  renamePersona(nodeId: string, name: string): Promise<void> {
    return this.mutate(() => this.api.editNode(this.flowId, nodeId, "persona.persona_name", name));
  }

  // -- ratings ---------------------------------------------------------------

  submitRating(nodeId: string, values: Record<string, number>): Promise<void> {
    const node = this.node(nodeId);
    if (!node) throw new Error(`no live node ${nodeId}`);
    const body = buildRatingBody(node.kind, values);
    return this.mutate(() => this.api.rate(this.flowId, nodeId, body.dimensions));
  }

  // -- generation and graph --------------------------------------------------

  createSeedRQ(question: string): Promise<void> {
    return this.mutate(() => this.api.addNode(this.flowId, "RQ", { question }));
  }

  generate(nodeId: string, targetKind?: NodeKind): Promise<void> {
    return this.mutate(() => this.api.generate(this.flowId, nodeId, targetKind));
  }

  deleteNode(nodeId: string): Promise<void> {
    return this.mutate(() => this.api.deleteNode(this.flowId, nodeId));
  }

  toggleFavorite(nodeId: string): Promise<void> {
    const node = this.node(nodeId);
    if (!node || node.kind !== "RQ") throw new Error("favorite applies to RQ nodes");
    const current = Boolean((node.payload as { favorite?: boolean }).favorite);
    return this.mutate(() => this.api.editNode(this.flowId, nodeId, "favorite", !current));
  }

  // -- literature curation ---------------------------------------------------

  removePaper(nodeId: string, paperId: string): Promise<void> {
    const node = this.node(nodeId);
    if (!node || node.kind !== "Literature") throw new Error("papers live on Literature nodes");
    const papers = (node.payload as { papers: PaperWire[] }).papers;
    const kept = papers.filter((p) => p.paper_id !== paperId);
    return this.mutate(() => this.api.editNode(this.flowId, nodeId, "papers", kept));
  }

  addPaper(nodeId: string, paper: PaperWire): Promise<void> {
    const node = this.node(nodeId);
    if (!node || node.kind !== "Literature") throw new Error("papers live on Literature nodes");
    const papers = (node.payload as { papers: PaperWire[] }).papers;
    if (papers.some((p) => p.paper_id === paper.paper_id)) return Promise.resolve();
    return this.mutate(() => this.api.editNode(this.flowId, nodeId, "papers", [...papers, paper]));
  }

  searchPapers(nodeId: string, q: string, limit = 20): Promise<PaperWire[]> {
    return this.api.searchPapers(this.flowId, nodeId, q, limit);
  }

  // -- outline ---------------------------------------------------------------

  buildOutline(nodeId: string, scenario?: string): Promise<void> {
    return this.mutate(() => this.api.buildOutline(this.flowId, nodeId, scenario));
  }
}
