/**
 * Wire types for the ideamap service API.
 *
 * These mirror the JSON the server sends and accepts; the client never
 * invents fields. Payload shapes are discriminated by the node kind.
 */

export type NodeKind = "RQ" | "Persona" | "Literature" | "Critique";

export const NODE_KINDS: readonly NodeKind[] = ["RQ", "Persona", "Literature", "Critique"];

/** Edge kinds the server accepts; the canvas offers nothing else. */
export const ALLOWED_EDGES: ReadonlyArray<readonly [NodeKind, NodeKind]> = [
  ["RQ", "Persona"],
  ["Persona", "Literature"],
  ["Literature", "Critique"],
  ["Critique", "RQ"],
  ["Literature", "Persona"],
];

/** Default child kind per parent kind for the generate button. */
export const DEFAULT_GENERATE_TARGET: Record<NodeKind, NodeKind> = {
  RQ: "Persona",
  Persona: "Literature",
  Literature: "Critique",
  Critique: "RQ",
};

/** Rating dimension sets are fixed per node kind; other kinds are unrated. */
export const RATING_DIMENSIONS: Partial<Record<NodeKind, readonly string[]>> = {
  RQ: ["relevance", "creativity", "feasibility", "specificity"],
  Critique: ["relevance", "helpfulness", "informativeness", "insightfulness"],
};

export interface PersonaWire {
  persona_name: string;
  role_fields: Record<string, string>;
  background_fields: Record<string, string>;
  user_instructions?: string;
}

export interface CritiqueWire {
  critique_aspect: string;
  critique_detail: string;
}

export interface PaperAuthorWire {
  name: string;
  author_id: string | null;
}

export interface PaperWire {
  paper_id: string;
  title: string;
  abstract: string | null;
  authors: PaperAuthorWire[];
  year: number | null;
  venue: string | null;
  citation_count: number;
  url: string | null;
}

export interface ReviewWire {
  "Relevant Past Findings": string;
  "Existing Methods": string;
  "Contributions from Prior Works": string;
  "Research Gap and Motivation": string;
}

export interface OutlineSectionWire {
  title: string;
  description: string;
}

/** The five outline panel sections, in display order. */
export interface OutlinePanelWire {
  research_question: string;
  literature_review: ReviewWire;
  research_scenario: string;
  outline_table: OutlineSectionWire[];
  expected_outcomes: string;
}

export interface RQPayload {
  question: string;
  favorite?: boolean;
  outline?: OutlinePanelWire;
}

export interface PersonaPayload {
  persona: PersonaWire;
}

export interface LiteraturePayload {
  topic: string;
  papers: PaperWire[];
  error?: string;
}

export interface CritiquePayload {
  critique: CritiqueWire;
}

export type NodePayload = RQPayload | PersonaPayload | LiteraturePayload | CritiquePayload;

export type NodeOrigin = "generated" | "manual";

export interface NodeWire {
  id: string;
  flow?: string;
  kind: NodeKind;
  payload: NodePayload;
  created_at: number;
  origin: NodeOrigin;
  deleted: boolean;
}

export interface EdgeWire {
  source: string;
  target: string;
}

export interface RatingWire {
  node: string;
  dimensions: Record<string, number>;
  submitted_at: number;
}

export interface EditEventWire {
  node: string;
  field_path: string;
  old_value: unknown;
  new_value: unknown;
  timestamp: number;
}

export interface FlowDocument {
  schema_version: number;
  flow_id: string;
  nodes: NodeWire[];
  edges: EdgeWire[];
  ratings: RatingWire[];
  edit_log: EditEventWire[];
}

export interface MetricsWire {
  total_node_count: number;
  pct_nodes_used: number;
  edits_by_kind: Record<string, number>;
}

export interface JobStateWire {
  status: "pending" | "done" | "failed";
  result: unknown;
  error: string | null;
}
