/**
 * Side panel inspectors, one per node kind.
 *
 * Exactly one panel is open at a time, bound to the selected node:
 * persona customizer, literature panel, outline panel for RQ nodes, and
 * a read-only critique detail. Forms stage input locally; committing a
 * form issues an API call and the panel re-renders from server truth.
 */

import type {
  CritiquePayload,
  LiteraturePayload,
  NodeWire,
  OutlinePanelWire,
  PaperWire,
  PersonaPayload,
  RQPayload,
} from "./types.js";

export type TraitCategory = "role" | "background";

export interface TraitRow {
  category: TraitCategory;
  trait: string;
  value: string;
}

export interface PersonaCustomizerView {
  kind: "persona";
  nodeId: string;
  name: string;
  traits: TraitRow[];
  userInstructions: string | null;
}

export interface LiteraturePanelView {
  kind: "literature";
  nodeId: string;
  topic: string;
  papers: PaperWire[];
  error: string | null;
}

export interface OutlinePanelView {
  kind: "outline";
  nodeId: string;
  question: string;
  favorite: boolean;
  panel: OutlinePanelWire | null;
}

export interface CritiqueDetailView {
  kind: "critique";
  nodeId: string;
  aspect: string;
  detail: string;
}

export type PanelView =
  | PersonaCustomizerView
  | LiteraturePanelView
  | OutlinePanelView
  | CritiqueDetailView;

/** PATCH path for one persona trait. */
export function traitFieldPath(category: TraitCategory, trait: string): string {
  return `persona.${category}_fields.${trait}`;
}

export function panelForNode(node: NodeWire): PanelView {
  switch (node.kind) {
    case "Persona": {
      const persona = (node.payload as PersonaPayload).persona;
      const traits: TraitRow[] = [];
      for (const [trait, value] of Object.entries(persona.role_fields)) {
        traits.push({ category: "role", trait, value });
      }
      for (const [trait, value] of Object.entries(persona.background_fields)) {
        traits.push({ category: "background", trait, value });
      }
      return {
        kind: "persona",
        nodeId: node.id,
        name: persona.persona_name,
        traits,
        userInstructions: persona.user_instructions ?? null,
      };
    }
    case "Literature": {
      const payload = node.payload as LiteraturePayload;
      return {
        kind: "literature",
        nodeId: node.id,
        topic: payload.topic,
        papers: payload.papers,
        error: payload.error ?? null,
      };
    }
    case "RQ": {
      const payload = node.payload as RQPayload;
      return {
        kind: "outline",
        nodeId: node.id,
        question: payload.question,
        favorite: Boolean(payload.favorite),
        panel: payload.outline ?? null,
      };
    }
    case "Critique": {
      const critique = (node.payload as CritiquePayload).critique;
      return {
        kind: "critique",
        nodeId: node.id,
        aspect: critique.critique_aspect,
        detail: critique.critique_detail,
      };
    }
  }
}

function el(doc: Document, tag: string, className: string, text?: string): HTMLElement {
  const node = doc.createElement(tag);
  node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function renderPersona(view: PersonaCustomizerView, host: HTMLElement): void {
  const doc = host.ownerDocument;
  host.appendChild(el(doc, "h2", "panel-title", view.name));

  for (const category of ["role", "background"] as const) {
    const section = el(doc, "section", `trait-category trait-${category}`);
    section.appendChild(el(doc, "h3", "category-title", `${category} traits`));
    for (const row of view.traits.filter((t) => t.category === category)) {
      const line = el(doc, "div", "trait-row");
      line.dataset.category = row.category;
      line.dataset.trait = row.trait;
      line.appendChild(el(doc, "span", "trait-name", row.trait));
      const input = doc.createElement("input");
      input.className = "trait-value";
      input.value = row.value;
      line.appendChild(input);
      line.appendChild(el(doc, "button", "remove-trait", "Remove"));
      section.appendChild(line);
    }
    const adder = el(doc, "div", "add-trait");
    const name = doc.createElement("input");
    name.className = "new-trait-name";
    name.placeholder = "Trait";
    const value = doc.createElement("input");
    value.className = "new-trait-value";
    value.placeholder = "Value";
    adder.appendChild(name);
    adder.appendChild(value);
    adder.appendChild(el(doc, "button", "add-trait-button", "Add"));
    section.appendChild(adder);
    host.appendChild(section);
  }

  const instructions = el(doc, "section", "user-instructions");
  instructions.appendChild(el(doc, "h3", "category-title", "Instructions"));
  const textarea = doc.createElement("textarea");
  textarea.className = "instructions-input";
  textarea.value = view.userInstructions ?? "";
  instructions.appendChild(textarea);
  host.appendChild(instructions);
}

function renderLiterature(view: LiteraturePanelView, host: HTMLElement): void {
  const doc = host.ownerDocument;
  host.appendChild(el(doc, "h2", "panel-title", view.topic));
  if (view.error) host.appendChild(el(doc, "div", "topic-error", view.error));

  const list = el(doc, "ul", "paper-list");
  for (const paper of view.papers) {
    const item = el(doc, "li", "paper");
    item.dataset.paperId = paper.paper_id;
    item.appendChild(el(doc, "div", "paper-title", paper.title));
    const byline = paper.authors.map((a) => a.name).join(", ");
    const year = paper.year === null ? "n.d." : String(paper.year);
    item.appendChild(el(doc, "div", "paper-meta", `${byline || "Unknown"} (${year}), cited ${paper.citation_count}`));
    if (paper.abstract) item.appendChild(el(doc, "div", "paper-abstract", paper.abstract));
    item.appendChild(el(doc, "button", "remove-paper", "Delete"));
    list.appendChild(item);
  }
  host.appendChild(list);

  const search = el(doc, "div", "paper-search");
  const box = doc.createElement("input");
  box.className = "paper-search-input";
  box.placeholder = "Search papers to add";
  search.appendChild(box);
  search.appendChild(el(doc, "button", "paper-search-button", "Search"));
  host.appendChild(search);
}

const OUTLINE_SECTION_ORDER: ReadonlyArray<keyof OutlinePanelWire> = [
  "research_question",
  "literature_review",
  "research_scenario",
  "outline_table",
  "expected_outcomes",
];

function renderOutline(view: OutlinePanelView, host: HTMLElement): void {
  const doc = host.ownerDocument;
  host.appendChild(el(doc, "h2", "panel-title", view.question));
  if (view.favorite) host.appendChild(el(doc, "span", "favorite-mark", "★"));

  const controls = el(doc, "div", "outline-controls");
  const scenario = doc.createElement("input");
  scenario.className = "scenario-picker";
  scenario.placeholder = "Research scenario (optional)";
  controls.appendChild(scenario);
  controls.appendChild(el(doc, "button", "regenerate-outline", view.panel ? "Regenerate" : "Generate outline"));
  host.appendChild(controls);

  if (!view.panel) {
    host.appendChild(el(doc, "div", "outline-empty", "No outline yet"));
    return;
  }
  for (const key of OUTLINE_SECTION_ORDER) {
    const section = el(doc, "section", `outline-section outline-${key}`);
    section.appendChild(el(doc, "h3", "section-title", key.replace(/_/g, " ")));
    const value = view.panel[key];
    if (key === "literature_review") {
      for (const [name, text] of Object.entries(view.panel.literature_review)) {
        const row = el(doc, "div", "review-part");
        row.appendChild(el(doc, "strong", "review-part-name", name));
        row.appendChild(el(doc, "span", "review-part-text", text));
        section.appendChild(row);
      }
    } else if (key === "outline_table") {
      for (const entry of value as OutlinePanelWire["outline_table"]) {
        const row = el(doc, "div", "table-section");
        row.appendChild(el(doc, "h4", "table-section-title", entry.title));
        row.appendChild(el(doc, "p", "table-section-description", entry.description));
        section.appendChild(row);
      }
    } else {
      section.appendChild(el(doc, "p", "section-text", String(value)));
    }
    host.appendChild(section);
  }
}

function renderCritique(view: CritiqueDetailView, host: HTMLElement): void {
  const doc = host.ownerDocument;
  host.appendChild(el(doc, "h2", "panel-title", view.aspect));
  host.appendChild(el(doc, "p", "critique-detail", view.detail));
}

/** Render the panel for the selected node, replacing the host content. */
export function renderPanel(view: PanelView, host: HTMLElement): void {
  host.innerHTML = "";
  host.classList.add("panel", `panel-${view.kind}`);
  host.dataset.nodeId = view.nodeId;
  switch (view.kind) {
    case "persona":
      renderPersona(view, host);
      break;
    case "literature":
      renderLiterature(view, host);
      break;
    case "outline":
      renderOutline(view, host);
      break;
    case "critique":
      renderCritique(view, host);
      break;
  }
}
