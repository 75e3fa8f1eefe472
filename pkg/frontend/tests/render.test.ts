import { describe, expect, it } from "vitest";

import { buildCanvasView, renderCanvas } from "../src/canvas.js";
import { panelForNode, renderPanel } from "../src/panels.js";
import type { FlowDocument, NodeWire } from "../src/types.js";
import { loadFixture } from "./helpers/fixtures.js";

function host(): HTMLElement {
  const el = document.createElement("div");
  document.body.appendChild(el);
  return el;
}

function nodeById(doc: FlowDocument, id: string): NodeWire {
  const node = doc.nodes.find((n) => n.id === id);
  if (!node) throw new Error(`fixture is missing ${id}`);
  return node;
}

describe("walkthrough fixture: all four node kinds with their panels", () => {
  const doc = loadFixture("walkthrough");

  it("renders a card per live node, classed by kind", () => {
    const root = host();
    renderCanvas(buildCanvasView(doc), root);
    expect(root.querySelectorAll(".node").length).toBe(13);
    expect(root.querySelectorAll(".node-rq").length).toBe(4);
    expect(root.querySelectorAll(".node-persona").length).toBe(3);
    expect(root.querySelectorAll(".node-literature").length).toBe(3);
    expect(root.querySelectorAll(".node-critique").length).toBe(3);
    expect(root.querySelectorAll("svg.edges line").length).toBe(12);
  });

  it("maps each kind to its panel variant", () => {
    const variants = new Map(
      doc.nodes.map((n) => [n.kind, panelForNode(n).kind] as const),
    );
    expect(variants.get("Persona")).toBe("persona");
    expect(variants.get("Literature")).toBe("literature");
    expect(variants.get("RQ")).toBe("outline");
    expect(variants.get("Critique")).toBe("critique");
  });

  it("persona customizer lists every trait with its category", () => {
    const root = host();
    renderPanel(panelForNode(nodeById(doc, "n0002")), root);
    expect(root.className).toContain("panel-persona");
    expect(root.querySelector(".panel-title")?.textContent).toBe(
      "Human-Computer Interaction Expert",
    );
    const discipline = root.querySelector<HTMLElement>('.trait-row[data-trait="Discipline"]');
    expect(discipline?.dataset.category).toBe("background");
    expect(discipline?.querySelector("input")?.value).toBe("Learning Science");
    const role = root.querySelector<HTMLElement>('.trait-row[data-trait="Role"]');
    expect(role?.dataset.category).toBe("role");
    expect(root.querySelectorAll(".add-trait").length).toBe(2);
    expect(root.querySelectorAll(".remove-trait").length).toBeGreaterThan(0);
  });

  it("persona customizer shows saved user instructions", () => {
    const root = host();
    renderPanel(panelForNode(nodeById(doc, "n0003")), root);
    const box = root.querySelector<HTMLTextAreaElement>(".instructions-input");
    expect(box?.value).toBe("Focus on longitudinal studies.");
  });

  it("literature panel lists the ranked papers with a delete control each", () => {
    const root = host();
    renderPanel(panelForNode(nodeById(doc, "n0005")), root);
    expect(root.className).toContain("panel-literature");
    expect(root.querySelector(".panel-title")?.textContent).toBe("gamified badges affect long");
    const papers = root.querySelectorAll(".paper");
    expect(papers.length).toBe(10);
    for (const paper of papers) {
      expect(paper.querySelector(".remove-paper")).not.toBeNull();
      expect((paper as HTMLElement).dataset.paperId).toBeTruthy();
    }
    expect(root.querySelector(".paper-search-input")).not.toBeNull();
  });

  it("outline panel shows all five sections when a panel is stored", () => {
    const root = host();
    renderPanel(panelForNode(nodeById(doc, "n0011")), root);
    expect(root.className).toContain("panel-outline");
    for (const key of [
      "research_question",
      "literature_review",
      "research_scenario",
      "outline_table",
      "expected_outcomes",
    ]) {
      expect(root.querySelector(`.outline-${key}`)).not.toBeNull();
    }
    expect(root.querySelectorAll(".review-part").length).toBe(4);
    expect(root.querySelectorAll(".table-section").length).toBeGreaterThan(0);
    expect(root.querySelector(".outline-empty")).toBeNull();
    expect(root.querySelector(".favorite-mark")?.textContent).toBe("★");
  });

  it("outline panel without a stored panel offers to generate one", () => {
    const root = host();
    renderPanel(panelForNode(nodeById(doc, "n0001")), root);
    expect(root.querySelector(".outline-empty")).not.toBeNull();
    expect(root.querySelector(".regenerate-outline")?.textContent).toBe("Generate outline");
  });

  it("critique detail is read only", () => {
    const root = host();
    renderPanel(panelForNode(nodeById(doc, "n0008")), root);
    expect(root.className).toContain("panel-critique");
    expect(root.querySelector(".panel-title")?.textContent).toBe("Theoretical Framework");
    expect(root.querySelector(".critique-detail")?.textContent).toContain("guiding theory");
    expect(root.querySelector("input")).toBeNull();
    expect(root.querySelector("button")).toBeNull();
  });
});

describe("rating widgets", () => {
  const doc = loadFixture("walkthrough");

  it("RQ cards carry the four RQ sliders", () => {
    const root = host();
    renderCanvas(buildCanvasView(doc), root);
    const card = root.querySelector('[data-node-id="n0001"]');
    const sliders = card?.querySelectorAll(".rating-widget input[type=range]") ?? [];
    expect([...sliders].map((s) => (s as HTMLInputElement).name)).toEqual([
      "relevance",
      "creativity",
      "feasibility",
      "specificity",
    ]);
  });

  it("critique cards carry the four critique sliders", () => {
    const root = host();
    renderCanvas(buildCanvasView(doc), root);
    const card = root.querySelector('[data-node-id="n0008"]');
    const sliders = card?.querySelectorAll(".rating-widget input[type=range]") ?? [];
    expect([...sliders].map((s) => (s as HTMLInputElement).name)).toEqual([
      "relevance",
      "helpfulness",
      "informativeness",
      "insightfulness",
    ]);
  });

  it("persona and literature cards take no ratings", () => {
    const root = host();
    renderCanvas(buildCanvasView(doc), root);
    expect(root.querySelector('[data-node-id="n0002"] .rating-widget')).toBeNull();
    expect(root.querySelector('[data-node-id="n0005"] .rating-widget')).toBeNull();
  });

  it("sliders preset to the stored rating when one exists", () => {
    const root = host();
    renderCanvas(buildCanvasView(doc), root);
    const slider = root.querySelector<HTMLInputElement>(
      '[data-node-id="n0008"] input[name="helpfulness"]',
    );
    expect(slider?.value).toBe("4");
    expect(slider?.min).toBe("1");
    expect(slider?.max).toBe("5");
  });
});

describe("small fixture: one question and its personas", () => {
  it("renders 4 nodes and 3 edges, all rooted at the seed", () => {
    const doc = loadFixture("small");
    const view = buildCanvasView(doc);
    expect(view.nodes.length).toBe(4);
    expect(view.edges.length).toBe(3);
    const root = host();
    renderCanvas(view, root);
    const lines = root.querySelectorAll("svg.edges line");
    expect(lines.length).toBe(3);
    for (const line of lines) expect(line.getAttribute("data-source")).toBe("n0001");
  });
});

describe("empty flow", () => {
  it("offers the create affordance instead of a canvas", () => {
    const doc: FlowDocument = {
      schema_version: 1,
      flow_id: "flow-empty",
      nodes: [],
      edges: [],
      ratings: [],
      edit_log: [],
    };
    const view = buildCanvasView(doc);
    expect(view.empty).toBe(true);
    const root = host();
    renderCanvas(view, root);
    const button = root.querySelector(".empty-canvas button.create-rq");
    expect(button?.textContent).toBe("Create a research question");
    expect(root.querySelectorAll(".node").length).toBe(0);
  });
});

describe("node card affordances", () => {
  const doc = loadFixture("walkthrough");

  it("every kind gets its default generate action", () => {
    const view = buildCanvasView(doc);
    const byId = new Map(view.nodes.map((n) => [n.id, n]));
    expect(byId.get("n0001")?.actions[0]).toEqual({
      id: "generate",
      label: "Generate personas",
      target: "Persona",
    });
    expect(byId.get("n0002")?.actions[0]?.target).toBe("Literature");
    expect(byId.get("n0005")?.actions[0]?.target).toBe("Critique");
    expect(byId.get("n0008")?.actions[0]?.target).toBe("RQ");
  });

  it("literature cards can also branch back to personas", () => {
    const view = buildCanvasView(doc);
    const lit = view.nodes.find((n) => n.id === "n0005");
    expect(lit?.actions.map((a) => a.id)).toEqual(["generate", "generate-personas"]);
  });

  it("RQ cards expose favorite and outline controls, and the favorite shows a star", () => {
    const view = buildCanvasView(doc);
    const rq = view.nodes.find((n) => n.id === "n0011");
    expect(rq?.actions.map((a) => a.id)).toEqual(["generate", "favorite", "outline"]);
    expect(rq?.favorite).toBe(true);
    const root = host();
    renderCanvas(view, root);
    expect(root.querySelector('[data-node-id="n0011"] .favorite-mark')).not.toBeNull();
    expect(root.querySelector('[data-node-id="n0001"] .favorite-mark')).toBeNull();
  });

  it("deleted nodes and their edges disappear from the view", () => {
    const copy = loadFixture("walkthrough");
    const target = copy.nodes.find((n) => n.id === "n0002");
    if (target) target.deleted = true;
    const view = buildCanvasView(copy);
    expect(view.nodes.some((n) => n.id === "n0002")).toBe(false);
    expect(view.edges.some((e) => e.source === "n0002" || e.target === "n0002")).toBe(false);
    expect(view.nodes.length).toBe(12);
  });
});
