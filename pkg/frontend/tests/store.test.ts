import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import { SessionStore } from "../src/store.js";
import type { LiteraturePayload, RQPayload } from "../src/types.js";
import { FakeServer } from "./helpers/fakeServer.js";
import { loadFixture } from "./helpers/fixtures.js";

const BASE = "http://api.test";

async function rig(fixture: "small" | "walkthrough" = "walkthrough") {
  const doc = loadFixture(fixture);
  const server = new FakeServer(doc);
  const store = new SessionStore(new ApiClient(BASE, { fetchImpl: server.fetch }), doc.flow_id);
  await store.refresh();
  return { server, store };
}

describe("server-authoritative state", () => {
  it("every mutation is a call plus a fresh snapshot, never a local patch", async () => {
    const { server, store } = await rig();
    const before = server.requests.length;
    await store.toggleFavorite("n0001");
    const tail = server.requests.slice(before).map((r) => r.method);
    expect(tail).toEqual(["PATCH", "GET"]);
    expect((store.node("n0001")?.payload as RQPayload).favorite).toBe(true);
  });

  it("a failed mutation keeps the last good snapshot and surfaces the error", async () => {
    const { store } = await rig();
    const snapshotBefore = JSON.stringify(store.document);
    const failure = await store
      .removeTrait("n0002", "background", "Nonexistent")
      .catch((e: unknown) => e);
    expect(failure).toBeInstanceOf(ApiError);
    expect(store.lastError).toMatch(/UnknownField/);
    expect(JSON.stringify(store.document)).toBe(snapshotBefore);
  });

  it("the next successful mutation clears the error", async () => {
    const { store } = await rig();
    await store.removeTrait("n0002", "background", "Nonexistent").catch(() => undefined);
    expect(store.lastError).not.toBeNull();
    await store.toggleFavorite("n0001");
    expect(store.lastError).toBeNull();
  });

  it("listeners fire on refresh", async () => {
    const { store } = await rig();
    let calls = 0;
    const unsubscribe = store.subscribe(() => {
      calls += 1;
    });
    await store.refresh();
    expect(calls).toBe(1);
    unsubscribe();
    await store.refresh();
    expect(calls).toBe(1);
  });
});

describe("generation", () => {
  it("generate grows three children of the default kind plus edges", async () => {
    const { store } = await rig("small");
    const nodesBefore = store.document?.nodes.length ?? 0;
    await store.generate("n0002");
    const doc = store.document;
    expect(doc?.nodes.length).toBe(nodesBefore + 3);
    const created = doc?.nodes.slice(-3) ?? [];
    for (const node of created) {
      expect(node.kind).toBe("Literature");
      expect(node.origin).toBe("generated");
      expect(doc?.edges).toContainEqual({ source: "n0002", target: node.id });
    }
  });

  it("generate accepts an explicit target kind", async () => {
    const { server, store } = await rig("walkthrough");
    await store.generate("n0005", "Persona");
    expect(server.requests.find((r) => r.path.endsWith("/generate"))?.body).toEqual({
      target_kind: "Persona",
    });
    const created = store.document?.nodes.slice(-3) ?? [];
    expect(created.every((n) => n.kind === "Persona")).toBe(true);
  });

  it("createSeedRQ fills an empty flow", async () => {
    const server = new FakeServer();
    const api = new ApiClient(BASE, { fetchImpl: server.fetch });
    const { flow_id: flowId } = await api.createFlow();
    const store = new SessionStore(api, flowId);
    await store.refresh();
    expect(store.canvas().empty).toBe(true);

    await store.createSeedRQ("Do streaks outperform badges?");
    const view = store.canvas();
    expect(view.empty).toBe(false);
    expect(view.nodes.length).toBe(1);
    expect(view.nodes[0].kind).toBe("RQ");
    expect(view.nodes[0].label).toBe("Do streaks outperform badges?");
  });
});

describe("ratings through the store", () => {
  it("submits the exact critique body the server expects", async () => {
    const { server, store } = await rig();
    await store.submitRating("n0009", {
      relevance: 4,
      helpfulness: 4,
      informativeness: 3,
      insightfulness: 3,
    });
    const post = server.requests.find((r) => r.path.endsWith("/n0009/ratings"));
    expect(post?.body).toEqual({
      dimensions: { relevance: 4, helpfulness: 4, informativeness: 3, insightfulness: 3 },
    });
    expect(store.document?.ratings.at(-1)?.node).toBe("n0009");
  });

  it("rejects mismatched dimensions before any request is sent", async () => {
    const { server, store } = await rig();
    const before = server.requests.length;
    expect(() =>
      store.submitRating("n0009", { relevance: 4, creativity: 3, feasibility: 4, specificity: 4 }),
    ).toThrow(/need dimensions/);
    expect(server.requests.length).toBe(before);
  });

  it("refuses to rate unrated kinds client side", async () => {
    const { server, store } = await rig();
    const before = server.requests.length;
    expect(() => store.submitRating("n0002", { relevance: 3 })).toThrow(/do not take ratings/);
    expect(server.requests.length).toBe(before);
  });
});

describe("selection and panels", () => {
  it("panel follows the selected node and exactly one is open", async () => {
    const { store } = await rig();
    expect(store.panel()).toBeNull();
    store.select("n0002");
    expect(store.panel()?.kind).toBe("persona");
    store.select("n0005");
    expect(store.panel()?.kind).toBe("literature");
    store.select(null);
    expect(store.panel()).toBeNull();
  });

  it("selecting an unknown node throws", async () => {
    const { store } = await rig();
    expect(() => store.select("n9999")).toThrow(/no live node/);
  });

  it("deleting the selected node clears the selection", async () => {
    const { store } = await rig();
    store.select("n0004");
    await store.deleteNode("n0004");
    expect(store.selectedNodeId).toBeNull();
    expect(store.node("n0004")).toBeNull();
    const view = store.canvas();
    expect(view.nodes.some((n) => n.id === "n0004")).toBe(false);
    expect(view.edges.some((e) => e.source === "n0004" || e.target === "n0004")).toBe(false);
  });

  it("collapse state hides card details in the view model", async () => {
    const { store } = await rig();
    store.toggleCollapsed("n0001");
    expect(store.canvas().nodes.find((n) => n.id === "n0001")?.collapsed).toBe(true);
    store.toggleCollapsed("n0001");
    expect(store.canvas().nodes.find((n) => n.id === "n0001")?.collapsed).toBe(false);
  });
});

describe("literature curation", () => {
  it("removing a paper replaces the whole list via PATCH", async () => {
    const { server, store } = await rig();
    const payload = store.node("n0005")?.payload as LiteraturePayload;
    const victim = payload.papers[0].paper_id;
    const expected = payload.papers.slice(1);

    await store.removePaper("n0005", victim);
    const patch = server.requests.filter((r) => r.method === "PATCH").at(-1);
    expect((patch?.body as { field_path: string }).field_path).toBe("papers");
    expect((patch?.body as { value: unknown[] }).value).toHaveLength(expected.length);

    const after = store.node("n0005")?.payload as LiteraturePayload;
    expect(after.papers.map((p) => p.paper_id)).not.toContain(victim);
    expect(after.papers).toHaveLength(expected.length);
  });

  it("adding a duplicate paper is a no-op with no request", async () => {
    const { server, store } = await rig();
    const payload = store.node("n0005")?.payload as LiteraturePayload;
    const before = server.requests.length;
    await store.addPaper("n0005", payload.papers[0]);
    expect(server.requests.length).toBe(before);
  });

  it("search results can be added and then appear in the panel", async () => {
    const { store } = await rig();
    const hits = await store.searchPapers("n0005", "retention");
    expect(hits.length).toBeGreaterThan(0);
    await store.addPaper("n0005", hits[0]);
    const after = store.node("n0005")?.payload as LiteraturePayload;
    expect(after.papers.map((p) => p.paper_id)).toContain(hits[0].paper_id);
  });
});

describe("outline building", () => {
  it("buildOutline stores a panel on the RQ node", async () => {
    const { store } = await rig();
    expect((store.node("n0012")?.payload as RQPayload).outline).toBeUndefined();
    await store.buildOutline("n0012");
    const panel = (store.node("n0012")?.payload as RQPayload).outline;
    expect(panel?.research_question).toBeTruthy();
    expect(Object.keys(panel ?? {}).sort()).toEqual([
      "expected_outcomes",
      "literature_review",
      "outline_table",
      "research_question",
      "research_scenario",
    ]);
    store.select("n0012");
    const view = store.panel();
    expect(view?.kind === "outline" && view.panel !== null).toBe(true);
  });

  it("outline requests on non-RQ nodes are refused by the server", async () => {
    const { store } = await rig();
    const failure = await store.buildOutline("n0008").catch((e: unknown) => e);
    expect((failure as ApiError).status).toBe(400);
    expect(store.lastError).toMatch(/PreconditionError/);
  });
});
