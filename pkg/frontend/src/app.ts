/**
 * Browser entry point: mounts the canvas and the side panel, wires DOM
 * events to store actions, and refreshes after every mutation.
 */

import { ApiClient, type FetchLike } from "./api.js";
import { renderCanvas } from "./canvas.js";
import { renderPanel } from "./panels.js";
import { SessionStore } from "./store.js";

export interface AppOptions {
  baseUrl: string;
  flowId?: string;
  token?: string;
  fetchImpl?: FetchLike;
}

export interface App {
  store: SessionStore;
  root: HTMLElement;
}

function renderAll(store: SessionStore, canvasHost: HTMLElement, panelHost: HTMLElement): void {
  if (!store.document) return;
  renderCanvas(store.canvas(), canvasHost);
  panelHost.innerHTML = "";
  panelHost.className = "panel-host";
  const panel = store.panel();
  if (panel) renderPanel(panel, panelHost);
  const error = store.lastError;
  if (error) {
    const banner = canvasHost.ownerDocument.createElement("div");
    banner.className = "error-banner";
    banner.textContent = error;
    canvasHost.prepend(banner);
  }
}

function wireEvents(store: SessionStore, root: HTMLElement): void {
  root.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    const card = target.closest<HTMLElement>(".node");

    if (target.matches(".create-rq")) {
      const question = root.ownerDocument.defaultView?.prompt?.("Research question") ?? "";
      if (question.trim()) void store.createSeedRQ(question).catch(() => undefined);
      return;
    }
    if (card && target.matches(".action-generate, .action-generate-personas")) {
      const kind = target.dataset.target as "Persona" | "Literature" | "Critique" | "RQ" | undefined;
      void store.generate(card.dataset.nodeId as string, kind).catch(() => undefined);
      return;
    }
    if (card && target.matches(".action-favorite")) {
      void store.toggleFavorite(card.dataset.nodeId as string).catch(() => undefined);
      return;
    }
    if (card && target.matches(".action-outline")) {
      store.select(card.dataset.nodeId as string);
      return;
    }
    if (card) {
      store.select(card.dataset.nodeId as string);
    }
  });
}

/** Mount the client into a root element and load the flow. */
export async function mountApp(root: HTMLElement, options: AppOptions): Promise<App> {
  const api = new ApiClient(options.baseUrl, { token: options.token, fetchImpl: options.fetchImpl });
  const flowId = options.flowId ?? (await api.createFlow()).flow_id;
  const store = new SessionStore(api, flowId);

  const doc = root.ownerDocument;
  root.innerHTML = "";
  const canvasHost = doc.createElement("div");
  canvasHost.className = "canvas-host";
  const panelHost = doc.createElement("aside");
  panelHost.className = "panel-host";
  root.appendChild(canvasHost);
  root.appendChild(panelHost);

  store.subscribe(() => renderAll(store, canvasHost, panelHost));
  wireEvents(store, root);
  await store.refresh();
  return { store, root };
}
