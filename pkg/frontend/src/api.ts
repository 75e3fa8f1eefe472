/**
 * Thin fetch client for the ideamap HTTP API.
 *
 * Every mutation the UI performs goes through here; there is no other
 * channel to the backend. The fetch implementation is injectable so tests
 * can run against an in-memory fake server.
 */

import type {
  EditEventWire,
  FlowDocument,
  JobStateWire,
  MetricsWire,
  NodeKind,
  NodePayload,
  NodeWire,
  OutlinePanelWire,
  PaperWire,
  RatingWire,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export interface ApiOptions {
  token?: string;
  fetchImpl?: FetchLike;
}

/** One error name per failure mode, mirrored from the server body. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    readonly detail?: string,
  ) {
    super(detail ? `${code}: ${detail}` : code);
    this.name = "ApiError";
  }
}

export class ApiClient {
  private readonly fetchImpl: FetchLike;
  private readonly token?: string;

  constructor(readonly baseUrl: string, options: ApiOptions = {}) {
    this.fetchImpl = options.fetchImpl ?? ((input, init) => fetch(input, init));
    this.token = options.token;
  }

  private async request<T>(method: string, path: string, body?: unknown, asText = false): Promise<T> {
    const headers: Record<string, string> = {};
    if (body !== undefined) headers["content-type"] = "application/json";
    if (this.token) headers["authorization"] = `Bearer ${this.token}`;
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      let code = `HTTP ${response.status}`;
      let detail: string | undefined;
      try {
        const parsed = (await response.json()) as { error?: string; detail?: string };
        if (parsed.error) code = parsed.error;
        detail = parsed.detail;
      } catch {
        // non-JSON error body; keep the status code
      }
      throw new ApiError(response.status, code, detail);
    }
    if (response.status === 204) return undefined as T;
    if (asText) return (await response.text()) as unknown as T;
    return (await response.json()) as T;
  }

  health(): Promise<{ status: string }> {
    return this.request("GET", "/health");
  }

  listFlows(): Promise<string[]> {
    return this.request("GET", "/flows");
  }

  createFlow(): Promise<{ flow_id: string }> {
    return this.request("POST", "/flows");
  }

  getFlow(flowId: string): Promise<FlowDocument> {
    return this.request("GET", `/flows/${flowId}`);
  }

  deleteFlow(flowId: string): Promise<void> {
    return this.request("DELETE", `/flows/${flowId}`);
  }

  exportFlow(flowId: string): Promise<string> {
    return this.request("GET", `/flows/${flowId}/export`, undefined, true);
  }

  importFlow(document: FlowDocument): Promise<{ flow_id: string }> {
    return this.request("POST", "/flows/import", document);
  }

  metrics(flowId: string): Promise<MetricsWire> {
    return this.request("GET", `/flows/${flowId}/metrics`);
  }

  addNode(flowId: string, kind: NodeKind, payload: NodePayload, parent?: string): Promise<NodeWire> {
    const body: Record<string, unknown> = { kind, payload };
    if (parent !== undefined) body.parent = parent;
    return this.request("POST", `/flows/${flowId}/nodes`, body);
  }

  getNode(flowId: string, nodeId: string): Promise<NodeWire> {
    return this.request("GET", `/flows/${flowId}/nodes/${nodeId}`);
  }

  /** PATCH one payload field; the server logs and returns the edit event. */
  editNode(flowId: string, nodeId: string, fieldPath: string, value: unknown): Promise<EditEventWire> {
    return this.request("PATCH", `/flows/${flowId}/nodes/${nodeId}`, {
      field_path: fieldPath,
      value,
    });
  }

  deleteNode(flowId: string, nodeId: string): Promise<void> {
    return this.request("DELETE", `/flows/${flowId}/nodes/${nodeId}`);
  }

  connect(flowId: string, source: string, target: string): Promise<{ source: string; target: string }> {
    return this.request("POST", `/flows/${flowId}/nodes/${source}/connect`, { target });
  }

  rate(flowId: string, nodeId: string, dimensions: Record<string, number>): Promise<RatingWire> {
    return this.request("POST", `/flows/${flowId}/nodes/${nodeId}/ratings`, { dimensions });
  }

  generate(flowId: string, nodeId: string, targetKind?: NodeKind, options?: Record<string, unknown>): Promise<NodeWire[]> {
    const body: Record<string, unknown> = {};
    if (targetKind !== undefined) body.target_kind = targetKind;
    if (options !== undefined) body.options = options;
    return this.request("POST", `/flows/${flowId}/nodes/${nodeId}/generate`, body);
  }

  jobState(jobId: string): Promise<JobStateWire> {
    return this.request("GET", `/jobs/${jobId}`);
  }

  buildOutline(flowId: string, nodeId: string, scenario?: string): Promise<OutlinePanelWire> {
    const body: Record<string, unknown> = {};
    if (scenario !== undefined) body.scenario = scenario;
    return this.request("POST", `/flows/${flowId}/nodes/${nodeId}/outline`, body);
  }

  getOutline(flowId: string, nodeId: string): Promise<OutlinePanelWire> {
    return this.request("GET", `/flows/${flowId}/nodes/${nodeId}/outline`);
  }

  searchPapers(flowId: string, nodeId: string, q: string, limit = 20): Promise<PaperWire[]> {
    const params = new URLSearchParams({ q, limit: String(limit) });
    return this.request("GET", `/flows/${flowId}/nodes/${nodeId}/papers/search?${params}`);
  }
}
