// Thin fetch wrappers over the backend routes.

import type {
  GraphPage,
  NodeDetail,
  QueryResult,
  StoredTrace,
  SystemInfo,
} from "./types.js";

async function getJson<T>(url: string): Promise<T> {
  const response = await fetch(url);
  if (!response.ok) {
    throw new Error(`${url} -> ${response.status}: ${await response.text()}`);
  }
  return (await response.json()) as T;
}

export function listSystems(): Promise<{ systems: SystemInfo[] }> {
  return getJson("/api/systems");
}

export function getGraph(
  systemId: string,
  params: { kind?: string; projectId?: string; limit?: number; offset?: number } = {},
): Promise<GraphPage> {
  const search = new URLSearchParams();
  if (params.kind) search.set("kind", params.kind);
  if (params.projectId) search.set("projectId", params.projectId);
  if (params.limit !== undefined) search.set("limit", String(params.limit));
  if (params.offset !== undefined) search.set("offset", String(params.offset));
  const qs = search.toString();
  return getJson(`/api/systems/${encodeURIComponent(systemId)}/graph${qs ? "?" + qs : ""}`);
}

export function getNode(systemId: string, nodeId: string): Promise<NodeDetail> {
  return getJson(
    `/api/systems/${encodeURIComponent(systemId)}/nodes/${encodeURIComponent(nodeId)}`,
  );
}

export function getTrace(systemId: string, traceId: string): Promise<StoredTrace> {
  return getJson(
    `/api/systems/${encodeURIComponent(systemId)}/traces/${encodeURIComponent(traceId)}`,
  );
}

export async function postQuery(systemId: string, query: string): Promise<QueryResult> {
  const response = await fetch(`/api/systems/${encodeURIComponent(systemId)}/query`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify({ query }),
  });
  const body = await response.json();
  if (!response.ok) {
    const message = body?.error?.message ?? response.status;
    throw new Error(`query failed: ${message}`);
  }
  return body as QueryResult;
}
