// Thin fetch wrappers over the backend routes.
async function getJson(url) {
    const response = await fetch(url);
    if (!response.ok) {
        throw new Error(`${url} -> ${response.status}: ${await response.text()}`);
    }
    return (await response.json());
}
export function listSystems() {
    return getJson("/api/systems");
}
export function getGraph(systemId, params = {}) {
    const search = new URLSearchParams();
    if (params.kind)
        search.set("kind", params.kind);
    if (params.projectId)
        search.set("projectId", params.projectId);
    if (params.limit !== undefined)
        search.set("limit", String(params.limit));
    if (params.offset !== undefined)
        search.set("offset", String(params.offset));
    const qs = search.toString();
    return getJson(`/api/systems/${encodeURIComponent(systemId)}/graph${qs ? "?" + qs : ""}`);
}
export function getNode(systemId, nodeId) {
    return getJson(`/api/systems/${encodeURIComponent(systemId)}/nodes/${encodeURIComponent(nodeId)}`);
}
export function getTrace(systemId, traceId) {
    return getJson(`/api/systems/${encodeURIComponent(systemId)}/traces/${encodeURIComponent(traceId)}`);
}
export async function postQuery(systemId, query) {
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
    return body;
}
