// Payload shapes of the backend HTTP API. The UI is a pure client of these
// documented routes and fields; nothing here is invented client-side.

export type NodeKind = "System" | "Project" | "Code" | "Entity";

export interface SubgraphNode {
  id: string;
  kind: NodeKind;
  name: string;
  description: string | null;
}

export interface SubgraphEdge {
  src: string;
  label: string;
  dst: string;
}

export interface SubgraphPayload {
  nodes: SubgraphNode[];
  edges: SubgraphEdge[];
}

export interface BrowseNode {
  id: string;
  kind: NodeKind;
  name: string;
  description: string | null;
  attrs: Record<string, string>;
}

export interface GraphPage {
  nodes: BrowseNode[];
  edges: SubgraphEdge[];
  total: number;
  limit: number;
  offset: number;
}

export interface NodeDetail extends BrowseNode {
  source?: string;
}

export interface SystemInfo {
  id: string;
  name: string;
  built: boolean;
  building: boolean;
}

export interface TraceStepRecord {
  type: "step";
  index: number;
  thought: string;
  action: { type: string; tool?: string; args?: Record<string, unknown> };
  observation: string;
  subgraph: SubgraphPayload | null;
  repairs: string[];
  truncated: boolean;
}

export interface TraceFinalRecord {
  type: "final";
  answer: string;
  forced: boolean;
  error: string | null;
  steps: number;
  wall_time_ms: number;
  system_prompt_hash: string;
  question: string;
  trace_id: string;
}

export interface StoredTrace {
  steps: TraceStepRecord[];
  final: TraceFinalRecord;
}

export type QueryResult =
  | { count: number }
  | { columns: string[]; rows: string[][] };

export interface ChatStreamEvent {
  type: "step" | "final" | "error";
  data: unknown;
}
