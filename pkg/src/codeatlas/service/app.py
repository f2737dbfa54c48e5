"""HTTP service: system registry, async builds, graph browsing, query, and
step-streamed chat.

Routes (all JSON unless noted):

    GET  /api/systems                          -> {"systems": [...]}
    POST /api/systems                          -> {"systemId"}           (422 invalid)
    GET  /api/systems/{id}                     -> system summary
    POST /api/systems/{id}/build               -> {"jobId"}              (409 build running)
    GET  /api/jobs/{jobId}                     -> build job status
    GET  /api/systems/{id}/graph?kind=&projectId=&limit=&offset=
                                               -> paged {"nodes","edges","total",...}
    GET  /api/systems/{id}/nodes/{nodeId}      -> node detail (source for Code nodes)
    POST /api/systems/{id}/query {"query"}     -> {"columns","rows"} | {"count"}
                                                  (400 with structured parse error)
    POST /api/systems/{id}/chat {"question"}   -> SSE stream: `event: step|final|error`
                                                  frames with JSON data
    GET  /api/systems/{id}/traces              -> {"traces": [ids]}
    GET  /api/systems/{id}/traces/{traceId}    -> stored trace

404 for unknown ids, 409 for builds in progress or unbuilt systems, 422 for
invalid configs. Chat streams step events as the agent produces them and ends
with a final event whose data equals the stored trace's final record.
"""

from __future__ import annotations

import json
import queue
import threading
import uuid
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse, StreamingResponse
from pydantic import BaseModel, Field

from ..agent import Agent, AgentBudget, AgentTrace
from ..config import SystemConfig, config_from_dict, make_provider
from ..errors import CodeAtlasError, ConfigError, ParseError, UnknownId
from ..graph import CodeGraph, NodeKind, execute_query, load_snapshot
from ..index import SemanticIndex
from ..llm import LlmProvider
from ..pipeline import build_system
from .jobs import BuildJob, JobRegistry


class RepoModel(BaseModel):
    name: str
    root: str
    language: str = "java"
    include: list[str] = Field(default_factory=list)
    exclude: list[str] = Field(default_factory=list)


class ProviderModel(BaseModel):
    mode: str = "mock"
    endpoint: str = ""
    api_key_env: str = "LLM_API_KEY"
    fast_model: str = "fast-default"
    deep_model: str = "deep-default"
    embed_model: str = "embed-default"
    embedding_dim: int = 256
    transcript: str | None = None
    record: str | None = None


class IndexModel(BaseModel):
    k: int = 5
    threshold: float = 0.35


class AgentModel(BaseModel):
    max_steps: int = 8
    observation_tokens: int = 2000


class SystemConfigModel(BaseModel):
    name: str
    repos: list[RepoModel]
    provider: ProviderModel = Field(default_factory=ProviderModel)
    index: IndexModel = Field(default_factory=IndexModel)
    agent: AgentModel = Field(default_factory=AgentModel)
    snapshot_path: str = "graph.clgs"
    promote_methods: bool = False


class QueryRequest(BaseModel):
    query: str


class ChatRequest(BaseModel):
    question: str


class SystemEntry:
    def __init__(self, config: SystemConfig, provider: LlmProvider | None = None):
        self.config = config
        self.provider = provider or make_provider(config.provider)
        self.graph: CodeGraph | None = None
        self.index: SemanticIndex | None = None
        self.job: BuildJob | None = None
        self.building = False
        self.traces: dict[str, AgentTrace] = {}

    def attach_graph(self, graph: CodeGraph) -> None:
        self.graph = graph
        self.index = SemanticIndex(
            graph, self.provider,
            k=self.config.index.k, threshold=self.config.index.threshold,
        )


class ServiceState:
    def __init__(self) -> None:
        self.systems: dict[str, SystemEntry] = {}
        self.jobs = JobRegistry()
        self.lock = threading.Lock()

    def register(self, config: SystemConfig, provider: LlmProvider | None = None) -> str:
        system_id = config.name
        with self.lock:
            if system_id in self.systems:
                raise ConfigError(f"system {system_id!r} already registered")
            self.systems[system_id] = SystemEntry(config, provider)
        return system_id

    def entry(self, system_id: str) -> SystemEntry:
        entry = self.systems.get(system_id)
        if entry is None:
            raise HTTPException(status_code=404, detail=f"unknown system {system_id!r}")
        return entry


def bootstrap_state(config: SystemConfig, provider: LlmProvider | None = None,
                    load_existing_snapshot: bool = True) -> ServiceState:
    """State with one registered system; loads its snapshot when present."""
    state = ServiceState()
    system_id = state.register(config, provider)
    entry = state.systems[system_id]
    if load_existing_snapshot and Path(config.snapshot_path).is_file():
        entry.attach_graph(load_snapshot(config.snapshot_path))
    return state


def _built_entry(state: ServiceState, system_id: str) -> SystemEntry:
    entry = state.entry(system_id)
    if entry.building:
        raise HTTPException(status_code=409, detail="build in progress")
    if entry.graph is None or entry.index is None:
        raise HTTPException(status_code=409, detail="system not built yet")
    return entry


def _node_json(node, include_source: bool = False) -> dict:
    attrs = {k: v for k, v in node.attrs.items() if k != "source"}
    data = {
        "id": node.id,
        "kind": node.kind.value,
        "name": node.name,
        "description": node.description,
        "attrs": attrs,
    }
    if include_source and node.kind is NodeKind.CODE:
        data["source"] = node.attrs.get("source", "")
    return data


def create_app(state: ServiceState | None = None, ui_dir: str | Path | None = None) -> FastAPI:
    state = state or ServiceState()
    app = FastAPI(title="codeatlas", version="0.1.0")
    app.state.service = state

    @app.get("/api/systems")
    def list_systems() -> dict:
        systems = []
        for system_id, entry in sorted(state.systems.items()):
            systems.append({
                "id": system_id,
                "name": entry.config.name,
                "built": entry.graph is not None,
                "building": entry.building,
            })
        return {"systems": systems}

    @app.post("/api/systems")
    def register_system(model: SystemConfigModel) -> dict:
        try:
            config = config_from_dict(model.model_dump(), base_dir=Path.cwd())
            system_id = state.register(config)
        except ConfigError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        return {"systemId": system_id}

    @app.get("/api/systems/{system_id}")
    def system_detail(system_id: str) -> dict:
        entry = state.entry(system_id)
        info = {
            "id": system_id,
            "name": entry.config.name,
            "built": entry.graph is not None,
            "building": entry.building,
            "repos": [r.name for r in entry.config.repos],
        }
        if entry.graph is not None:
            info["kindCounts"] = entry.graph.kind_counts()
            info["edgeCount"] = entry.graph.edge_count
        return info

    @app.post("/api/systems/{system_id}/build")
    def start_build(system_id: str) -> dict:
        entry = state.entry(system_id)
        with state.lock:
            if entry.building:
                raise HTTPException(status_code=409, detail="build in progress")
            entry.building = True
        job = state.jobs.create(system_id)
        entry.job = job

        def work() -> None:
            try:
                result = build_system(
                    entry.config, provider=entry.provider,
                    on_phase=lambda phase, counters: job.advance(phase, counters),
                )
                entry.attach_graph(result.graph)
                job.diagnostics.extend(result.diagnostics)
            except Exception as exc:
                job.fail(str(exc))
            finally:
                entry.building = False

        threading.Thread(target=work, daemon=True).start()
        return {"jobId": job.job_id}

    @app.get("/api/jobs/{job_id}")
    def job_status(job_id: str) -> dict:
        job = state.jobs.get(job_id)
        if job is None:
            raise HTTPException(status_code=404, detail=f"unknown job {job_id!r}")
        return job.to_dict()

    @app.get("/api/systems/{system_id}/graph")
    def browse_graph(system_id: str, kind: str | None = None,
                     projectId: str | None = None,
                     limit: int = 100, offset: int = 0) -> dict:
        entry = _built_entry(state, system_id)
        graph = entry.graph
        assert graph is not None
        limit = max(1, min(limit, 500))
        offset = max(0, offset)
        if kind is not None:
            try:
                wanted_kind = NodeKind(kind)
            except ValueError:
                raise HTTPException(status_code=422, detail=f"unknown kind {kind!r}") from None
        nodes = graph.iter_nodes()
        if projectId is not None:
            if not graph.has_node(projectId):
                raise HTTPException(status_code=404, detail=f"unknown project {projectId!r}")
            scope = {projectId} | graph.neighborhood(
                projectId, direction="out", labels=("CONTAINS",), depth=1
            )
            nodes = [n for n in nodes if n.id in scope]
        if kind is not None:
            nodes = [n for n in nodes if n.kind is wanted_kind]
        total = len(nodes)
        page = nodes[offset:offset + limit]
        page_ids = {n.id for n in page}
        edges = [
            {"src": e.src, "label": e.label, "dst": e.dst}
            for e in graph.edges() if e.src in page_ids and e.dst in page_ids
        ]
        return {
            "nodes": [_node_json(n) for n in page],
            "edges": edges,
            "total": total,
            "limit": limit,
            "offset": offset,
        }

    @app.get("/api/systems/{system_id}/nodes/{node_id}")
    def node_detail(system_id: str, node_id: str) -> dict:
        entry = _built_entry(state, system_id)
        assert entry.graph is not None
        try:
            node = entry.graph.node(node_id)
        except UnknownId as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        return _node_json(node, include_source=True)

    @app.post("/api/systems/{system_id}/query")
    def run_query(system_id: str, request: QueryRequest):
        entry = _built_entry(state, system_id)
        assert entry.graph is not None
        try:
            result = execute_query(entry.graph, request.query)
        except ParseError as exc:
            return JSONResponse(status_code=400, content={
                "error": {
                    "message": str(exc),
                    "position": exc.position,
                    "expected": exc.expected,
                },
            })
        if result.is_count:
            return {"count": result.count}
        return {"columns": list(result.columns), "rows": [list(r) for r in result.rows]}

    @app.post("/api/systems/{system_id}/chat")
    def chat(system_id: str, request: ChatRequest) -> StreamingResponse:
        entry = _built_entry(state, system_id)
        assert entry.graph is not None and entry.index is not None
        agent = Agent(
            entry.graph, entry.index, entry.provider,
            budget=AgentBudget(
                max_steps=entry.config.agent.max_steps,
                obs_tokens=entry.config.agent.observation_tokens,
            ),
        )
        events: queue.Queue = queue.Queue()

        def run() -> None:
            try:
                trace = agent.run(
                    request.question,
                    on_step=lambda step: events.put(("step", step.to_dict())),
                )
                trace.trace_id = uuid.uuid4().hex
                entry.traces[trace.trace_id] = trace
                events.put(("final", trace.final_record()))
            except Exception as exc:
                events.put(("error", {"message": str(exc)}))
            events.put(None)

        threading.Thread(target=run, daemon=True).start()

        def stream():
            while True:
                item = events.get()
                if item is None:
                    break
                event_type, data = item
                yield f"event: {event_type}\ndata: {json.dumps(data, sort_keys=True)}\n\n"

        return StreamingResponse(stream(), media_type="text/event-stream")

    @app.get("/api/systems/{system_id}/traces")
    def list_traces(system_id: str) -> dict:
        entry = state.entry(system_id)
        return {"traces": sorted(entry.traces)}

    @app.get("/api/systems/{system_id}/traces/{trace_id}")
    def trace_detail(system_id: str, trace_id: str) -> dict:
        entry = state.entry(system_id)
        trace = entry.traces.get(trace_id)
        if trace is None:
            raise HTTPException(status_code=404, detail=f"unknown trace {trace_id!r}")
        return trace.to_dict()

    if ui_dir is not None and Path(ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
