"""Acceptance suite: one test per release criterion, each printing a
pass/fail line (run with `pytest tests/test_acceptance.py -s` to see them).

Everything here runs against the shipped three-repo order fixture with the
deterministic mock provider; no network, no secondary component.
"""

import dataclasses
import json
import random
import time

import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

from codeatlas.agent import (
    Agent,
    AgentBudget,
    ToolContext,
    codes_tool,
    entities_tool,
    graph_query_tool,
    projects_tool,
    run_tool,
    source_tool,
)
from codeatlas.cli import main as cli_main
from codeatlas.config import load_config
from codeatlas.errors import SchemaViolation
from codeatlas.evaluation import EvalQuestion, Rating, build_report, run_eval
from codeatlas.extract import RepoSpec, build_structural_graph
from codeatlas.graph import CodeGraph, Edge, Node, NodeKind, edge_allowed, execute_query, snapshot_bytes
from codeatlas.index import SemanticIndex, embed_all
from codeatlas.llm import MockProvider, RecordingProvider, ReplayProvider, ScriptedProvider
from codeatlas.pipeline import build_system
from codeatlas.service import ServiceState, create_app

from conftest import (
    CONTROLLER,
    DTO,
    GOLDEN,
    MODEL,
    ORDER_ENTITY,
    ORDER_SYSTEM,
    PROCESSOR,
    build_enriched_order_graph,
    make_semantic_fixture,
    order_repo_specs,
)
from oracles import (
    allowed_by_table,
    brute_force_search,
    codes_pipeline_oracle,
    entities_pipeline_oracle,
    projects_pipeline_oracle,
    query_oracle,
    random_valid_graph,
)
from test_graph_query import GOLDEN_QUERIES
from test_service import parse_sse


def _report(name: str) -> None:
    print(f"[ACCEPTANCE] {name}: PASS")


def test_structural_extraction_golden():
    started = time.monotonic()
    graph1, _ = build_structural_graph(order_repo_specs(), "orders-system")
    graph2, _ = build_structural_graph(order_repo_specs(), "orders-system")
    assert graph1.kind_counts() == {"System": 1, "Project": 3, "Code": 4}
    assert {n.name for n in graph1.nodes_of_kind(NodeKind.CODE)} == {
        "OrderController", "OrderDTO", "OrderModel", "OrderProcessor",
    }
    assert graph1.has_edge(PROCESSOR, "DEPENDS_ON", MODEL)
    assert graph1.contains_parents(PROCESSOR) != graph1.contains_parents(MODEL)
    assert snapshot_bytes(graph1) == snapshot_bytes(graph2)
    elapsed = time.monotonic() - started
    assert elapsed < 5.0, f"structural build took {elapsed:.2f}s (budget 5s)"
    _report("structural extraction golden (counts, cross-repo edge, byte-identical, <5s)")


def test_schema_totality_property():
    rng = random.Random(20240817)
    graph = CodeGraph("schema-prop")
    nodes = {
        "System": "system:schema-prop",
        "Project": "project:p",
        "Code": "pkg.Unit",
        "Entity": "entity:Thing",
    }
    graph.add_node(Node(id=nodes["System"], kind=NodeKind.SYSTEM, name="s"))
    graph.add_node(Node(id=nodes["Project"], kind=NodeKind.PROJECT, name="p"))
    graph.add_node(Node(id=nodes["Code"], kind=NodeKind.CODE, name="Unit",
                        attrs={"file": "u.java", "span": "1-1"}))
    graph.add_node(Node(id=nodes["Entity"], kind=NodeKind.ENTITY, name="Thing"))
    labels = ["CONTAINS", "DEPENDS_ON", "CALLS", "IMPLEMENTS", "REPRESENTS",
              "RELATES_TO", "CREATE", "PROCESS", "CONSUME", "A_B_C", "lower",
              "1BAD", "BAD-", "", "X"]
    kinds = list(nodes)
    checked = 0
    for _ in range(10_000):
        src, dst = rng.choice(kinds), rng.choice(kinds)
        label = rng.choice(labels)
        expected = allowed_by_table(src, label, dst)
        assert edge_allowed(NodeKind(src), label, NodeKind(dst)) == expected
        try:
            graph.add_edge(Edge(src=nodes[src], dst=nodes[dst], label=label))
            accepted = True
        except SchemaViolation:
            accepted = False
        assert accepted == expected, (src, label, dst)
        checked += 1
    assert checked == 10_000

    # zero violations in any built fixture graph
    for built in (build_enriched_order_graph(), make_semantic_fixture()):
        for edge in built.edges():
            assert allowed_by_table(
                built.node(edge.src).kind.value, edge.label, built.node(edge.dst).kind.value
            )
    _report("schema totality (10,000 random edges + built fixture graphs clean)")


def test_query_dsl_oracle_equivalence():
    started = time.monotonic()
    fixture = build_enriched_order_graph()
    assert fixture.node_count <= 50
    assert len(GOLDEN_QUERIES) == 20
    for query in GOLDEN_QUERIES:
        assert execute_query(fixture, query) == query_oracle(fixture, query), query
    rng = random.Random(11)
    for _ in range(4):
        graph = random_valid_graph(rng, n_projects=3, n_code=20, n_entities=4, extra_edges=60)
        assert graph.node_count <= 50
        for query in GOLDEN_QUERIES[:10]:
            assert execute_query(graph, query) == query_oracle(graph, query), query
    elapsed = time.monotonic() - started
    assert elapsed < 10.0, f"query oracle run took {elapsed:.2f}s (budget 10s)"
    _report("query DSL oracle equivalence (20 golden queries, <10s)")


def test_semantic_layer_correctness():
    graph = build_enriched_order_graph()
    entity = graph.node(ORDER_ENTITY)
    assert entity.kind is NodeKind.ENTITY and entity.description
    incoming = graph.in_edges(ORDER_ENTITY)
    verb_edges = [e for e in incoming if e.label not in
                  ("REPRESENTS", "CONTAINS", "DEPENDS_ON", "CALLS", "IMPLEMENTS", "RELATES_TO")]
    represents = [e for e in incoming if e.label == "REPRESENTS"]
    assert len(verb_edges) >= 2, [e.key for e in incoming]
    assert {e.src for e in represents} == {MODEL, DTO}
    # RELATES_TO bidirectional invariant over the whole graph
    for node in graph.nodes_of_kind(NodeKind.ENTITY):
        related = {e.dst for e in graph.out_edges(node.id, labels=("RELATES_TO",))}
        incident = {
            parent
            for edge in graph.in_edges(node.id)
            for parent in graph.contains_parents(edge.src)
        }
        assert related == incident
    graph.validate()
    _report("semantic layer correctness (Order hub, RELATES_TO bidirectional)")


def test_index_oracle_equivalence():
    graph = build_enriched_order_graph()
    provider = MockProvider()
    index = SemanticIndex(graph, provider)
    words = ["order", "orders", "api", "manager", "models", "processing",
             "entity", "project", "system", "java", "controller", "dto",
             "summary", "behavior", "shared", "unit"]
    rng = random.Random(31337)
    for _ in range(50):
        query = " ".join(rng.choice(words) for _ in range(rng.randint(1, 4)))
        kind = rng.choice(list(NodeKind))
        k = rng.randint(1, 8)
        threshold = rng.choice([-1.0, 0.0, 0.15, 0.35, 0.5])
        got = index.search(query, kind, k=k, threshold=threshold)
        expected = brute_force_search(graph, provider.embed(query), kind, k, threshold)
        assert [h.id for h in got] == [nid for nid, _ in expected], (query, kind)
        for hit, (_, score) in zip(got, expected):
            assert hit.score == pytest.approx(score, abs=1e-6)
    _report("index/oracle equivalence (50 random queries, exact top-k + tie-breaking)")


def test_tool_pipeline_oracles():
    graph = build_enriched_order_graph()
    provider = MockProvider()
    index = SemanticIndex(graph, provider)
    ctx = ToolContext(graph=graph, index=index)

    projects_result = projects_tool(ctx, "orders-api structure")
    assert projects_result.payload + "\n" == (GOLDEN / "projects_orders_api.txt").read_text()
    nodes, edges = _subgraph_sets(projects_result)
    oracle_nodes, oracle_edges = projects_pipeline_oracle(
        graph, provider.embed("orders-api structure"), k=5, threshold=0.35)
    assert (nodes, edges) == (oracle_nodes, oracle_edges)

    entities_result = entities_tool(ctx, "order")
    assert entities_result.payload + "\n" == (GOLDEN / "entities_order.txt").read_text()
    nodes, edges = _subgraph_sets(entities_result)
    oracle_nodes, oracle_edges = entities_pipeline_oracle(
        graph, provider.embed("order"), k=5, threshold=0.35)
    assert (nodes, edges) == (oracle_nodes, oracle_edges)
    assert nodes == {ORDER_ENTITY, CONTROLLER, DTO, PROCESSOR, MODEL}
    assert {e.key for e in graph.in_edges(ORDER_ENTITY)} <= edges  # all incoming edges

    codes_result = codes_tool(ctx, "order processor implementation", threshold=0.2)
    assert codes_result.payload + "\n" == (GOLDEN / "codes_order_processor.txt").read_text()
    nodes, edges = _subgraph_sets(codes_result)
    oracle_nodes, oracle_edges = codes_pipeline_oracle(
        graph, provider.embed("order processor implementation"), k=5, threshold=0.2)
    assert (nodes, edges) == (oracle_nodes, oracle_edges)

    query_result = graph_query_tool(ctx, "MATCH (p:Project) RETURN COUNT")
    assert query_result.payload == "COUNT 3"
    oracle_rows = query_oracle(graph, "MATCH (p:Project) RETURN COUNT")
    assert query_result.payload == f"COUNT {oracle_rows.count}"

    source_result = source_tool(ctx, PROCESSOR)
    node = graph.node(PROCESSOR)
    file_lines = (ORDER_SYSTEM / "orders-manager" / node.attrs["file"]).read_text().splitlines()
    start, end = (int(x) for x in node.attrs["span"].split("-"))
    assert source_result.payload == "\n".join(file_lines[start - 1:end])
    _report("tool pipeline oracles (five tools == hand-composed primitives + goldens)")


def _subgraph_sets(result):
    nodes = {n["id"] for n in result.subgraph["nodes"]}
    edges = {(e["src"], e["label"], e["dst"]) for e in result.subgraph["edges"]}
    return nodes, edges


def test_agent_termination_and_trace_faithfulness():
    graph = build_enriched_order_graph()
    index = SemanticIndex(graph, MockProvider())
    budget = AgentBudget(max_steps=8)

    never_finalize = ScriptedProvider(
        ['ACTION entities {"query": "order"}'], on_exhausted="cycle")
    trace = Agent(graph, index, never_finalize, budget=budget).run("loop forever")
    assert trace.step_count == 8 and trace.forced

    always_malformed = ScriptedProvider(["complete nonsense"], on_exhausted="cycle")
    trace = Agent(graph, index, always_malformed, budget=budget).run("garbage")
    assert trace.step_count == 8 and trace.forced
    assert all(s.action == {"type": "failed"} for s in trace.steps)

    scripted = ScriptedProvider([
        'ACTION entities {"query": "order"}',
        'ACTION graph_query {"query": "MATCH (a:Code)-[:CALLS*1..3]->(b:Code) RETURN a,b"}',
        'ACTION source {"id": "com.acme.api.OrderDTO"}',
        "FINAL: The controller creates orders; the processor consumes them.",
    ])
    trace = Agent(graph, index, scripted, budget=budget).run("How do orders flow?")
    assert trace.step_count == 4 and not trace.forced
    ctx = ToolContext(graph=graph, index=index, obs_tokens=budget.obs_tokens)
    for step in trace.steps:
        if step.action.get("type") == "tool":
            replayed = run_tool(ctx, step.action["tool"], step.action["args"])
            assert replayed.payload == step.observation  # byte-exact replay
            assert replayed.subgraph == step.subgraph
    _report("agent termination + trace faithfulness (3 adversarial providers, byte-exact replay)")


def test_record_replay_determinism(tmp_path):
    config = load_config(ORDER_SYSTEM / "fixture.toml")
    config1 = dataclasses.replace(config, snapshot_path=tmp_path / "a.clgs")
    config2 = dataclasses.replace(config, snapshot_path=tmp_path / "b.clgs")
    build_system(config1)
    build_system(config2)
    assert (tmp_path / "a.clgs").read_bytes() == (tmp_path / "b.clgs").read_bytes()

    graph = build_enriched_order_graph()
    index = SemanticIndex(graph, MockProvider())
    transcript = tmp_path / "record.jsonl"
    recorder = RecordingProvider(MockProvider(), transcript)
    questions = [EvalQuestion(id="q1", category="factual", text="Which projects exist?")]
    first = run_eval(questions, graph, index, recorder, tmp_path / "out1")
    replay = ReplayProvider.from_file(transcript)
    second = run_eval(questions, graph, index, replay, tmp_path / "out2")
    assert (tmp_path / "out1" / "answers.jsonl").read_bytes() == \
        (tmp_path / "out2" / "answers.jsonl").read_bytes()
    assert first.answers[0].answer == second.answers[0].answer
    _report("record/replay determinism (byte-identical snapshots + replayed answers)")


def test_eval_arithmetic():
    ratings = []
    for i in range(23):
        accuracy = "high" if i < 16 else "medium"
        ratings.append(Rating(question_id=f"q{i}", annotator="a1", accuracy=accuracy,
                              completeness="medium", coherence="medium"))
    answers = {f"q{i}": {"category": "factual"} for i in range(23)}
    report = build_report(ratings, answers)
    row = report.rows["accuracy"]
    for got, published in zip(row.as_tuple(), (69.5, 30.5, 0.0)):
        assert round(abs(got - published), 6) <= 0.1, (got, published)
    for metric_row in report.rows.values():
        assert round(abs(sum(metric_row.as_tuple()) - 100.0), 6) <= 0.1
    _report("eval arithmetic (16/7/0 of 23 -> 69.5/30.5/0.0 within ±0.1; rows sum to 100)")


def test_cli_http_parity(tmp_path):
    runner = CliRunner()
    config_file = tmp_path / "fixture.toml"
    repos = "\n".join(
        f'[[repos]]\nname = "{name}"\nroot = "{(ORDER_SYSTEM / name).as_posix()}"\nlanguage = "java"\n'
        for name in ("orders-api", "orders-manager", "orders-models")
    )
    config_file.write_text(
        '[system]\nname = "orders-system"\n\n'
        f"{repos}\n"
        '[provider]\nmode = "mock"\n\n'
        '[snapshot]\npath = "g.clgs"\n'
    )
    assert runner.invoke(cli_main, ["build", "-c", str(config_file)]).exit_code == 0

    from codeatlas.service import bootstrap_state

    state = bootstrap_state(load_config(config_file))
    app = create_app(state)
    with TestClient(app) as client:
        probes = [
            "MATCH (p:Project) RETURN COUNT",
            'MATCH (c:Code)-[:DEPENDS_ON]->(m:Code {name:"OrderModel"}) RETURN c',
            "MATCH (a:Code)-[:CALLS*1..3]->(b:Code) RETURN a,b",
        ]
        for probe in probes:
            cli_out = runner.invoke(cli_main, ["query", "-c", str(config_file),
                                               "--json", probe])
            http_out = client.post("/api/systems/orders-system/query",
                                   json={"query": probe})
            assert json.loads(cli_out.output) == http_out.json(), probe

        entry = state.systems["orders-system"]
        entry.provider = ScriptedProvider([
            'ACTION entities {"query": "order"}',
            "FINAL: parity confirmed.",
        ])
        response = client.post("/api/systems/orders-system/chat",
                               json={"question": "parity?"})
        events = parse_sse(response.text)
        final = events[-1][1]
        stored = client.get(
            f"/api/systems/orders-system/traces/{final['trace_id']}"
        ).json()
        assert {"steps": [d for e, d in events if e == "step"], "final": final} == stored
    _report("CLI/HTTP parity (query rows equal; chat stream reconstructs stored trace)")
