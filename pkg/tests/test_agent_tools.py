import json
import random

import pytest

from codeatlas.agent import (
    ToolContext,
    codes_tool,
    entities_tool,
    graph_query_tool,
    projects_tool,
    render_subgraph,
    source_tool,
)
from codeatlas.errors import NoEntities, NotACodeNode, UnknownId
from codeatlas.graph import NodeKind
from codeatlas.index import SemanticIndex
from codeatlas.llm import MockProvider

from conftest import (
    CONTROLLER,
    DTO,
    GOLDEN,
    MODEL,
    ORDER_ENTITY,
    ORDER_SYSTEM,
    PROCESSOR,
    make_structural_fixture,
)
from oracles import (
    codes_pipeline_oracle,
    entities_pipeline_oracle,
    projects_pipeline_oracle,
)


def subgraph_sets(result):
    nodes = {n["id"] for n in result.subgraph["nodes"]}
    edges = {(e["src"], e["label"], e["dst"]) for e in result.subgraph["edges"]}
    return nodes, edges


def test_projects_tool_matches_golden(order_tool_context):
    result = projects_tool(order_tool_context, "orders-api structure")
    assert result.payload + "\n" == (GOLDEN / "projects_orders_api.txt").read_text()
    nodes, _ = subgraph_sets(result)
    assert nodes == {"project:orders-api", CONTROLLER, DTO}


def test_projects_tool_matches_pipeline_oracle(order_tool_context):
    ctx = order_tool_context
    for query in ("orders-api structure", "order processing service", "shared models"):
        for threshold in (0.15, 0.35):
            result = projects_tool(ctx, query, k=3, threshold=threshold)
            qvec = ctx.index.query_vector(query)
            expected_nodes, expected_edges = projects_pipeline_oracle(
                ctx.graph, qvec, k=3, threshold=threshold
            )
            if not expected_nodes:
                assert result.payload == "(empty result)"
                continue
            nodes, edges = subgraph_sets(result)
            assert nodes == expected_nodes, query
            assert edges == expected_edges, query


def test_projects_tool_no_match_diagnostic(order_tool_context):
    result = projects_tool(order_tool_context, "completely unrelated words zzz")
    assert result.payload == "(empty result)"
    assert result.diagnostics == ["no projects matched"]


def test_projects_tool_k1_cardinality(order_tool_context):
    result = projects_tool(order_tool_context, "orders-api structure", k=1)
    project_nodes = [n for n in result.subgraph["nodes"] if n["kind"] == "Project"]
    assert len(project_nodes) <= 1


def test_entities_tool_hub_with_incoming_edges(order_tool_context):
    result = entities_tool(order_tool_context, "order")
    assert result.payload + "\n" == (GOLDEN / "entities_order.txt").read_text()
    nodes, edges = subgraph_sets(result)
    assert nodes == {ORDER_ENTITY, CONTROLLER, DTO, PROCESSOR, MODEL}
    assert (CONTROLLER, "CREATE", ORDER_ENTITY) in edges
    assert (PROCESSOR, "PROCESS", ORDER_ENTITY) in edges
    assert (MODEL, "REPRESENTS", ORDER_ENTITY) in edges
    assert (DTO, "REPRESENTS", ORDER_ENTITY) in edges
    # induced subgraph keeps every incoming edge to the entity
    incoming = {e.key for e in order_tool_context.graph.in_edges(ORDER_ENTITY)}
    assert incoming <= edges


def test_entities_tool_matches_pipeline_oracle(order_tool_context):
    ctx = order_tool_context
    for query in ("order", "order lifecycle", "invoices"):
        result_nodes: set
        try:
            result = entities_tool(ctx, query, threshold=0.3)
        except NoEntities:
            raise AssertionError("fixture has entities")
        qvec = ctx.index.query_vector(query)
        expected_nodes, expected_edges = entities_pipeline_oracle(ctx.graph, qvec, 5, 0.3)
        if not expected_nodes:
            assert result.payload == "(empty result)"
            continue
        nodes, edges = subgraph_sets(result)
        assert nodes == expected_nodes
        assert edges == expected_edges


def test_entities_tool_requires_semantic_layer():
    graph = make_structural_fixture()
    provider = MockProvider()
    index = SemanticIndex(graph, provider)
    ctx = ToolContext(graph=graph, index=index)
    with pytest.raises(NoEntities):
        entities_tool(ctx, "order")


def test_codes_tool_matches_golden_and_oracle(order_tool_context):
    ctx = order_tool_context
    result = codes_tool(ctx, "order processor implementation", threshold=0.2)
    assert result.payload + "\n" == (GOLDEN / "codes_order_processor.txt").read_text()
    qvec = ctx.index.query_vector("order processor implementation")
    expected_nodes, expected_edges = codes_pipeline_oracle(ctx.graph, qvec, 5, 0.2)
    nodes, edges = subgraph_sets(result)
    assert nodes == expected_nodes == {PROCESSOR}
    assert edges == expected_edges == set()


def test_codes_tool_mutual_edges_included(order_tool_context):
    result = codes_tool(order_tool_context, "order processor model", k=2, threshold=0.1)
    nodes, edges = subgraph_sets(result)
    if {PROCESSOR, MODEL} <= nodes:
        assert (PROCESSOR, "DEPENDS_ON", MODEL) in edges


def test_codes_tool_below_threshold_empty(order_tool_context):
    result = codes_tool(order_tool_context, "zzz qqq www")
    assert result.payload == "(empty result)"


def test_graph_query_tool_count(order_tool_context):
    result = graph_query_tool(order_tool_context, "MATCH (p:Project) RETURN COUNT")
    assert result.payload == "COUNT 3"


def test_graph_query_tool_parse_error_is_observation(order_tool_context):
    result = graph_query_tool(order_tool_context, "MATCH (p:Project RETURN p")
    assert result.payload.startswith("QUERY ERROR: at ")


def test_graph_query_tool_unknown_label_zero_rows(order_tool_context):
    result = graph_query_tool(order_tool_context, "MATCH (a)-[:WOBBLE]->(b) RETURN a,b")
    assert result.payload == "0 rows"


def test_source_tool_exact_slice(order_tool_context):
    result = source_tool(order_tool_context, PROCESSOR)
    node = order_tool_context.graph.node(PROCESSOR)
    file_lines = (
        ORDER_SYSTEM / "orders-manager" / node.attrs["file"]
    ).read_text().splitlines()
    start, end = (int(x) for x in node.attrs["span"].split("-"))
    assert result.payload == "\n".join(file_lines[start - 1:end])


def test_source_tool_rejects_non_code(order_tool_context):
    with pytest.raises(NotACodeNode):
        source_tool(order_tool_context, ORDER_ENTITY)
    with pytest.raises(UnknownId):
        source_tool(order_tool_context, "ghost.Unit")


def test_source_tool_truncation(order_tool_context):
    ctx = ToolContext(graph=order_tool_context.graph, index=order_tool_context.index,
                      obs_tokens=10)
    result = source_tool(ctx, PROCESSOR)
    assert result.payload.endswith("... [truncated]")
    assert result.truncated
    assert result.token_estimate <= 10
    assert any("truncated" in d for d in result.diagnostics)


def test_render_subgraph_line_count(semantic_graph):
    view = semantic_graph.induced_subgraph({PROCESSOR, MODEL})
    text = render_subgraph(view)
    assert len(text.splitlines()) == 4  # 2 nodes + 2 edges (DEPENDS_ON and CALLS)
    pair_view = semantic_graph.induced_subgraph({CONTROLLER, ORDER_ENTITY})
    assert len(render_subgraph(pair_view).splitlines()) == 3  # 2 nodes + 1 edge


def test_render_subgraph_empty(semantic_graph):
    assert render_subgraph(semantic_graph.induced_subgraph(set())) == "(empty result)"


def test_render_subgraph_stable_across_runs(order_tool_context):
    view = order_tool_context.graph.induced_subgraph(
        {ORDER_ENTITY, CONTROLLER, DTO, PROCESSOR, MODEL}
    )
    assert render_subgraph(view) == render_subgraph(view)
    assert render_subgraph(view) + "\n" == (GOLDEN / "entities_order.txt").read_text()
