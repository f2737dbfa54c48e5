import random

import pytest

from codeatlas.errors import ParseError
from codeatlas.graph import execute_query, render_rows
from codeatlas.graph.query import parse_query

from conftest import CONTROLLER, DTO, MODEL, PROCESSOR
from oracles import query_oracle, random_valid_graph

# Golden query set exercised against the brute-force enumerator.
GOLDEN_QUERIES = [
    'MATCH (p:Project) RETURN COUNT',
    'MATCH (c:Code) RETURN c',
    'MATCH (c:Code)-[:DEPENDS_ON]->(m:Code {name:"OrderModel"}) RETURN c',
    'MATCH (a:Code)-[:CALLS*1..3]->(b:Code) RETURN a,b',
    'MATCH (s:System)-[:CONTAINS]->(p:Project) RETURN p',
    'MATCH (p:Project)-[:CONTAINS]->(c:Code) RETURN p,c',
    'MATCH (c:Code)-[:DEPENDS_ON|CALLS]->(d:Code) RETURN c,d',
    'MATCH (c:Code)-[]->(x:Entity) RETURN c,x',
    'MATCH (e:Entity)-[:RELATES_TO]->(p:Project) RETURN e,p',
    'MATCH (x)-[:CONTAINS*1..2]->(y) RETURN x,y',
    'MATCH (x {name:"Order"}) RETURN x',
    'MATCH (c:Code {file:"src/com/acme/api/OrderController.java"}) RETURN c',
    'MATCH (a)-[:NONEXISTENT]->(b) RETURN COUNT',
    'MATCH (x:Banana) RETURN x',
    'MATCH (a:Code)-[:CALLS*2..3]->(b) RETURN a,b',
    'MATCH (s:System)-[*1..8]->(n) RETURN n',
    'MATCH (a)-[:CREATE|PROCESS]->(e:Entity) RETURN a,e',
    'MATCH (p:Project) RETURN p,p',
    'MATCH (m:Code {name:"OrderModel"})-[:DEPENDS_ON]->(z) RETURN COUNT',
    'MATCH (e:Entity)-[:RELATES_TO*1..1]->(p) RETURN e,p',
]


def test_depends_on_lookup(semantic_graph):
    result = execute_query(
        semantic_graph,
        'MATCH (c:Code)-[:DEPENDS_ON]->(m:Code {name:"OrderModel"}) RETURN c',
    )
    assert result.rows == ((PROCESSOR,),)


def test_project_count(semantic_graph):
    result = execute_query(semantic_graph, 'MATCH (p:Project) RETURN COUNT')
    assert result.count == 3


def test_calls_within_three_hops(semantic_graph):
    result = execute_query(semantic_graph, 'MATCH (a:Code)-[:CALLS*1..3]->(b:Code) RETURN a,b')
    assert result.rows == ((CONTROLLER, DTO), (PROCESSOR, MODEL))
    assert result == query_oracle(semantic_graph, 'MATCH (a:Code)-[:CALLS*1..3]->(b:Code) RETURN a,b')


@pytest.mark.parametrize("query", GOLDEN_QUERIES)
def test_golden_queries_match_oracle(semantic_graph, query):
    assert execute_query(semantic_graph, query) == query_oracle(semantic_graph, query)


def test_random_graphs_match_oracle():
    rng = random.Random(4242)
    probes = [
        'MATCH (c:Code)-[:CALLS*1..4]->(d:Code) RETURN c,d',
        'MATCH (c:Code)-[:DEPENDS_ON|IMPLEMENTS*2..5]->(d) RETURN c,d',
        'MATCH (x)-[]->(y) RETURN x,y',
        'MATCH (s:System)-[:CONTAINS*1..2]->(n) RETURN n',
        'MATCH (c:Code)-[:REPRESENTS]->(e:Entity) RETURN COUNT',
        'MATCH (n) RETURN n',
    ]
    for _ in range(8):
        g = random_valid_graph(rng, n_projects=2, n_code=14, n_entities=3, extra_edges=40)
        for query in probes:
            assert execute_query(g, query) == query_oracle(g, query), query


def test_unknown_label_yields_zero_rows(semantic_graph):
    result = execute_query(semantic_graph, 'MATCH (a)-[:WIBBLE]->(b) RETURN a,b')
    assert result.rows == ()


def test_unknown_kind_yields_zero_rows(semantic_graph):
    result = execute_query(semantic_graph, 'MATCH (a:Widget) RETURN a')
    assert result.rows == ()


def test_unknown_attr_filter_yields_zero_rows(semantic_graph):
    result = execute_query(semantic_graph, 'MATCH (a {nosuchkey:"x"}) RETURN a')
    assert result.rows == ()


def test_parse_error_position_and_expected():
    with pytest.raises(ParseError) as err:
        parse_query('MATCH (a:Code RETURN a')
    assert err.value.position == 14
    assert ")" in err.value.expected or "}" in "".join(err.value.expected) or err.value.expected


def test_parse_error_missing_match():
    with pytest.raises(ParseError) as err:
        parse_query('SELECT (a) RETURN a')
    assert err.value.position == 0
    assert err.value.expected == ["MATCH"]


def test_parse_error_depth_bounds():
    with pytest.raises(ParseError):
        parse_query('MATCH (a)-[*0..2]->(b) RETURN a')
    with pytest.raises(ParseError):
        parse_query('MATCH (a)-[*2..1]->(b) RETURN a')
    with pytest.raises(ParseError):
        parse_query('MATCH (a)-[*1..9]->(b) RETURN a')


def test_parse_error_unbound_return_var():
    with pytest.raises(ParseError) as err:
        parse_query('MATCH (a)-[]->(b) RETURN z')
    assert sorted(err.value.expected) == ["a", "b"]


def test_parse_error_trailing_garbage():
    with pytest.raises(ParseError):
        parse_query('MATCH (a) RETURN a extra')


def test_string_escapes(semantic_graph):
    result = execute_query(semantic_graph, 'MATCH (x {name:"Order\\""}) RETURN x')
    assert result.rows == ()
    query = parse_query('MATCH (x {name:"a\\\\b\\n"}) RETURN x')
    assert query.src.props == (("name", "a\\b\n"),)


def test_render_rows(semantic_graph):
    count = execute_query(semantic_graph, 'MATCH (p:Project) RETURN COUNT')
    assert render_rows(count) == "COUNT 3"
    rows = execute_query(semantic_graph, 'MATCH (a:Code)-[:CALLS]->(b:Code) RETURN a,b')
    assert render_rows(rows) == (
        "2 rows\n"
        f"{CONTROLLER} | {DTO}\n"
        f"{PROCESSOR} | {MODEL}"
    )
