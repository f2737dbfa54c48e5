import sys
from pathlib import Path

import pytest

from codeatlas.graph import CodeGraph, Edge, Node, NodeKind

sys.path.insert(0, str(Path(__file__).resolve().parent))

REPO_ROOT = Path(__file__).resolve().parents[1]
FIXTURES = REPO_ROOT / "fixtures"
ORDER_SYSTEM = FIXTURES / "order-system"
GOLDEN = Path(__file__).resolve().parent / "golden"

SYSTEM_ID = "system:orders-system"
API = "project:orders-api"
MANAGER = "project:orders-manager"
MODELS = "project:orders-models"
CONTROLLER = "com.acme.api.OrderController"
DTO = "com.acme.api.OrderDTO"
PROCESSOR = "com.acme.manager.OrderProcessor"
MODEL = "com.acme.models.OrderModel"
ORDER_ENTITY = "entity:Order"


def make_structural_fixture() -> CodeGraph:
    """Hand-built mirror of the three-repo order fixture for graph-core tests."""
    g = CodeGraph("orders-system")
    g.add_node(Node(id=SYSTEM_ID, kind=NodeKind.SYSTEM, name="orders-system"))
    for pid, name in ((API, "orders-api"), (MANAGER, "orders-manager"), (MODELS, "orders-models")):
        g.add_node(Node(id=pid, kind=NodeKind.PROJECT, name=name))
        g.add_edge(Edge(src=SYSTEM_ID, dst=pid, label="CONTAINS"))
    code_nodes = [
        (CONTROLLER, "OrderController", API, "src/com/acme/api/OrderController.java"),
        (DTO, "OrderDTO", API, "src/com/acme/api/OrderDTO.java"),
        (PROCESSOR, "OrderProcessor", MANAGER, "src/com/acme/manager/OrderProcessor.java"),
        (MODEL, "OrderModel", MODELS, "src/com/acme/models/OrderModel.java"),
    ]
    for cid, name, project, path in code_nodes:
        g.add_node(Node(
            id=cid, kind=NodeKind.CODE, name=name,
            attrs={"file": path, "span": "3-12", "language": "java", "source": f"class {name} {{}}"},
        ))
        g.add_edge(Edge(src=project, dst=cid, label="CONTAINS"))
    g.add_edge(Edge(src=CONTROLLER, dst=DTO, label="DEPENDS_ON"))
    g.add_edge(Edge(src=CONTROLLER, dst=DTO, label="CALLS"))
    g.add_edge(Edge(src=PROCESSOR, dst=MODEL, label="DEPENDS_ON"))
    g.add_edge(Edge(src=PROCESSOR, dst=MODEL, label="CALLS"))
    return g


def make_semantic_fixture() -> CodeGraph:
    """Structural fixture plus descriptions and the Order entity hub."""
    g = make_structural_fixture()
    g.set_description(SYSTEM_ID, "Order management system spread over three repositories.")
    g.set_description(API, "REST API receiving orders.")
    g.set_description(MANAGER, "Consumer service processing orders.")
    g.set_description(MODELS, "Shared library of domain models.")
    g.set_description(CONTROLLER, "Accepts order submissions over HTTP.")
    g.set_description(DTO, "Transfer object for incoming orders.")
    g.set_description(PROCESSOR, "Processes queued orders.")
    g.set_description(MODEL, "Persistent order data model.")
    g.add_node(Node(id=ORDER_ENTITY, kind=NodeKind.ENTITY, name="Order",
                    description="Domain entity Order shared across the system."))
    g.add_edge(Edge(src=CONTROLLER, dst=ORDER_ENTITY, label="CREATE"))
    g.add_edge(Edge(src=PROCESSOR, dst=ORDER_ENTITY, label="PROCESS"))
    g.add_edge(Edge(src=MODEL, dst=ORDER_ENTITY, label="REPRESENTS"))
    g.add_edge(Edge(src=DTO, dst=ORDER_ENTITY, label="REPRESENTS"))
    for pid in (API, MANAGER, MODELS):
        g.add_edge(Edge(src=ORDER_ENTITY, dst=pid, label="RELATES_TO"))
    return g


@pytest.fixture
def structural_graph() -> CodeGraph:
    return make_structural_fixture()


@pytest.fixture
def semantic_graph() -> CodeGraph:
    return make_semantic_fixture()


def order_repo_specs():
    from codeatlas.extract import RepoSpec

    return [
        RepoSpec(name="orders-api", root=ORDER_SYSTEM / "orders-api", language="java"),
        RepoSpec(name="orders-manager", root=ORDER_SYSTEM / "orders-manager", language="java"),
        RepoSpec(name="orders-models", root=ORDER_SYSTEM / "orders-models", language="java"),
    ]


def build_enriched_order_graph(provider=None):
    """Full mock-mode pipeline over the shipped order fixture."""
    from codeatlas.enrich import describe_graph, enrich_entities, load_templates
    from codeatlas.extract import build_structural_graph
    from codeatlas.index import embed_all
    from codeatlas.llm import MockProvider

    provider = provider or MockProvider()
    graph, _ = build_structural_graph(order_repo_specs(), "orders-system")
    templates = load_templates()
    describe_graph(graph, provider, templates, parallelism=1)
    enrich_entities(graph, provider, templates)
    embed_all(graph, provider)
    graph.validate()
    return graph


@pytest.fixture(scope="session")
def enriched_order_graph() -> CodeGraph:
    return build_enriched_order_graph()


@pytest.fixture(scope="session")
def order_index(enriched_order_graph):
    from codeatlas.index import SemanticIndex
    from codeatlas.llm import MockProvider

    return SemanticIndex(enriched_order_graph, MockProvider())


@pytest.fixture
def order_tool_context(enriched_order_graph, order_index):
    from codeatlas.agent import ToolContext

    return ToolContext(graph=enriched_order_graph, index=order_index)
