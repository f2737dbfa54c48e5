import dataclasses

from codeatlas.config import load_config
from codeatlas.graph import NodeKind, load_snapshot, snapshot_bytes
from codeatlas.pipeline import PHASES, build_system

from conftest import ORDER_ENTITY, ORDER_SYSTEM


def fixture_config(tmp_path, name_suffix=""):
    config = load_config(ORDER_SYSTEM / "fixture.toml")
    config = dataclasses.replace(config, snapshot_path=tmp_path / f"g{name_suffix}.clgs")
    return config


def test_full_build_produces_semantic_graph(tmp_path):
    config = fixture_config(tmp_path)
    result = build_system(config)
    graph = result.graph
    assert graph.kind_counts() == {"System": 1, "Project": 3, "Code": 4, "Entity": 1}
    assert graph.has_node(ORDER_ENTITY)
    assert result.entities == 1
    assert result.embedding.embedded == 9
    assert (tmp_path / "g.clgs").is_file()
    loaded = load_snapshot(config.snapshot_path)
    assert loaded.same_content(graph)


def test_phases_fire_in_order(tmp_path):
    config = fixture_config(tmp_path)
    seen = []
    build_system(config, on_phase=lambda p, c: seen.append(p))
    assert seen == list(PHASES)


def test_two_builds_byte_identical(tmp_path):
    first = build_system(fixture_config(tmp_path, "1"))
    second = build_system(fixture_config(tmp_path, "2"))
    assert (tmp_path / "g1.clgs").read_bytes() == (tmp_path / "g2.clgs").read_bytes()
    assert snapshot_bytes(first.graph) == snapshot_bytes(second.graph)


def test_embeddings_persist_in_snapshot(tmp_path):
    config = fixture_config(tmp_path)
    build_system(config)
    loaded = load_snapshot(config.snapshot_path)
    entity = loaded.node(ORDER_ENTITY)
    assert entity.embedding is not None
    assert entity.kind is NodeKind.ENTITY
    assert loaded.meta.embedding_dim == 256
