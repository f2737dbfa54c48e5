import numpy as np
import pytest

from codeatlas.enrich import (
    DEGRADED_ATTR,
    EMPTY_CODE_DESCRIPTION,
    EMPTY_PROJECT_DESCRIPTION,
    describe_code,
    describe_graph,
    describe_project,
    describe_system,
    load_templates,
)
from codeatlas.errors import ProviderFailure
from codeatlas.graph import CodeGraph, Edge, Node, NodeKind, snapshot_bytes
from codeatlas.llm import (
    EMBED_TIER,
    MockProvider,
    RecordingProvider,
    ReplayProvider,
    prompt_hash,
)

from conftest import (
    API,
    CONTROLLER,
    MODELS,
    PROCESSOR,
    build_enriched_order_graph,
    make_structural_fixture,
)

TEMPLATES = load_templates()


def test_describe_code_uses_fast_tier_and_stores_text(structural_graph):
    provider = RecordingProvider(MockProvider())
    text = describe_code(structural_graph, PROCESSOR, provider, TEMPLATES)
    assert text.startswith("Summary of OrderProcessor:")
    assert structural_graph.node(PROCESSOR).description == text
    assert [r.tier for r in provider.transcript.records] == ["fast"]


def test_describe_code_empty_source_short_circuits(structural_graph):
    structural_graph.node(CONTROLLER).attrs["source"] = ""
    provider = RecordingProvider(MockProvider())
    text = describe_code(structural_graph, CONTROLLER, provider, TEMPLATES)
    assert text == EMPTY_CODE_DESCRIPTION
    assert provider.transcript.records == []


def test_describe_project_aggregates_children(structural_graph):
    provider = MockProvider()
    for cid in (CONTROLLER, "com.acme.api.OrderDTO"):
        describe_code(structural_graph, cid, provider, TEMPLATES)
    text = describe_project(structural_graph, API, provider, TEMPLATES)
    assert text.startswith("Project orders-api: aggregates 2 code units:")


def test_describe_empty_project_short_circuits():
    g = CodeGraph("s")
    g.add_node(Node(id="system:s", kind=NodeKind.SYSTEM, name="s"))
    g.add_node(Node(id="project:p", kind=NodeKind.PROJECT, name="p"))
    g.add_edge(Edge(src="system:s", dst="project:p", label="CONTAINS"))
    provider = RecordingProvider(MockProvider())
    assert describe_project(g, "project:p", provider, TEMPLATES) == EMPTY_PROJECT_DESCRIPTION
    assert provider.transcript.records == []


def test_project_prompt_lists_children_in_sorted_uid_order(structural_graph):
    provider = MockProvider()
    recorder1 = RecordingProvider(provider)
    describe_graph(structural_graph, recorder1, TEMPLATES, parallelism=1)
    project_prompts = [r.prompt for r in recorder1.transcript.records
                       if r.prompt.startswith("Task: describe a project")]
    for prompt in project_prompts:
        listed = [line[2:].split(" | ", 1)[0] for line in prompt.splitlines()
                  if line.startswith("- ")]
        assert listed == sorted(listed)
    # prompt hashes stable across two independent builds
    other = make_structural_fixture()
    recorder2 = RecordingProvider(MockProvider())
    describe_graph(other, recorder2, TEMPLATES, parallelism=1)
    hashes1 = sorted(prompt_hash(p) for p in project_prompts)
    hashes2 = sorted(prompt_hash(r.prompt) for r in recorder2.transcript.records
                     if r.prompt.startswith("Task: describe a project"))
    assert hashes1 == hashes2


def test_hierarchy_ordering_from_transcript(structural_graph):
    recorder = RecordingProvider(MockProvider())
    describe_graph(structural_graph, recorder, TEMPLATES, parallelism=4)
    kinds = []
    for record in recorder.transcript.records:
        if record.prompt.startswith("Task: summarize one code unit"):
            kinds.append("code")
        elif record.prompt.startswith("Task: describe a project"):
            kinds.append("project")
        elif record.prompt.startswith("Task: give a unified"):
            kinds.append("system")
    assert kinds.index("project") > max(i for i, k in enumerate(kinds) if k == "code")
    assert kinds[-1] == "system"
    assert kinds.count("system") == 1


def test_system_prompt_embeds_all_project_descriptions(structural_graph):
    provider = MockProvider()
    describe_graph(structural_graph, provider, TEMPLATES, parallelism=1)
    recorder = RecordingProvider(provider)
    describe_system(structural_graph, recorder, TEMPLATES)
    prompt = recorder.transcript.records[-1].prompt
    for pid in (API, "project:orders-manager", MODELS):
        assert structural_graph.node(pid).description in prompt


def test_describe_survives_provider_failure(structural_graph):
    class Flaky(MockProvider):
        def complete(self, prompt, tier="fast"):
            if "OrderProcessor" in prompt:
                raise ProviderFailure("boom")
            return super().complete(prompt, tier)

    report = describe_graph(structural_graph, Flaky(), TEMPLATES, parallelism=1)
    assert PROCESSOR in report.degraded
    assert structural_graph.node(PROCESSOR).attrs.get(DEGRADED_ATTR) == "provider_failure"
    assert structural_graph.node(CONTROLLER).description is not None


def test_retry_succeeds_after_transient_failures(structural_graph):
    class Transient(MockProvider):
        def __init__(self):
            super().__init__()
            self.failures = 2

        def complete(self, prompt, tier="fast"):
            if self.failures > 0:
                self.failures -= 1
                raise ProviderFailure("transient")
            return super().complete(prompt, tier)

    text = describe_code(structural_graph, PROCESSOR, Transient(), TEMPLATES, retries=3)
    assert text.startswith("Summary of OrderProcessor:")


def test_template_hash_recorded_on_system_node(structural_graph):
    describe_graph(structural_graph, MockProvider(), TEMPLATES, parallelism=1)
    assert structural_graph.system_node().attrs["template_hash"] == TEMPLATES.version_hash


def test_record_replay_full_build_identical(tmp_path):
    transcript_path = tmp_path / "build.jsonl"
    recorder = RecordingProvider(MockProvider(), transcript_path)
    recorded_graph = build_enriched_order_graph(provider=recorder)

    replay = ReplayProvider.from_file(transcript_path)
    replayed_graph = build_enriched_order_graph(provider=replay)
    assert snapshot_bytes(recorded_graph) == snapshot_bytes(replayed_graph)
    assert any(r.tier == EMBED_TIER for r in recorder.transcript.records)
