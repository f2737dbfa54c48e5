"""Hierarchical natural-language descriptions: code units, then projects,
then the system, each level aggregating the one below.

Per-unit summaries go to the fast tier; project and system descriptions need
abstraction over many inputs and use the deep tier. Children are always
concatenated in NodeId order so prompts (and hence transcripts and replays)
are stable. Degenerate inputs (empty source, empty project) short-circuit to
fixed descriptions without touching the provider.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from ..errors import ProviderFailure
from ..graph import CodeGraph, NodeKind
from ..llm import LlmProvider, with_retries
from .prompts import PromptTemplates, load_templates

EMPTY_CODE_DESCRIPTION = "Empty code unit."
EMPTY_PROJECT_DESCRIPTION = "Empty project."
DEGRADED_ATTR = "degraded"


@dataclass
class DescribeReport:
    described: int = 0
    skipped_empty: int = 0
    degraded: list[str] = field(default_factory=list)


def describe_code(graph: CodeGraph, node_id: str, provider: LlmProvider,
                  templates: PromptTemplates, retries: int = 3) -> str:
    node = graph.node(node_id)
    source = node.attrs.get("source", "")
    if not source.strip():
        graph.set_description(node_id, EMPTY_CODE_DESCRIPTION)
        return EMPTY_CODE_DESCRIPTION
    parents = graph.contains_parents(node_id)
    project = graph.node(parents[0]).name if parents else ""
    prompt = templates.render(
        "code_summary",
        name=node.name, uid=node.id, project=project,
        language=node.attrs.get("language", ""), file=node.attrs.get("file", ""),
        source=source,
    )
    text = with_retries(lambda: provider.complete(prompt, tier="fast"), attempts=retries)
    graph.set_description(node_id, text)
    return text


def _children_block(graph: CodeGraph, child_ids: list[str]) -> str:
    # ' | ' separator: node ids may themselves contain ':'
    return "\n".join(f"- {cid} | {graph.node(cid).description or ''}" for cid in child_ids)


def describe_project(graph: CodeGraph, project_id: str, provider: LlmProvider,
                     templates: PromptTemplates, retries: int = 3) -> str:
    node = graph.node(project_id)
    children = sorted(e.dst for e in graph.out_edges(project_id, labels=("CONTAINS",)))
    if not children:
        graph.set_description(project_id, EMPTY_PROJECT_DESCRIPTION)
        return EMPTY_PROJECT_DESCRIPTION
    prompt = templates.render(
        "project_summary", name=node.name, children=_children_block(graph, children)
    )
    text = with_retries(lambda: provider.complete(prompt, tier="deep"), attempts=retries)
    graph.set_description(project_id, text)
    return text


def describe_system(graph: CodeGraph, provider: LlmProvider,
                    templates: PromptTemplates, retries: int = 3) -> str:
    system = graph.system_node()
    children = sorted(e.dst for e in graph.out_edges(system.id, labels=("CONTAINS",)))
    prompt = templates.render(
        "system_summary", name=system.name, children=_children_block(graph, children)
    )
    text = with_retries(lambda: provider.complete(prompt, tier="deep"), attempts=retries)
    graph.set_description(system.id, text)
    return text


def describe_graph(graph: CodeGraph, provider: LlmProvider,
                   templates: PromptTemplates | None = None,
                   parallelism: int = 4, retries: int = 3) -> DescribeReport:
    """Describe every Code node, then each Project, then the System.

    Code-level calls may run concurrently up to `parallelism`; the project and
    system levels are sequential barriers, preserving the hierarchy ordering.
    Provider failures degrade the node (attrs marker) instead of aborting.
    """
    templates = templates or load_templates()
    report = DescribeReport()

    def one_code(node_id: str) -> None:
        try:
            text = describe_code(graph, node_id, provider, templates, retries=retries)
        except ProviderFailure:
            graph.node(node_id).attrs[DEGRADED_ATTR] = "provider_failure"
            report.degraded.append(node_id)
            return
        if text == EMPTY_CODE_DESCRIPTION:
            report.skipped_empty += 1
        else:
            report.described += 1

    code_ids = [n.id for n in graph.nodes_of_kind(NodeKind.CODE)]
    if parallelism > 1 and len(code_ids) > 1:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            list(pool.map(one_code, code_ids))
    else:
        for cid in code_ids:
            one_code(cid)

    for project in graph.nodes_of_kind(NodeKind.PROJECT):
        try:
            describe_project(graph, project.id, provider, templates, retries=retries)
            report.described += 1
        except ProviderFailure:
            project.attrs[DEGRADED_ATTR] = "provider_failure"
            report.degraded.append(project.id)

    try:
        describe_system(graph, provider, templates, retries=retries)
        report.described += 1
    except ProviderFailure:
        graph.system_node().attrs[DEGRADED_ATTR] = "provider_failure"
        report.degraded.append(graph.system_node().id)

    system = graph.system_node()
    system.attrs["template_hash"] = templates.version_hash
    return report
