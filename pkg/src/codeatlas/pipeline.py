"""End-to-end build orchestration.

Phases run strictly in order (scanning, structural, describing, entities,
embedding) with a callback fired on each transition so jobs can report
progress. The result graph is validated and snapshotted.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

from .config import SystemConfig, make_provider
from .enrich import describe_graph, enrich_entities, load_templates
from .errors import BuildError, CodeAtlasError
from .extract import ExtractionReport, build_structural_graph
from .graph import CodeGraph, save_snapshot
from .index import EmbedReport, embed_all
from .llm import LlmProvider

PHASES = ("scanning", "structural", "describing", "entities", "embedding", "done")

PhaseCallback = Callable[[str, dict], None]


@dataclass
class BuildResult:
    graph: CodeGraph
    extraction: ExtractionReport
    embedding: EmbedReport
    entities: int
    elapsed_s: float
    snapshot_path: str | None = None
    diagnostics: list[str] = field(default_factory=list)


def build_system(
    config: SystemConfig,
    provider: LlmProvider | None = None,
    on_phase: PhaseCallback | None = None,
    write_snapshot: bool = True,
) -> BuildResult:
    started = time.monotonic()

    def phase(name: str, **counters) -> None:
        if on_phase:
            on_phase(name, counters)

    provider = provider or make_provider(config.provider)
    templates = load_templates()
    try:
        phase("scanning", repos=len(config.repos))
        # scanning and structural assembly happen inside the same call;
        # report the transition before edges land in the graph
        phase("structural")
        graph, extraction = build_structural_graph(
            config.repos, config.name,
            promote_methods=config.promote_methods,
            max_file_bytes=config.max_file_bytes,
            workers=config.parallelism,
        )
        phase("describing", units=sum(r.units for r in extraction.repos))
        describe_report = describe_graph(
            graph, provider, templates, parallelism=config.parallelism
        )
        phase("entities", described=describe_report.described)
        canonical, layer_report, entity_diags = enrich_entities(graph, provider, templates)
        phase("embedding", entities=layer_report.entities)
        embed_report = embed_all(graph, provider)
        graph.validate()
        snapshot_path = None
        if write_snapshot:
            save_snapshot(graph, config.snapshot_path)
            snapshot_path = str(config.snapshot_path)
        phase("done", embedded=embed_report.embedded)
    except CodeAtlasError:
        raise
    except Exception as exc:  # surface unexpected faults as build errors
        raise BuildError(f"pipeline failed: {exc}") from exc

    diagnostics = [str(d) for d in extraction.diagnostics]
    diagnostics.extend(entity_diags)
    return BuildResult(
        graph=graph,
        extraction=extraction,
        embedding=embed_report,
        entities=layer_report.entities,
        elapsed_s=time.monotonic() - started,
        snapshot_path=snapshot_path,
        diagnostics=diagnostics,
    )
