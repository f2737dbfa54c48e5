"""Command-line interface: build, query, chat, serve, eval.

Exit codes: 0 success, 2 configuration errors, 3 build/runtime failures.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .agent import Agent, AgentBudget
from .config import SystemConfig, load_config, make_provider
from .errors import BuildError, CodeAtlasError, ConfigError, ParseError
from .evaluation import build_report, load_answers, load_questions, load_ratings, run_eval
from .graph import execute_query, load_snapshot, render_rows
from .index import SemanticIndex
from .pipeline import build_system

EXIT_CONFIG = 2
EXIT_BUILD = 3


def _fail(message: str, code: int) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _load_config(config_path: str) -> SystemConfig:
    try:
        return load_config(config_path)
    except ConfigError as exc:
        _fail(str(exc), EXIT_CONFIG)
        raise AssertionError  # unreachable


def _load_built_system(config: SystemConfig):
    if not Path(config.snapshot_path).is_file():
        _fail(
            f"snapshot {config.snapshot_path} not found; run `codeatlas build` first",
            EXIT_BUILD,
        )
    try:
        graph = load_snapshot(config.snapshot_path)
    except CodeAtlasError as exc:
        _fail(str(exc), EXIT_BUILD)
        raise AssertionError
    provider = make_provider(config.provider)
    index = SemanticIndex(graph, provider, k=config.index.k,
                          threshold=config.index.threshold)
    return graph, index, provider


@click.group()
def main() -> None:
    """Semantic multi-repository code knowledge graph toolkit."""


@main.command()
@click.option("-c", "--config", "config_path", required=True,
              type=click.Path(exists=False), help="System config file (TOML).")
def build(config_path: str) -> None:
    """Build the knowledge graph and write a snapshot."""
    config = _load_config(config_path)
    phases = []
    try:
        result = build_system(config, on_phase=lambda p, c: phases.append(p))
    except CodeAtlasError as exc:
        _fail(str(exc), EXIT_BUILD)
        raise AssertionError
    click.echo(result.extraction.render_text())
    click.echo(
        f"  entities: {result.entities}; embedded nodes: {result.embedding.embedded}"
    )
    click.echo(f"  snapshot: {result.snapshot_path} ({result.elapsed_s:.2f}s)")


@main.command()
@click.option("-c", "--config", "config_path", required=True, type=click.Path())
@click.option("--json", "as_json", is_flag=True, help="Emit machine-readable rows.")
@click.argument("query_text")
def query(config_path: str, as_json: bool, query_text: str) -> None:
    """Run a graph query against the built snapshot."""
    config = _load_config(config_path)
    graph, _, _ = _load_built_system(config)
    try:
        result = execute_query(graph, query_text)
    except ParseError as exc:
        click.echo(f"QUERY ERROR: {exc}", err=True)
        sys.exit(1)
    if as_json:
        if result.is_count:
            click.echo(json.dumps({"count": result.count}, sort_keys=True))
        else:
            click.echo(json.dumps(
                {"columns": list(result.columns), "rows": [list(r) for r in result.rows]},
                sort_keys=True,
            ))
    elif result.is_count:
        click.echo(str(result.count))
    else:
        click.echo(render_rows(result))


@main.command()
@click.option("-c", "--config", "config_path", required=True, type=click.Path())
def chat(config_path: str) -> None:
    """Interactive REPL: one agent run per input line."""
    config = _load_config(config_path)
    graph, index, provider = _load_built_system(config)
    budget = AgentBudget(max_steps=config.agent.max_steps,
                         obs_tokens=config.agent.observation_tokens)
    agent = Agent(graph, index, provider, budget=budget)
    click.echo("codeatlas chat (empty line quits)")
    while True:
        try:
            line = input("? ").strip()
        except EOFError:
            break
        if not line:
            break
        trace = agent.run(line, on_step=_print_step)
        click.echo(f"ANSWER: {trace.final_answer}\n")


def _print_step(step) -> None:
    action = step.action
    if action.get("type") == "tool":
        click.echo(f"[step {step.index}] {action['tool']} {json.dumps(action['args'])}")
    else:
        click.echo(f"[step {step.index}] {action.get('type')}")
    preview = step.observation.splitlines()[:6]
    for line in preview:
        click.echo(f"    {line}")


@main.command()
@click.option("-c", "--config", "config_path", required=True, type=click.Path())
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
@click.option("--ui-dir", default=None, type=click.Path(),
              help="Serve a built web UI from this directory at /ui.")
def serve(config_path: str, host: str, port: int, ui_dir: str | None) -> None:
    """Start the HTTP service (loads the snapshot when present)."""
    import uvicorn

    from .service import bootstrap_state, create_app

    config = _load_config(config_path)
    state = bootstrap_state(config)
    app = create_app(state, ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=port)


@main.group(name="eval")
def eval_group() -> None:
    """Evaluation harness."""


@eval_group.command(name="run")
@click.option("-c", "--config", "config_path", required=True, type=click.Path())
@click.option("-q", "--questions", "questions_path", required=True, type=click.Path())
@click.option("-o", "--out", "out_dir", required=True, type=click.Path())
def eval_run(config_path: str, questions_path: str, out_dir: str) -> None:
    """Run every question in an independent agent session."""
    config = _load_config(config_path)
    graph, index, provider = _load_built_system(config)
    try:
        questions = load_questions(questions_path)
    except CodeAtlasError as exc:
        _fail(str(exc), EXIT_CONFIG)
        raise AssertionError
    budget = AgentBudget(max_steps=config.agent.max_steps,
                         obs_tokens=config.agent.observation_tokens)
    result = run_eval(questions, graph, index, provider, out_dir, budget=budget)
    click.echo(
        f"{len(result.answers)} answers written to {result.answers_path} "
        f"({result.failed_count} failed)"
    )


@eval_group.command(name="report")
@click.option("-r", "--ratings", "ratings_path", required=True, type=click.Path())
@click.option("-a", "--answers", "answers_path", required=True, type=click.Path())
@click.option("--by-category", is_flag=True)
@click.option("--json", "as_json", is_flag=True)
def eval_report(ratings_path: str, answers_path: str, by_category: bool,
                as_json: bool) -> None:
    """Render the percentage table from ratings and answers."""
    try:
        ratings = load_ratings(ratings_path)
        answers = load_answers(answers_path)
        report = build_report(ratings, answers, by_category=by_category)
    except CodeAtlasError as exc:
        _fail(str(exc), EXIT_CONFIG)
        raise AssertionError
    if as_json:
        click.echo(json.dumps(report.to_dict(), sort_keys=True))
    else:
        click.echo(report.render_text())


if __name__ == "__main__":
    main()
