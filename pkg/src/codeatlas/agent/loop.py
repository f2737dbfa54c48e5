"""Reactive think/act/observe loop over the retrieval tools.

Sessions are one-shot: every run() gets a fresh conversation containing only
the system prompt and the question, matching the evaluation protocol.
Malformed provider replies get up to two repair re-prompts per step before
the step is logged as failed; the loop always halts within max_steps, forcing
a locally synthesized answer from accumulated observations if the provider
never finalizes, and terminating with an error trace (never a hang) if the
provider keeps failing outright.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from ..errors import CodeAtlasError, MalformedAction, ProviderFailure
from ..graph import CodeGraph
from ..index import SemanticIndex
from ..llm import LlmProvider, with_retries
from .actions import FinalAnswer, ToolCall, parse_action
from .tools import ToolContext, ToolResult, run_tool
from .trace import AgentTrace, TraceStep

_SYSTEM_TEMPLATE_PATH = Path(__file__).resolve().parent / "templates" / "agent_system.txt"

REPAIR_LIMIT = 2  # repair re-prompts per step


@dataclass
class AgentBudget:
    max_steps: int = 8
    obs_tokens: int = 2000


def load_system_prompt() -> str:
    return _SYSTEM_TEMPLATE_PATH.read_text(encoding="utf-8")


class Agent:
    def __init__(
        self,
        graph: CodeGraph,
        index: SemanticIndex,
        provider: LlmProvider,
        budget: AgentBudget | None = None,
        system_prompt: str | None = None,
        provider_retries: int = 3,
    ):
        self.graph = graph
        self.index = index
        self.provider = provider
        self.budget = budget or AgentBudget()
        self.system_prompt = system_prompt or load_system_prompt()
        self.system_prompt_hash = hashlib.sha256(
            self.system_prompt.encode("utf-8")
        ).hexdigest()[:16]
        self.provider_retries = provider_retries

    # -- prompt assembly ------------------------------------------------------

    def _compose(self, question: str, steps: list[TraceStep]) -> str:
        parts = [self.system_prompt, f"\nQuestion: {question}\n"]
        for step in steps:
            action = step.action
            if action.get("type") == "tool":
                line = f"ACTION {action['tool']} {json.dumps(action['args'], sort_keys=True)}"
            else:
                line = "(malformed)"
            parts.append(
                f"\nStep {step.index}\n"
                f"Thought: {step.thought}\n"
                f"Action: {line}\n"
                f"Observation:\n{step.observation}\n"
            )
        parts.append("\nNext step:\n")
        return "".join(parts)

    @staticmethod
    def _repair_prompt(base: str, error: MalformedAction) -> str:
        return (
            f"{base}"
            f"Your previous reply could not be parsed: {error}. "
            f"Reply with exactly one line `ACTION <tool> <json-args>` "
            f"or start your reply with `FINAL:`.\n"
        )

    # -- main loop ----------------------------------------------------------------

    def run(self, question: str,
            on_step: Callable[[TraceStep], None] | None = None) -> AgentTrace:
        started = time.monotonic()
        steps: list[TraceStep] = []
        ctx = ToolContext(graph=self.graph, index=self.index,
                          obs_tokens=self.budget.obs_tokens)
        final_answer: str | None = None
        forced = False
        error: str | None = None

        for step_index in range(1, self.budget.max_steps + 1):
            base_prompt = self._compose(question, steps)
            prompt = base_prompt
            repairs: list[str] = []
            action = None
            thought = ""
            for _attempt in range(1 + REPAIR_LIMIT):
                try:
                    reply = with_retries(
                        lambda p=prompt: self.provider.complete(p, tier="deep"),
                        attempts=self.provider_retries,
                    )
                except ProviderFailure as exc:
                    error = f"provider failure: {exc}"
                    break
                try:
                    action, thought = parse_action(reply)
                    break
                except MalformedAction as exc:
                    repairs.append(str(exc))
                    prompt = self._repair_prompt(base_prompt, exc)
            if error is not None:
                break

            if action is None:
                step = TraceStep(
                    index=step_index, thought="", action={"type": "failed"},
                    observation=(
                        f"STEP ERROR: no well-formed action after {REPAIR_LIMIT} "
                        f"repair re-prompts"
                    ),
                    repairs=repairs,
                )
                steps.append(step)
                if on_step:
                    on_step(step)
                continue

            if isinstance(action, FinalAnswer):
                step = TraceStep(index=step_index, thought=thought,
                                 action={"type": "final"}, observation="",
                                 repairs=repairs)
                steps.append(step)
                if on_step:
                    on_step(step)
                final_answer = action.text
                break

            assert isinstance(action, ToolCall)
            result: ToolResult | None = None
            try:
                result = run_tool(ctx, action.tool, action.args)
                observation = result.payload
            except CodeAtlasError as exc:
                observation = f"TOOL ERROR: {type(exc).__name__}: {exc}"
            step = TraceStep(
                index=step_index, thought=thought,
                action={"type": "tool", "tool": action.tool, "args": action.args},
                observation=observation,
                subgraph=result.subgraph if result else None,
                repairs=repairs,
                truncated=result.truncated if result else False,
            )
            steps.append(step)
            if on_step:
                on_step(step)

        if final_answer is None and error is None:
            forced = True
            final_answer = _forced_answer(steps)
        if error is not None:
            final_answer = f"(aborted: {error})"

        return AgentTrace(
            question=question,
            steps=steps,
            final_answer=final_answer,
            forced=forced,
            error=error,
            wall_time_ms=int((time.monotonic() - started) * 1000),
            system_prompt_hash=self.system_prompt_hash,
        )


def _forced_answer(steps: list[TraceStep]) -> str:
    lines = ["Step budget exhausted before a final answer; gathered observations:"]
    seen_any = False
    for step in steps:
        if step.action.get("type") == "tool" and step.observation:
            first = step.observation.splitlines()[0]
            lines.append(f"- step {step.index} ({step.action['tool']}): {first}")
            seen_any = True
    if not seen_any:
        lines.append("- no successful tool observations")
    return "\n".join(lines)
