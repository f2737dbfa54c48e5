"""Agent trace model and lossless line-delimited JSON serialization.

A trace file is one JSON object per line: every step in order, then exactly
one final record carrying the answer and run metadata.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import IoFailure


@dataclass
class TraceStep:
    index: int
    thought: str
    action: dict  # {"type": "tool", "tool":..., "args":...} | {"type": "final"} | {"type": "failed"}
    observation: str
    subgraph: dict | None = None
    repairs: list[str] = field(default_factory=list)
    truncated: bool = False

    def to_dict(self) -> dict:
        return {
            "type": "step",
            "index": self.index,
            "thought": self.thought,
            "action": self.action,
            "observation": self.observation,
            "subgraph": self.subgraph,
            "repairs": self.repairs,
            "truncated": self.truncated,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "TraceStep":
        return cls(
            index=raw["index"], thought=raw["thought"], action=raw["action"],
            observation=raw["observation"], subgraph=raw.get("subgraph"),
            repairs=list(raw.get("repairs", [])), truncated=bool(raw.get("truncated")),
        )


@dataclass
class AgentTrace:
    question: str
    steps: list[TraceStep]
    final_answer: str
    forced: bool = False
    error: str | None = None
    wall_time_ms: int = 0
    system_prompt_hash: str = ""
    trace_id: str = ""

    @property
    def step_count(self) -> int:
        return len(self.steps)

    def final_record(self) -> dict:
        return {
            "type": "final",
            "answer": self.final_answer,
            "forced": self.forced,
            "error": self.error,
            "steps": self.step_count,
            "wall_time_ms": self.wall_time_ms,
            "system_prompt_hash": self.system_prompt_hash,
            "question": self.question,
            "trace_id": self.trace_id,
        }

    def to_dict(self) -> dict:
        return {"steps": [s.to_dict() for s in self.steps], "final": self.final_record()}

    def to_jsonl(self) -> str:
        lines = [json.dumps(s.to_dict(), sort_keys=True) for s in self.steps]
        lines.append(json.dumps(self.final_record(), sort_keys=True))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_jsonl(cls, text: str) -> "AgentTrace":
        steps: list[TraceStep] = []
        final: dict | None = None
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            raw = json.loads(line)
            if raw.get("type") == "step":
                steps.append(TraceStep.from_dict(raw))
            elif raw.get("type") == "final":
                final = raw
            else:
                raise ValueError(f"trace line {lineno}: unknown record type {raw.get('type')!r}")
        if final is None:
            raise ValueError("trace has no final record")
        return cls(
            question=final.get("question", ""), steps=steps,
            final_answer=final.get("answer", ""), forced=bool(final.get("forced")),
            error=final.get("error"), wall_time_ms=int(final.get("wall_time_ms", 0)),
            system_prompt_hash=final.get("system_prompt_hash", ""),
            trace_id=final.get("trace_id", ""),
        )

    def save(self, path: str | Path) -> None:
        try:
            Path(path).write_text(self.to_jsonl(), encoding="utf-8")
        except OSError as exc:
            raise IoFailure(f"cannot write trace {path}: {exc}") from exc

    @classmethod
    def load(cls, path: str | Path) -> "AgentTrace":
        try:
            return cls.from_jsonl(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise IoFailure(f"cannot read trace {path}: {exc}") from exc
