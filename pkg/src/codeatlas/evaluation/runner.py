"""One-shot evaluation runs: a fresh agent session per question.

No conversational memory crosses questions; each run sees only the system
prompt and its own question. Answers land in answers.jsonl, full traces under
traces/<question id>.jsonl. Per-question failures are recorded and the run
continues.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..agent import Agent, AgentBudget
from ..errors import IoFailure
from ..graph import CodeGraph
from ..index import SemanticIndex
from ..llm import LlmProvider
from .questions import EvalQuestion


@dataclass
class AnswerRecord:
    question_id: str
    category: str
    question: str
    answer: str
    steps: int
    forced: bool
    failed: bool = False
    error: str | None = None
    trace_file: str | None = None

    def to_dict(self) -> dict:
        return {
            "question_id": self.question_id,
            "category": self.category,
            "question": self.question,
            "answer": self.answer,
            "steps": self.steps,
            "forced": self.forced,
            "failed": self.failed,
            "error": self.error,
            "trace_file": self.trace_file,
        }


@dataclass
class EvalRunResult:
    answers: list[AnswerRecord] = field(default_factory=list)
    answers_path: str = ""

    @property
    def failed_count(self) -> int:
        return sum(1 for a in self.answers if a.failed)


def run_eval(
    questions: list[EvalQuestion],
    graph: CodeGraph,
    index: SemanticIndex,
    provider: LlmProvider,
    out_dir: str | Path,
    budget: AgentBudget | None = None,
) -> EvalRunResult:
    out = Path(out_dir)
    traces_dir = out / "traces"
    try:
        traces_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IoFailure(f"cannot create output dir {out}: {exc}") from exc

    result = EvalRunResult()
    for question in questions:
        agent = Agent(graph, index, provider, budget=budget)  # fresh session
        try:
            trace = agent.run(question.text)
        except Exception as exc:  # record and continue
            result.answers.append(AnswerRecord(
                question_id=question.id, category=question.category,
                question=question.text, answer="", steps=0, forced=False,
                failed=True, error=str(exc),
            ))
            continue
        trace_file = traces_dir / f"{question.id}.jsonl"
        trace.save(trace_file)
        result.answers.append(AnswerRecord(
            question_id=question.id, category=question.category,
            question=question.text, answer=trace.final_answer,
            steps=trace.step_count, forced=trace.forced,
            failed=trace.error is not None, error=trace.error,
            # out-dir-relative so reruns into other directories compare byte-equal
            trace_file=f"traces/{question.id}.jsonl",
        ))

    answers_path = out / "answers.jsonl"
    try:
        with open(answers_path, "w", encoding="utf-8") as fh:
            for answer in result.answers:
                fh.write(json.dumps(answer.to_dict(), sort_keys=True) + "\n")
    except OSError as exc:
        raise IoFailure(f"cannot write {answers_path}: {exc}") from exc
    result.answers_path = str(answers_path)
    return result


def load_answers(path: str | Path) -> dict[str, dict]:
    """answers.jsonl keyed by question id."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    answers = {}
    for line in text.splitlines():
        if line.strip():
            record = json.loads(line)
            answers[record["question_id"]] = record
    return answers
