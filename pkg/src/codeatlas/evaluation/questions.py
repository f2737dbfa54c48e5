"""Evaluation input files: categorized questions and three-point ratings.

Both are line-delimited JSON. Question categories are fixed (factual,
multi_source, predictive); each rating carries all three metrics on a
high/medium/low scale, one record per (question, annotator) pair. Human
annotation stays a file input; there is no automated judge here.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from ..errors import EvalError, IoFailure

CATEGORIES = ("factual", "multi_source", "predictive")
LEVELS = ("high", "medium", "low")
METRICS = ("accuracy", "completeness", "coherence")


@dataclass(frozen=True)
class EvalQuestion:
    id: str
    category: str
    text: str


@dataclass(frozen=True)
class Rating:
    question_id: str
    annotator: str
    accuracy: str
    completeness: str
    coherence: str

    def level(self, metric: str) -> str:
        return getattr(self, metric)


def _read_jsonl(path: str | Path) -> list[dict]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    records = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            records.append(json.loads(line))
        except json.JSONDecodeError as exc:
            raise EvalError(f"{path} line {lineno}: invalid JSON: {exc}") from exc
    return records


def load_questions(path: str | Path) -> list[EvalQuestion]:
    questions: list[EvalQuestion] = []
    seen: set[str] = set()
    for i, raw in enumerate(_read_jsonl(path), start=1):
        try:
            question = EvalQuestion(id=str(raw["id"]), category=str(raw["category"]),
                                    text=str(raw["text"]))
        except KeyError as exc:
            raise EvalError(f"question record {i} missing field {exc}") from exc
        if question.category not in CATEGORIES:
            raise EvalError(
                f"question {question.id!r}: category {question.category!r} "
                f"not in {CATEGORIES}"
            )
        if question.id in seen:
            raise EvalError(f"duplicate question id {question.id!r}")
        seen.add(question.id)
        questions.append(question)
    if not questions:
        raise EvalError(f"no questions in {path}")
    return questions


def load_ratings(path: str | Path) -> list[Rating]:
    ratings: list[Rating] = []
    seen: set[tuple[str, str]] = set()
    for i, raw in enumerate(_read_jsonl(path), start=1):
        try:
            rating = Rating(
                question_id=str(raw["question_id"]),
                annotator=str(raw.get("annotator", "annotator-1")),
                accuracy=str(raw["accuracy"]),
                completeness=str(raw["completeness"]),
                coherence=str(raw["coherence"]),
            )
        except KeyError as exc:
            raise EvalError(f"rating record {i} missing field {exc}") from exc
        for metric in METRICS:
            if rating.level(metric) not in LEVELS:
                raise EvalError(
                    f"rating for {rating.question_id!r}: {metric} level "
                    f"{rating.level(metric)!r} not in {LEVELS}"
                )
        key = (rating.question_id, rating.annotator)
        if key in seen:
            raise EvalError(f"duplicate rating for {key}")
        seen.add(key)
        ratings.append(rating)
    return ratings
