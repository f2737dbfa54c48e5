"""One-shot evaluation harness: question runs, ratings, percentage reports."""

from .questions import (
    CATEGORIES,
    LEVELS,
    METRICS,
    EvalQuestion,
    Rating,
    load_questions,
    load_ratings,
)
from .report import EvalReport, MetricRow, build_report, round_half_up
from .runner import AnswerRecord, EvalRunResult, load_answers, run_eval

__all__ = [
    "CATEGORIES",
    "LEVELS",
    "METRICS",
    "AnswerRecord",
    "EvalQuestion",
    "EvalReport",
    "EvalRunResult",
    "MetricRow",
    "Rating",
    "build_report",
    "load_answers",
    "load_questions",
    "load_ratings",
    "round_half_up",
    "run_eval",
]
