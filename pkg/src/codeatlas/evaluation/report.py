"""Percentage tables over human ratings.

For each metric the report gives the percentage of responses rated high,
medium, and low, to one decimal (explicit half-up rounding so row sums stay
at 100.0 +/- 0.1). Ratings referencing unanswered questions are an error;
answered-but-unrated questions produce a warning list.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..errors import EvalError, UnknownQuestionId
from .questions import LEVELS, METRICS, Rating


def round_half_up(value: float, digits: int = 1) -> float:
    scale = 10 ** digits
    return math.floor(value * scale + 0.5) / scale


@dataclass
class MetricRow:
    high: float
    medium: float
    low: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.high, self.medium, self.low)


@dataclass
class EvalReport:
    rows: dict[str, MetricRow]
    rated: int
    unrated_warnings: list[str] = field(default_factory=list)
    by_category: dict[str, dict[str, MetricRow]] | None = None

    def to_dict(self) -> dict:
        data = {
            "rated": self.rated,
            "metrics": {
                metric: {"high": row.high, "medium": row.medium, "low": row.low}
                for metric, row in self.rows.items()
            },
            "unrated_warnings": list(self.unrated_warnings),
        }
        if self.by_category is not None:
            data["by_category"] = {
                category: {
                    metric: {"high": row.high, "medium": row.medium, "low": row.low}
                    for metric, row in rows.items()
                }
                for category, rows in self.by_category.items()
            }
        return data

    def render_text(self) -> str:
        lines = [
            f"rated responses: {self.rated}",
            f"{'Metric':<14}{'High (%)':>10}{'Medium (%)':>12}{'Low (%)':>10}",
        ]
        for metric in METRICS:
            row = self.rows[metric]
            lines.append(
                f"{metric.capitalize():<14}{row.high:>10.1f}{row.medium:>12.1f}{row.low:>10.1f}"
            )
        if self.by_category:
            for category in sorted(self.by_category):
                lines.append(f"-- {category}")
                for metric in METRICS:
                    row = self.by_category[category][metric]
                    lines.append(
                        f"{metric.capitalize():<14}{row.high:>10.1f}"
                        f"{row.medium:>12.1f}{row.low:>10.1f}"
                    )
        if self.unrated_warnings:
            lines.append(f"warning: {len(self.unrated_warnings)} answered questions unrated")
        return "\n".join(lines)


def _rows_for(ratings: list[Rating]) -> dict[str, MetricRow]:
    n = len(ratings)
    rows = {}
    for metric in METRICS:
        counts = {level: 0 for level in LEVELS}
        for rating in ratings:
            counts[rating.level(metric)] += 1
        rows[metric] = MetricRow(
            high=round_half_up(100.0 * counts["high"] / n),
            medium=round_half_up(100.0 * counts["medium"] / n),
            low=round_half_up(100.0 * counts["low"] / n),
        )
    return rows


def build_report(
    ratings: list[Rating],
    answers: dict[str, dict],
    by_category: bool = False,
) -> EvalReport:
    if not ratings:
        raise EvalError("no ratings")
    for rating in ratings:
        if rating.question_id not in answers:
            raise UnknownQuestionId(
                f"rating references question {rating.question_id!r} with no answer"
            )
    rated_ids = {r.question_id for r in ratings}
    unrated = [qid for qid in sorted(answers) if qid not in rated_ids]

    report = EvalReport(
        rows=_rows_for(ratings),
        rated=len(ratings),
        unrated_warnings=[f"question {qid!r} has an answer but no rating" for qid in unrated],
    )
    if by_category:
        groups: dict[str, list[Rating]] = {}
        for rating in ratings:
            category = answers[rating.question_id].get("category", "unknown")
            groups.setdefault(category, []).append(rating)
        report.by_category = {c: _rows_for(rs) for c, rs in groups.items()}
    return report
