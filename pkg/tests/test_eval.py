import json

import pytest

from codeatlas.agent import AgentTrace
from codeatlas.errors import EvalError, UnknownQuestionId
from codeatlas.evaluation import (
    EvalQuestion,
    Rating,
    build_report,
    load_answers,
    load_questions,
    load_ratings,
    round_half_up,
    run_eval,
)
from codeatlas.llm import MockProvider, RecordingProvider, ReplayProvider, ScriptedProvider

from conftest import ORDER_SYSTEM


def three_questions():
    return [
        EvalQuestion(id="q1", category="factual", text="Which projects exist?"),
        EvalQuestion(id="q2", category="multi_source", text="How do orders flow?"),
        EvalQuestion(id="q3", category="predictive", text="What breaks if OrderModel changes?"),
    ]


def rating(qid, accuracy="medium", completeness="medium", coherence="medium",
           annotator="a1"):
    return Rating(question_id=qid, annotator=annotator, accuracy=accuracy,
                  completeness=completeness, coherence=coherence)


def test_run_eval_writes_answers_and_traces(enriched_order_graph, order_index, tmp_path):
    result = run_eval(three_questions(), enriched_order_graph, order_index,
                      MockProvider(), tmp_path / "out")
    assert len(result.answers) == 3
    answers = load_answers(result.answers_path)
    assert set(answers) == {"q1", "q2", "q3"}
    for qid in answers:
        trace = AgentTrace.load(tmp_path / "out" / "traces" / f"{qid}.jsonl")
        assert trace.final_answer == answers[qid]["answer"]


def test_run_eval_partial_failure_continues(enriched_order_graph, order_index, tmp_path):
    from codeatlas.errors import ProviderFailure

    class FailsOnSecond(MockProvider):
        def complete(self, prompt, tier="fast"):
            if "How do orders flow?" in prompt:
                raise ProviderFailure("q2 fails")
            return super().complete(prompt, tier)

    result = run_eval(three_questions(), enriched_order_graph, order_index,
                      FailsOnSecond(), tmp_path / "out")
    answers = load_answers(result.answers_path)
    assert answers["q2"]["failed"] is True
    assert answers["q1"]["failed"] is False and answers["q3"]["failed"] is False
    assert result.failed_count == 1


def test_run_eval_sessions_are_independent(enriched_order_graph, order_index, tmp_path):
    recorder = RecordingProvider(MockProvider())
    run_eval(three_questions(), enriched_order_graph, order_index, recorder,
             tmp_path / "out")
    first_prompts = {}
    for record in recorder.transcript.records:
        if record.tier == "deep" and "Question: " in record.prompt \
                and "Observation" not in record.prompt:
            question = record.prompt.split("Question: ", 1)[1].splitlines()[0]
            first_prompts[question] = record.prompt
    assert len(first_prompts) == 3
    texts = [q.text for q in three_questions()]
    for question, prompt in first_prompts.items():
        for other in texts:
            if other != question:
                assert other not in prompt  # no cross-question leakage


def test_run_eval_replay_determinism(enriched_order_graph, order_index, tmp_path):
    transcript = tmp_path / "t.jsonl"
    recorder = RecordingProvider(MockProvider(), transcript)
    first = run_eval(three_questions(), enriched_order_graph, order_index,
                     recorder, tmp_path / "out1")
    replay = ReplayProvider.from_file(transcript)
    second = run_eval(three_questions(), enriched_order_graph, order_index,
                      replay, tmp_path / "out2")
    answers1 = (tmp_path / "out1" / "answers.jsonl").read_text()
    answers2 = (tmp_path / "out2" / "answers.jsonl").read_text()
    assert answers1 == answers2


def test_report_table_2_accuracy_row():
    # 16 high / 7 medium / 0 low over 23 rated responses
    ratings = []
    for i in range(23):
        accuracy = "high" if i < 16 else "medium"
        ratings.append(rating(f"q{i}", accuracy=accuracy))
    answers = {f"q{i}": {"category": "factual"} for i in range(23)}
    report = build_report(ratings, answers)
    row = report.rows["accuracy"]
    assert row.as_tuple() == (69.6, 30.4, 0.0)
    # +/- 0.1 comparisons with one-decimal slack for float representation
    assert round(abs(row.high - 69.5), 6) <= 0.1
    assert round(abs(row.medium - 30.5), 6) <= 0.1
    assert round(abs(row.low - 0.0), 6) <= 0.1
    for metric_row in report.rows.values():
        assert round(abs(sum(metric_row.as_tuple()) - 100.0), 6) <= 0.1


def test_report_degenerate_all_medium():
    ratings = [rating(f"q{i}") for i in range(23)]
    answers = {f"q{i}": {} for i in range(23)}
    report = build_report(ratings, answers)
    assert report.rows["accuracy"].as_tuple() == (0.0, 100.0, 0.0)


def test_report_unknown_question_id():
    with pytest.raises(UnknownQuestionId):
        build_report([rating("ghost")], {"q1": {}})


def test_report_empty_ratings():
    with pytest.raises(EvalError, match="no ratings"):
        build_report([], {"q1": {}})


def test_report_unrated_warning():
    report = build_report([rating("q1")], {"q1": {}, "q2": {}})
    assert len(report.unrated_warnings) == 1
    assert "q2" in report.unrated_warnings[0]


def test_report_by_category():
    ratings = [rating("q1", accuracy="high"), rating("q2", accuracy="low")]
    answers = {"q1": {"category": "factual"}, "q2": {"category": "predictive"}}
    report = build_report(ratings, answers, by_category=True)
    assert report.by_category["factual"]["accuracy"].high == 100.0
    assert report.by_category["predictive"]["accuracy"].low == 100.0


def test_report_render_text():
    report = build_report([rating("q1")], {"q1": {}})
    text = report.render_text()
    assert "Accuracy" in text and "100.0" in text


def test_round_half_up():
    assert round_half_up(69.56521739) == 69.6
    assert round_half_up(30.43478260) == 30.4
    assert round_half_up(12.25) == 12.3  # plain round() would give 12.2
    assert round_half_up(0.0) == 0.0


def test_load_fixture_questions():
    questions = load_questions(ORDER_SYSTEM / "questions.jsonl")
    assert len(questions) == 30
    categories = {}
    for question in questions:
        categories[question.category] = categories.get(question.category, 0) + 1
    assert categories == {"factual": 10, "multi_source": 10, "predictive": 10}


def test_load_ratings_validation(tmp_path):
    path = tmp_path / "r.jsonl"
    path.write_text(json.dumps({
        "question_id": "q1", "annotator": "a", "accuracy": "high",
        "completeness": "sometimes", "coherence": "low",
    }) + "\n")
    with pytest.raises(EvalError):
        load_ratings(path)
    path.write_text(
        json.dumps({"question_id": "q1", "annotator": "a", "accuracy": "high",
                    "completeness": "high", "coherence": "low"}) + "\n"
        + json.dumps({"question_id": "q1", "annotator": "a", "accuracy": "low",
                      "completeness": "low", "coherence": "low"}) + "\n"
    )
    with pytest.raises(EvalError, match="duplicate"):
        load_ratings(path)


def test_question_category_validation(tmp_path):
    path = tmp_path / "q.jsonl"
    path.write_text(json.dumps({"id": "q1", "category": "rhetorical", "text": "?"}) + "\n")
    with pytest.raises(EvalError):
        load_questions(path)
