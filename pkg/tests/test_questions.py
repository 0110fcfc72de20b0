"""Benchmark generation: level mix, rubric, ground-truth closure."""

import pytest

from kycgraph.errors import KycGraphError
from kycgraph.evaluation import generate_questions, judge_question
from kycgraph.evaluation.questions import (EvalQuestion, level_counts,
                                           load_questions, save_questions)


def test_level_mix_for_200():
    assert level_counts(200) == {1: 40, 2: 50, 3: 50, 4: 30, 5: 30}


def test_level_mix_sums_for_odd_sizes():
    for n in (10, 37, 101):
        assert sum(level_counts(n).values()) == n


def test_zero_questions(benchmark):
    questions, warnings = generate_questions(
        benchmark["graph"], benchmark["manifest"], seed=1, n=0,
        kit=benchmark["kit"])
    assert questions == [] and warnings == []


def test_two_hundred_questions_split_and_rubric(benchmark):
    questions = benchmark["questions"]
    assert len(questions) == 200
    by_level = {}
    for question in questions:
        by_level[question.level] = by_level.get(question.level, 0) + 1
    assert by_level == {1: 40, 2: 50, 3: 50, 4: 30, 5: 30}
    for question in questions:
        verdict = judge_question(question, benchmark["kit"])
        assert verdict["passed"], (question.qid, verdict["flags"])


def test_all_qtypes_covered(benchmark):
    qtypes = {question.qtype for question in benchmark["questions"]}
    assert qtypes == {"account", "profile", "relationship", "risk",
                      "sanction", "transaction"}


def test_ground_truth_closure(benchmark):
    """Executing the stored queries reproduces the stored answer and the
    relevant-record set, for every question."""
    kit = benchmark["kit"]
    from kycgraph.templates import BY_ID
    for question in benchmark["questions"]:
        template = BY_ID[question.template_id]
        tables = []
        relevant = set()
        for stored in question.queries:
            table = kit.execute_cypher(stored["text"], stored["params"])
            tables.append(table)
            relevant.update(table["touched_ids"])
        parts = template.build_answer(question.slots, tables, kit)
        assert parts.text == question.answer_text, question.qid
        assert sorted(relevant) == question.relevant_ids, question.qid


def test_questions_jsonl_round_trip(benchmark, tmp_path):
    path = tmp_path / "questions.jsonl"
    save_questions(benchmark["questions"], str(path))
    loaded = load_questions(str(path))
    assert [q.to_dict() for q in loaded] == \
        [q.to_dict() for q in benchmark["questions"]]


def test_generation_deterministic(benchmark):
    questions, _ = generate_questions(
        benchmark["graph"], benchmark["manifest"], seed=11, n=30,
        kit=benchmark["kit"])
    again, _ = generate_questions(
        benchmark["graph"], benchmark["manifest"], seed=11, n=30,
        kit=benchmark["kit"])
    assert [q.to_dict() for q in questions] == [q.to_dict() for q in again]


def test_judge_rejects_level_misalignment(benchmark):
    kit = benchmark["kit"]
    sample = next(q for q in benchmark["questions"] if q.level == 3)
    tampered = EvalQuestion.from_dict({**sample.to_dict(), "level": 1})
    verdict = judge_question(tampered, kit)
    assert not verdict["passed"]
    assert not verdict["level_ok"]
    assert any("level" in flag for flag in verdict["flags"])


def test_judge_rejects_tampered_answer(benchmark):
    kit = benchmark["kit"]
    sample = benchmark["questions"][0]
    tampered = EvalQuestion.from_dict(
        {**sample.to_dict(), "answer_text": "Totally fabricated claim."})
    verdict = judge_question(tampered, kit)
    assert not verdict["passed"]
    assert not verdict["factual_ok"]


def test_judge_rejects_malformed_question(benchmark):
    kit = benchmark["kit"]
    sample = benchmark["questions"][0]
    broken = EvalQuestion.from_dict({**sample.to_dict(), "queries": []})
    verdict = judge_question(broken, kit)
    assert not verdict["passed"]
    assert not verdict["format_ok"]


def test_insufficient_structure_raises(small_synth):
    """A graph with no sanction/ring structure cannot fill every level."""
    from kycgraph.store import PropertyGraph
    from kycgraph.tools import ToolKit
    from conftest import customer_merge

    g = PropertyGraph()
    g.merge_nodes([customer_merge(i) for i in range(1, 6)])
    kit = ToolKit(g, now="2025-06-30T00:00:00Z")

    class FakeManifest:
        customers = {}
        rings = []

    with pytest.raises(KycGraphError, match="cannot fill"):
        generate_questions(g, FakeManifest(), seed=1, n=40, kit=kit)
