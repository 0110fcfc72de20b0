"""Benchmark generation, metric scoring, vector baseline, report emission."""

from .metrics import score_retrieval, score_answer, token_f1, normalize_tokens
from .questions import EvalQuestion, generate_questions, judge_question
from .baseline import DocCorpus, run_vector_baseline
from .runner import run_graph_system, build_report, MetricReport
from .report import emit_report

__all__ = ["score_retrieval", "score_answer", "token_f1", "normalize_tokens",
           "EvalQuestion", "generate_questions", "judge_question",
           "DocCorpus", "run_vector_baseline", "run_graph_system",
           "build_report", "MetricReport", "emit_report"]
