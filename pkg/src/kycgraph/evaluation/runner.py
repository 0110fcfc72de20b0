"""Run a system over the benchmark and assemble metric reports.

A MetricReport is regenerable bit-exactly from the stored per-question
records (the runner writes transcripts alongside), and carries the
snapshot digest so reports from different snapshots cannot be compared by
accident.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .metrics import score_answer
from .metrics import score_retrieval
from ..agent.loop import investigate
from ..agent.transports import ScriptedTransport

METRICS = ("faithfulness", "answer_relevancy", "context_precision",
           "context_recall")


@dataclass
class MetricReport:
    system: str  # graph-rag | vector-rag
    snapshot_digest: str
    method: str  # deterministic | llm-judge
    per_question: list = field(default_factory=list)

    def aggregate(self, key: str) -> dict:
        """Mean of each metric grouped by 'level' or 'qtype'."""
        groups: dict = {}
        for record in self.per_question:
            groups.setdefault(record[key], []).append(record)
        out = {}
        for group, records in sorted(groups.items()):
            out[str(group)] = {
                "count": len(records),
                **{metric: sum(r[metric] for r in records) / len(records)
                   for metric in METRICS},
            }
        return out

    def overall(self) -> dict:
        records = self.per_question
        if not records:
            return {"count": 0, **{m: 0.0 for m in METRICS}}
        return {"count": len(records),
                **{m: sum(r[m] for r in records) / len(records)
                   for m in METRICS}}

    def mean(self, metric: str, level: int | None = None) -> float:
        records = [r for r in self.per_question
                   if level is None or r["level"] == level]
        if not records:
            return 0.0
        return sum(r[metric] for r in records) / len(records)

    def to_dict(self) -> dict:
        return {"system": self.system,
                "snapshot_digest": self.snapshot_digest,
                "method": self.method,
                "per_question": self.per_question,
                "by_level": self.aggregate("level"),
                "by_qtype": self.aggregate("qtype"),
                "overall": self.overall()}

    @classmethod
    def from_records(cls, system: str, snapshot_digest: str,
                     records: list, method: str = "deterministic"
                     ) -> "MetricReport":
        methods = {r.get("method", method) for r in records}
        if len(methods) > 1:
            raise ValueError(f"mixed scoring methods in one report: {methods}")
        return cls(system=system, snapshot_digest=snapshot_digest,
                   method=method, per_question=sorted(
                       records, key=lambda r: r["qid"]))


def run_graph_system(questions: list, client, *, transport=None, budget: int = 8,
                     transcript_sink=None) -> list:
    """Investigate every question through the agent; score retrieval from
    the transcript's touched records and answers against ground truth."""
    transport = transport or ScriptedTransport()
    records = []
    for question in questions:
        transcript = investigate(question.question, transport, client,
                                 budget=budget)
        retrieved = set(transcript.retrieved_record_ids())
        precision, recall = score_retrieval(retrieved,
                                            set(question.relevant_ids))
        faithfulness, relevancy, method = score_answer(
            transcript.answer, transcript, question.answer_text)
        records.append({
            "qid": question.qid, "level": question.level,
            "qtype": question.qtype,
            "faithfulness": faithfulness,
            "answer_relevancy": relevancy,
            "context_precision": precision,
            "context_recall": recall,
            "method": method,
            "steps": len(transcript.steps),
            "retrieved_count": len(retrieved),
        })
        if transcript_sink is not None:
            transcript_sink(question, transcript)
    return records


def save_run(path: str, questions: list, transcripts: dict) -> None:
    """Persist per-question transcripts (JSONL) for bit-exact regeneration."""
    with open(path, "w", encoding="utf-8") as fh:
        for question in questions:
            transcript = transcripts.get(question.qid)
            fh.write(json.dumps(
                {"qid": question.qid,
                 "transcript": transcript.to_dict() if transcript else None},
                sort_keys=True))
            fh.write("\n")


def load_run(path: str) -> dict:
    """qid -> AgentTranscript from a stored run."""
    from ..agent.transcript import AgentTranscript

    transcripts = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            entry = json.loads(line)
            if entry.get("transcript"):
                transcripts[entry["qid"]] = AgentTranscript.from_dict(
                    entry["transcript"])
    return transcripts


def rescore_transcripts(questions: list, transcripts: dict) -> list:
    """Recompute every per-question record from stored transcripts; used to
    regenerate reports bit-exactly without re-running investigations."""
    records = []
    for question in questions:
        transcript = transcripts.get(question.qid)
        if transcript is None:
            records.append({
                "qid": question.qid, "level": question.level,
                "qtype": question.qtype, "faithfulness": 0.0,
                "answer_relevancy": 0.0, "context_precision": 0.0,
                "context_recall": 0.0, "method": "deterministic",
                "steps": 0, "retrieved_count": 0, "missing_transcript": True})
            continue
        retrieved = set(transcript.retrieved_record_ids())
        precision, recall = score_retrieval(retrieved,
                                            set(question.relevant_ids))
        faithfulness, relevancy, method = score_answer(
            transcript.answer, transcript, question.answer_text)
        records.append({
            "qid": question.qid, "level": question.level,
            "qtype": question.qtype,
            "faithfulness": faithfulness,
            "answer_relevancy": relevancy,
            "context_precision": precision,
            "context_recall": recall,
            "method": method,
            "steps": len(transcript.steps),
            "retrieved_count": len(retrieved),
        })
    return records


def build_report(system: str, snapshot_digest: str, records: list
                 ) -> MetricReport:
    return MetricReport.from_records(system, snapshot_digest, records)
