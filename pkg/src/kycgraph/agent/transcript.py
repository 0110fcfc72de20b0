"""Investigation records: answer documents, tool steps, full transcripts.

A transcript is fully serializable and replayable: it stores the question,
every tool call with its params and response, the three-section answer,
and an evidence index mapping each supporting detail to the steps that
ground it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

_DETAIL_PREFIX = "- "


@dataclass
class AnswerDocument:
    direct_answer: str
    supporting_details: list = field(default_factory=list)
    key_findings: list = field(default_factory=list)

    def render(self) -> str:
        lines = [f"Direct Answer: {self.direct_answer}", "Supporting Details:"]
        lines += [f"{_DETAIL_PREFIX}{d}" for d in self.supporting_details]
        lines.append("Key Findings:")
        lines += [f"{_DETAIL_PREFIX}{f}" for f in self.key_findings]
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {"direct_answer": self.direct_answer,
                "supporting_details": list(self.supporting_details),
                "key_findings": list(self.key_findings)}

    @classmethod
    def from_dict(cls, data: dict) -> "AnswerDocument":
        return cls(data["direct_answer"], list(data["supporting_details"]),
                   list(data["key_findings"]))


def parse_answer(text: str) -> AnswerDocument | None:
    """Parse the canonical three-section rendering; None when the text does
    not carry all three section headers."""
    direct, details, findings = None, [], []
    section = None
    for raw in text.splitlines():
        line = raw.strip()
        if line.startswith("Direct Answer:"):
            direct = line[len("Direct Answer:"):].strip()
            section = "direct"
        elif line.startswith("Supporting Details:"):
            section = "details"
        elif line.startswith("Key Findings:"):
            section = "findings"
        elif line.startswith(_DETAIL_PREFIX) and section == "details":
            details.append(line[len(_DETAIL_PREFIX):])
        elif line.startswith(_DETAIL_PREFIX) and section == "findings":
            findings.append(line[len(_DETAIL_PREFIX):])
        elif section == "direct" and line and direct is not None and not direct:
            direct = line
    if direct is None or section is None:
        return None
    return AnswerDocument(direct, details, findings)


def coerce_answer(text: str) -> AnswerDocument:
    """Always produce a three-section document; free text that does not
    follow the format becomes the direct answer with a flagged finding."""
    parsed = parse_answer(text)
    if parsed is not None and parsed.direct_answer:
        return parsed
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    return AnswerDocument(
        direct_answer=lines[0] if lines else "",
        supporting_details=lines[1:],
        key_findings=["unstructured model output"])


@dataclass
class StepRecord:
    index: int
    tool: str
    params: dict
    response: dict  # full envelope response (result or error)
    elapsed_ms: float

    @property
    def payload(self):
        result = self.response.get("result")
        if isinstance(result, dict):
            return result.get("payload")
        return None

    @property
    def failed(self) -> bool:
        return "error" in self.response

    def to_dict(self) -> dict:
        return {"index": self.index, "tool": self.tool, "params": self.params,
                "response": self.response, "elapsed_ms": self.elapsed_ms}


@dataclass
class AgentTranscript:
    question: str
    steps: list = field(default_factory=list)  # of StepRecord
    answer: AnswerDocument | None = None
    evidence_index: dict = field(default_factory=dict)  # detail idx -> [steps]
    backend: str = "scripted"
    budget: int = 8
    limitation: str | None = None  # set when budget/transport cut things short

    def add_step(self, tool: str, params: dict, response: dict,
                 elapsed_ms: float) -> StepRecord:
        step = StepRecord(len(self.steps), tool, params, response, elapsed_ms)
        self.steps.append(step)
        return step

    def retrieved_record_ids(self) -> list:
        """Union of node business IDs touched by every tool response;
        the graph-side 'retrieved context' for retrieval scoring."""
        ids: set = set()
        for step in self.steps:
            result = step.response.get("result")
            if isinstance(result, dict):
                ids.update(r for r in result.get("record_ids", ())
                           if isinstance(r, str))
            ids.update(_collect_touched(step.payload))
        return sorted(ids)

    def to_dict(self) -> dict:
        return {
            "question": self.question,
            "backend": self.backend,
            "budget": self.budget,
            "steps": [s.to_dict() for s in self.steps],
            "answer": self.answer.to_dict() if self.answer else None,
            "evidence_index": {str(k): v for k, v in
                               sorted(self.evidence_index.items())},
            "limitation": self.limitation,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict) -> "AgentTranscript":
        t = cls(question=data["question"], backend=data.get("backend", ""),
                budget=data.get("budget", 8),
                limitation=data.get("limitation"))
        for s in data["steps"]:
            t.steps.append(StepRecord(s["index"], s["tool"], s["params"],
                                      s["response"], s["elapsed_ms"]))
        if data.get("answer"):
            t.answer = AnswerDocument.from_dict(data["answer"])
        t.evidence_index = {int(k): list(v) for k, v in
                            data.get("evidence_index", {}).items()}
        return t


def _collect_touched(payload) -> set:
    """Record IDs named by a tool payload: explicit touched_ids lists plus
    any nested result tables."""
    found: set = set()
    if isinstance(payload, dict):
        touched = payload.get("touched_ids")
        if isinstance(touched, list):
            found.update(t for t in touched if isinstance(t, str))
        for value in payload.values():
            found |= _collect_touched(value)
    elif isinstance(payload, list):
        for item in payload:
            found |= _collect_touched(item)
    return found
