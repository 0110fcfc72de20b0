"""Lexical grounding audit: every cited value must appear in tool evidence.

Claims are the supporting-detail lines of the answer, each of the form
"label = value[, value...]".  An atom is grounded when it occurs literally
(case-insensitive) in a step's serialized params or payload, or matches a
number in them; "none" is an explicit statement of absence and counts as
grounded.  This is deliberately lexical, not semantic: cheap, deterministic
and sufficient for the deterministic faithfulness metric.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from .transcript import AgentTranscript

_NUMBER_RE = re.compile(r"-?\d+(?:\.\d+)?")
_ABSENT = {"none", "", "n/a"}


@dataclass
class AuditReport:
    claims_total: int
    claims_grounded: int
    ungrounded: list

    @property
    def grounded_fraction(self) -> float:
        if self.claims_total == 0:
            return 1.0
        return self.claims_grounded / self.claims_total

    def to_dict(self) -> dict:
        return {"claims_total": self.claims_total,
                "claims_grounded": self.claims_grounded,
                "grounded_fraction": self.grounded_fraction,
                "ungrounded": list(self.ungrounded)}


def split_claims(detail: str) -> list:
    """Atoms of one supporting-detail line: comma-separated values, with
    "label = value" chunks reduced to their value."""
    atoms = []
    for chunk in detail.split(", "):
        if " = " in chunk:
            _, _, chunk = chunk.partition(" = ")
        atom = chunk.strip()
        if atom:
            atoms.append(atom)
    return atoms


class _StepEvidence:
    def __init__(self, step):
        blob = json.dumps({"params": step.params,
                           "result": step.response.get("result")},
                          sort_keys=True)
        self.text = blob.casefold()
        self.numbers = [float(m) for m in _NUMBER_RE.findall(blob)]

    def grounds(self, atom: str) -> bool:
        normalized = atom.casefold()
        if normalized in _ABSENT:
            return True
        try:
            value = float(atom)
        except ValueError:
            return normalized in self.text
        # a cited number may be the payload value rounded to its displayed
        # precision (e.g. "12.35" citing 12.3500000004)
        _, _, fraction = atom.partition(".")
        decimals = len(fraction)
        return any(value == n or round(n, decimals) == value
                   for n in self.numbers)


def audit_transcript(transcript: AgentTranscript) -> AuditReport:
    """Check every supporting-detail atom against the step evidence and
    rebuild the transcript's evidence index as a side effect."""
    evidence = [_StepEvidence(step) for step in transcript.steps]
    total = grounded = 0
    ungrounded = []
    index: dict = {}
    details = transcript.answer.supporting_details if transcript.answer else []
    for i, detail in enumerate(details):
        atoms = split_claims(detail)
        step_hits: set = set()
        for atom in atoms:
            total += 1
            hits = [s for s, ev in enumerate(evidence) if ev.grounds(atom)]
            if hits:
                grounded += 1
                step_hits.update(hits)
            else:
                ungrounded.append({"detail": detail, "atom": atom})
        if not atoms:
            # a detail with no extractable value is itself a claim
            total += 1
            ungrounded.append({"detail": detail, "atom": detail})
        index[i] = sorted(step_hits)
    transcript.evidence_index = index
    return AuditReport(total, grounded, ungrounded)
