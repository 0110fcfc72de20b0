"""Deterministic retrieval and answer metrics, all in [0, 1].

Context precision/recall are plain set overlap over record IDs, with the
edge conventions pinned: empty retrieved scores precision 1.0 against an
empty relevant set and 0.0 otherwise; recall of an empty relevant set is
1.0.  Answer scoring is token-level F1 after canonical normalization;
faithfulness is the grounding audit's fraction.  The optional LLM-judge
path scores the same inputs through a transport and is tagged so the two
methods are never mixed in one report.
"""

from __future__ import annotations

import json
import re

from ..agent.audit import audit_transcript

_TOKEN_RE = re.compile(r"[a-z0-9][a-z0-9_.\-]*")
_STOP_TOKENS = frozenset({
    "the", "a", "an", "of", "in", "on", "is", "are", "was", "were", "has",
    "have", "had", "and", "or", "to", "with", "for", "by", "at", "as", "it",
    "its", "this", "that", "be", "do", "does", "did", "from", "into", "their",
})


def score_retrieval(retrieved, relevant) -> tuple[float, float]:
    """(context_precision, context_recall) over record-ID sets."""
    retrieved = frozenset(retrieved)
    relevant = frozenset(relevant)
    hit = len(retrieved & relevant)
    if retrieved:
        precision = hit / len(retrieved)
    else:
        precision = 1.0 if not relevant else 0.0
    recall = 1.0 if not relevant else hit / len(relevant)
    return precision, recall


def _canonical_number(token: str) -> str | None:
    try:
        value = float(token)
    except ValueError:
        return None
    if value == int(value) and abs(value) < 1e15:
        return str(int(value))
    return repr(value)


def normalize_tokens(text: str) -> list:
    """Casefold, split to word tokens, canonicalize numbers, drop stop
    tokens."""
    tokens = []
    for token in _TOKEN_RE.findall(text.casefold()):
        token = token.strip(".-_")
        if not token or token in _STOP_TOKENS:
            continue
        as_number = _canonical_number(token)
        tokens.append(as_number if as_number is not None else token)
    return tokens


def token_f1(predicted: str, truth: str) -> float:
    """Multiset token F1 between two texts after normalization."""
    pred = normalize_tokens(predicted)
    true = normalize_tokens(truth)
    if not pred and not true:
        return 1.0
    if not pred or not true:
        return 0.0
    counts: dict = {}
    for token in true:
        counts[token] = counts.get(token, 0) + 1
    overlap = 0
    for token in pred:
        if counts.get(token, 0) > 0:
            counts[token] -= 1
            overlap += 1
    if overlap == 0:
        return 0.0
    precision = overlap / len(pred)
    recall = overlap / len(true)
    return 2 * precision * recall / (precision + recall)


def score_answer(answer, transcript, ground_truth_text: str
                 ) -> tuple[float, float, str]:
    """Deterministic (faithfulness, answer_relevancy, method).

    faithfulness = grounding-audit fraction over the transcript;
    answer_relevancy = token F1 of direct answer plus details against the
    ground-truth text.  A missing transcript or empty answer scores 0.
    """
    if transcript is None or answer is None or not answer.direct_answer:
        return 0.0, 0.0, "deterministic"
    faithfulness = audit_transcript(transcript).grounded_fraction
    answer_text = " ".join([answer.direct_answer] + answer.supporting_details)
    relevancy = token_f1(answer_text, ground_truth_text)
    return faithfulness, relevancy, "deterministic"


_JUDGE_PROMPT = """You are scoring a KYC investigation answer.
Question: {question}
Retrieved context: {context}
Answer: {answer}
Reference answer: {reference}
Reply with JSON only: {{"faithfulness": <0..1>, "answer_relevancy": <0..1>}}"""


def score_answer_llm(judge_transport, question: str, answer_text: str,
                     context_text: str, ground_truth_text: str
                     ) -> tuple[float, float, str]:
    """Score via an LLM judge transport; tagged 'llm-judge'."""
    prompt = _JUDGE_PROMPT.format(question=question, context=context_text,
                                  answer=answer_text,
                                  reference=ground_truth_text)
    reply = judge_transport.send([{"role": "user", "content": prompt}], [])
    text = reply.text or ""
    match = re.search(r"\{.*\}", text, re.DOTALL)
    if not match:
        return 0.0, 0.0, "llm-judge"
    try:
        data = json.loads(match.group(0))
        faith = min(1.0, max(0.0, float(data.get("faithfulness", 0.0))))
        relevancy = min(1.0, max(0.0, float(data.get("answer_relevancy", 0.0))))
    except (ValueError, TypeError):
        return 0.0, 0.0, "llm-judge"
    return faith, relevancy, "llm-judge"
