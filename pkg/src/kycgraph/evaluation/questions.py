"""Benchmark question generation and the structured rubric judge.

Level quotas follow the fixed mix 20/25/25/15/15 percent.  Every question
is instantiated from a template with entities sampled from the live graph,
its ground truth derived by executing the stored queries, and degenerate
draws (all-empty answers) rejected, so the full suite closes: re-running
the stored queries reproduces the stored answer and relevant-record set.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from ..cypher import ast as qast
from ..cypher.parser import parse
from ..errors import KycGraphError
from ..templates import BY_ID, BY_LEVEL, LINKING_EDGES

LEVEL_MIX = {1: 0.20, 2: 0.25, 3: 0.25, 4: 0.15, 5: 0.15}


@dataclass
class EvalQuestion:
    qid: str
    level: int
    qtype: str
    template_id: str
    question: str
    slots: dict
    queries: list  # of {"text": str, "params": dict}
    answer_text: str
    relevant_ids: list

    def to_dict(self) -> dict:
        return {"qid": self.qid, "level": self.level, "qtype": self.qtype,
                "template_id": self.template_id, "question": self.question,
                "slots": self.slots, "queries": self.queries,
                "answer_text": self.answer_text,
                "relevant_ids": self.relevant_ids}

    @classmethod
    def from_dict(cls, data: dict) -> "EvalQuestion":
        return cls(**data)


def save_questions(questions: list, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for q in questions:
            fh.write(json.dumps(q.to_dict(), sort_keys=True))
            fh.write("\n")


def load_questions(path: str) -> list:
    questions = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                questions.append(EvalQuestion.from_dict(json.loads(line)))
    return questions


def level_counts(n: int) -> dict:
    counts = {level: int(round(share * n)) for level, share in
              LEVEL_MIX.items()}
    counts[1] += n - sum(counts.values())  # absorb rounding drift
    return counts


def _degenerate(tables: list) -> bool:
    """True when every cell is empty-ish (no rows, zeros, empty lists):
    such a draw has no usable ground truth."""
    saw_value = False
    for table in tables:
        for row in table["rows"]:
            for cell in row:
                if isinstance(cell, bool):
                    saw_value = saw_value or cell
                elif isinstance(cell, (int, float)):
                    saw_value = saw_value or cell != 0
                elif cell not in (None, "", []):
                    saw_value = True
    return not saw_value


def _execute_template(template, slots, kit):
    queries = template.build_queries(slots, kit)
    tables = []
    relevant: set = set()
    for text, params in queries:
        table = kit.execute_cypher(text, params=params)
        tables.append(table)
        relevant.update(table["touched_ids"])
    return queries, tables, sorted(relevant)


def generate_questions(graph, manifest, seed: int, n: int, kit):
    """Instantiate the benchmark; returns (questions, warnings)."""
    rng = random.Random(seed)
    warnings: list[str] = []
    questions: list[EvalQuestion] = []
    if n == 0:
        return questions, warnings
    quotas = level_counts(n)
    used_slots: set = set()
    qid_counter = 0
    for level in sorted(quotas):
        quota = quotas[level]
        if quota == 0:
            continue
        pools = {}
        for template in BY_LEVEL[level]:
            pool = template.sample_pool(graph, manifest, kit, rng)
            rng.shuffle(pool)
            if pool:
                pools[template.template_id] = pool
            else:
                warnings.append(
                    f"template {template.template_id} skipped: no candidate "
                    f"entities in this graph")
        produced = 0
        rotation = sorted(pools)
        idx = 0
        attempts_left = quota * 50
        while produced < quota:
            if not rotation or attempts_left <= 0:
                raise KycGraphError(
                    f"cannot fill level {level}: {produced}/{quota} questions "
                    f"generated before candidates ran out")
            attempts_left -= 1
            template_id = rotation[idx % len(rotation)]
            idx += 1
            pool = pools[template_id]
            if not pool:
                rotation.remove(template_id)
                warnings.append(
                    f"template {template_id} exhausted after "
                    f"{produced} questions at level {level}")
                continue
            slots = pool.pop()
            template = BY_ID[template_id]
            slot_key = (template_id, tuple(sorted(slots.items())))
            if slot_key in used_slots:
                continue
            used_slots.add(slot_key)
            queries, tables, relevant = _execute_template(template, slots, kit)
            if _degenerate(tables):
                continue
            parts = template.build_answer(slots, tables, kit)
            qid_counter += 1
            question = EvalQuestion(
                qid=f"q{qid_counter:04d}",
                level=level,
                qtype=template.qtype,
                template_id=template_id,
                question=template.question(slots),
                slots=dict(slots),
                queries=[{"text": text, "params": params}
                         for text, params in queries],
                answer_text=parts.text,
                relevant_ids=relevant,
            )
            verdict = judge_question(question, kit)
            if not verdict["passed"]:
                raise KycGraphError(
                    f"freshly generated question {question.qid} failed the "
                    f"rubric: {verdict['flags']}")
            questions.append(question)
            produced += 1
    return questions, warnings


# -- rubric judge ---------------------------------------------------------------

def _query_shape(text: str) -> dict:
    query = parse(text)
    hops = 0
    var_length = False
    linking = False
    identity_join = False
    temporal = False
    has_aggregate = False
    for clause in query.matches:
        for pattern in clause.patterns:
            rel_types: list = []
            for rel in pattern.rels:
                hops += rel.max_len if rel.var_length else 1
                var_length = var_length or rel.var_length
                rel_types.append(set(rel.types))
                if set(rel.types) & LINKING_EDGES:
                    linking = True
            if len(rel_types) >= 2:
                flat = set().union(*rel_types)
                if flat and flat <= {"LIVES_AT", "HAS_PHONE"}:
                    identity_join = True
        if clause.where is not None:
            for value in qast.walk_values(clause.where):
                if isinstance(value, qast.PropertyAccess) and \
                        value.prop == "timestamp":
                    temporal = True
    if query.returns:
        has_aggregate = any(isinstance(item.expr, qast.Aggregate)
                            for item in query.returns.items)
    return {"hops": hops, "var_length": var_length, "linking": linking,
            "identity_join": identity_join, "temporal": temporal,
            "aggregate": has_aggregate}


def _level_aligned(level: int, shapes: list) -> bool:
    n = len(shapes)
    any_temporal = any(s["temporal"] for s in shapes)
    if level == 1:
        s = shapes[0]
        return (n == 1 and s["hops"] <= 1 and not s["aggregate"] and
                not s["temporal"] and not s["linking"])
    if level == 2:
        s = shapes[0]
        return (n == 1 and 1 <= s["hops"] <= 2 and not s["aggregate"] and
                not s["temporal"] and (s["linking"] or s["identity_join"]))
    if level == 3:
        s = shapes[0]
        return (n == 1 and not s["temporal"] and
                (s["hops"] >= 3 or s["var_length"]))
    if level == 4:
        return n <= 2 and any_temporal
    if level == 5:
        return n >= 3
    return False


def judge_question(question: EvalQuestion, kit,
                   judge_transport=None) -> dict:
    """Deterministic rubric: format, factual consistency with the graph,
    and difficulty-band alignment.  An optional LLM judge may veto on top."""
    flags = []

    format_ok = True
    if question.level not in LEVEL_MIX or not question.question.strip() or \
            not question.answer_text.strip() or not question.queries or \
            not question.relevant_ids or question.template_id not in BY_ID:
        format_ok = False
        flags.append("format: missing or empty fields")
    shapes = []
    if format_ok:
        try:
            shapes = [_query_shape(q["text"]) for q in question.queries]
        except KycGraphError as exc:
            format_ok = False
            flags.append(f"format: stored query does not parse: {exc}")

    factual_ok = False
    if format_ok:
        template = BY_ID[question.template_id]
        try:
            _queries, tables, relevant = _execute_template(
                template, question.slots, kit)
            parts = template.build_answer(question.slots, tables, kit)
            factual_ok = (parts.text == question.answer_text and
                          relevant == list(question.relevant_ids))
            if not factual_ok:
                flags.append("factual: stored answer disagrees with query "
                             "execution")
        except KycGraphError as exc:
            flags.append(f"factual: execution failed: {exc}")

    level_ok = bool(shapes) and _level_aligned(question.level, shapes)
    if shapes and not level_ok:
        flags.append(f"level: query shape outside the level-{question.level} "
                     f"band")

    passed = format_ok and factual_ok and level_ok
    if passed and judge_transport is not None:
        reply = judge_transport.send(
            [{"role": "user", "content":
              f"Does this QA pair look well formed? Reply PASS or FAIL.\n"
              f"Q: {question.question}\nA: {question.answer_text}"}], [])
        if reply.text and "FAIL" in reply.text.upper():
            passed = False
            flags.append("llm-judge veto")
    return {"passed": passed, "format_ok": format_ok,
            "factual_ok": factual_ok, "level_ok": level_ok, "flags": flags}
