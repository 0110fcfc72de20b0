"""Query plan description: a faithful, stable account of what execute does.

The executor picks a start point per pattern (bound variable, then index
seek, then scan) and expands outward; the plan mirrors that choice rule
exactly, so EXPLAIN output can be trusted when auditing tool behaviour.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from . import ast
from .executor import Registry, seekable_id
from .parser import parse
from .. import schema


@dataclass(frozen=True)
class PlanStep:
    op: str
    detail: str
    depth: int = 0

    def to_dict(self) -> dict:
        return {"op": self.op, "detail": self.detail}


def _anchor_index(pattern: ast.PathPattern, slots, bound_slots: set) -> int:
    for i in range(0, len(pattern.elements), 2):
        if slots[i] in bound_slots:
            return i
    for i in range(0, len(pattern.elements), 2):
        if seekable_id(pattern.elements[i]) is not None:
            return i
    return 0


def _describe_node(node: ast.NodePattern) -> str:
    return node.render()


def _rel_detail(rel: ast.RelPattern, src: ast.NodePattern,
                dst: ast.NodePattern, reverse: bool) -> str:
    direction = rel.direction
    if reverse and direction in ("out", "in"):
        direction = "in" if direction == "out" else "out"
    arrow = {"out": "-->", "in": "<--", "any": "--"}[direction]
    types = "|".join(rel.types) if rel.types else "*any*"
    src_name = src.variable or "(anon)"
    dst_name = dst.variable or "(anon)"
    text = f"{src_name} {arrow} {dst_name} [{types}]"
    if rel.var_length:
        text += f" length {rel.min_len}..{rel.max_len}"
    return text


def plan_steps(query: ast.Query) -> list[PlanStep]:
    steps: list[PlanStep] = []
    if query.is_write:
        for write in query.writes:
            steps.append(PlanStep("Write", f"{write.kind} {write.pattern.render()}"))
        return steps

    registry = Registry.build(query.matches)
    bound_slots: set[int] = set()
    for clause in query.matches:
        for pattern in clause.patterns:
            slots = registry.pattern_slots[id(pattern)]
            elements = pattern.elements
            anchor = _anchor_index(pattern, slots, bound_slots)
            anchor_pat = elements[anchor]
            if slots[anchor] in bound_slots:
                steps.append(PlanStep("BoundStart",
                                      f"reuse {anchor_pat.variable}"))
            elif seekable_id(anchor_pat) is not None:
                id_prop = schema.ID_PROPERTY[anchor_pat.label]
                steps.append(PlanStep(
                    "NodeIndexSeek",
                    f"{anchor_pat.variable or '(anon)'}:{anchor_pat.label} "
                    f"by {id_prop}"))
            elif anchor_pat.label is not None:
                steps.append(PlanStep(
                    "NodeByLabelScan",
                    f"{anchor_pat.variable or '(anon)'}:{anchor_pat.label}"))
            else:
                steps.append(PlanStep(
                    "AllNodesScan", anchor_pat.variable or "(anon)"))
            # rightward expansion, then leftward, mirroring the executor
            for i in range(anchor, len(elements) - 1, 2):
                rel, dst = elements[i + 1], elements[i + 2]
                op = "VarLengthExpand" if rel.var_length else "Expand"
                steps.append(PlanStep(
                    op, _rel_detail(rel, elements[i], dst, reverse=False), 1))
            for i in range(anchor, 1, -2):
                rel, dst = elements[i - 1], elements[i - 2]
                op = "VarLengthExpand" if rel.var_length else "Expand"
                steps.append(PlanStep(
                    op, _rel_detail(rel, elements[i], dst, reverse=True), 1))
            for slot in slots:
                bound_slots.add(slot)
        if clause.where is not None:
            steps.append(PlanStep("Filter", clause.where.render()))

    returns = query.returns
    if any(isinstance(item.expr, ast.Aggregate) for item in returns.items):
        steps.append(PlanStep(
            "Aggregate", ", ".join(item.render() for item in returns.items)))
    else:
        steps.append(PlanStep(
            "Project", ", ".join(item.render() for item in returns.items)))
    if returns.distinct:
        steps.append(PlanStep("Distinct", ""))
    if returns.order_by:
        steps.append(PlanStep(
            "Sort", ", ".join(o.render() for o in returns.order_by)))
    if returns.skip is not None:
        steps.append(PlanStep("Skip", str(returns.skip)))
    if returns.limit is not None:
        steps.append(PlanStep("Limit", str(returns.limit)))
    return steps


def explain(query) -> dict:
    """Structured plan plus an indented text rendering."""
    if isinstance(query, str):
        query = parse(query)
    steps = plan_steps(query)
    lines = []
    for step in steps:
        indent = "  " * step.depth
        detail = f" {step.detail}" if step.detail else ""
        lines.append(f"{indent}{step.op}{detail}")
    return {"steps": [s.to_dict() for s in steps], "text": "\n".join(lines)}


def explain_json(query) -> str:
    return json.dumps(explain(query), sort_keys=True, separators=(",", ":"))
