"""Query executor: pattern matching, filtering, projection, aggregation.

Semantics (the shared contract the naive reference interpreter implements
independently):

- Matching is homomorphic with relationship uniqueness per MATCH clause:
  within one clause no stored edge is used twice in a single match, across
  all of the clause's comma patterns.  Separate MATCH clauses do not share
  the uniqueness set.
- Variable-length relationships enumerate all paths with pairwise-distinct
  edges whose length lies within the declared bounds; only the endpoints
  are constrained by node patterns.
- Null never equals anything: every comparison involving null is false
  (IS [NOT] NULL is the only null-aware predicate); nulls sort last.
- Aggregates ignore nulls; a global aggregate over zero rows yields one row
  with count 0, sum 0 and null avg/min/max; grouped aggregates over zero
  rows yield zero rows.  sum/avg consider numeric values only.
- Without ORDER BY, rows are emitted in canonical order: bindings sorted by
  the identity of each pattern slot in declaration order (leftmost pattern
  variable first); aggregated or distinct results sort by projected value.
- Execution is guarded: producing more than ``max_bindings`` intermediate
  bindings (variable-length expansion steps included) or returning more
  than ``max_rows`` rows raises ResourceLimitError.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import NamedTuple

from . import ast
from .parser import parse
from ..errors import (MissingParameterError, QueryExecutionError,
                      ReadOnlyError, ResourceLimitError)
from ..store import EdgeMerge, NodeMerge, PropertyGraph
from .. import schema

DEFAULT_MAX_BINDINGS = 1_000_000
DEFAULT_MAX_ROWS = 10_000


class NodeVal(NamedTuple):
    label: str
    business_id: str


class EdgeVal(NamedTuple):
    edge_type: str
    src: NodeVal
    dst: NodeVal


class PathVal(NamedTuple):
    edges: tuple  # of EdgeVal


@dataclass
class ResultTable:
    columns: list
    rows: list  # of list of JSON-ready cells
    touched_ids: list  # sorted business IDs of nodes bound in final matches

    @property
    def rows_returned(self) -> int:
        return len(self.rows)

    @property
    def nodes_touched(self) -> int:
        return len(self.touched_ids)

    def to_dict(self) -> dict:
        return {
            "columns": self.columns,
            "rows": self.rows,
            "summary": {"rows_returned": self.rows_returned,
                        "nodes_touched": self.nodes_touched},
            "touched_ids": self.touched_ids,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    def scalar(self):
        """The single cell of a 1x1 table; errors otherwise."""
        if len(self.rows) != 1 or len(self.columns) != 1:
            raise QueryExecutionError(
                f"expected a single cell, got {len(self.rows)} rows x "
                f"{len(self.columns)} columns")
        return self.rows[0][0]

    def column(self, name: str) -> list:
        idx = self.columns.index(name)
        return [row[idx] for row in self.rows]


# -- value semantics ----------------------------------------------------------

_TYPE_RANK = {"bool": 0, "num": 1, "str": 2, "list": 3, "node": 4, "edge": 5,
              "path": 6}


def _kind(value) -> str:
    if isinstance(value, bool):
        return "bool"
    if isinstance(value, (int, float)):
        return "num"
    if isinstance(value, str):
        return "str"
    if isinstance(value, list):
        return "list"
    if isinstance(value, NodeVal):
        return "node"
    if isinstance(value, EdgeVal):
        return "edge"
    if isinstance(value, PathVal):
        return "path"
    raise QueryExecutionError(f"unsupported runtime value {value!r}")


def cmp_equals(a, b) -> bool:
    """Equality under comparison semantics: null equals nothing."""
    if a is None or b is None:
        return False
    ka, kb = _kind(a), _kind(b)
    if ka != kb:
        return False
    if ka == "list":
        return len(a) == len(b) and all(cmp_equals(x, y) for x, y in zip(a, b))
    return a == b


def order_key(value):
    """Total order over non-null runtime values (ORDER BY, min/max)."""
    kind = _kind(value)
    rank = _TYPE_RANK[kind]
    if kind == "bool":
        return (rank, int(value))
    if kind == "num":
        return (rank, float(value))
    if kind == "str":
        return (rank, value)
    if kind == "list":
        return (rank, tuple((-1,) if v is None else order_key(v) for v in value))
    if kind == "node":
        return (rank, value.label, value.business_id)
    if kind == "edge":
        return (rank, value.edge_type, value.src, value.dst)
    return (rank, value.edges)


def canonical_key(value):
    """Equivalence key for DISTINCT and grouping; null groups with null."""
    if value is None:
        return ("null",)
    kind = _kind(value)
    if kind == "num":
        return ("num", float(value))
    if kind == "list":
        return ("list", tuple(canonical_key(v) for v in value))
    if kind == "node":
        return ("node", value.label, value.business_id)
    if kind == "edge":
        return ("edge", value.edge_type, value.src, value.dst)
    if kind == "path":
        return ("path", tuple(canonical_key(e) for e in value.edges))
    return (kind, value)


def binding_sort_key(bindings: tuple):
    return tuple(("zz",) if value is None else canonical_key(value)
                 for value in bindings)


class _OrderableRow:
    """Sort adapter: per-item direction with nulls always last."""

    __slots__ = ("parts",)

    def __init__(self, values, descending_flags):
        self.parts = [(value is None,
                       None if value is None else order_key(value), desc)
                      for value, desc in zip(values, descending_flags)]

    def __lt__(self, other):
        for (a_null, a_key, desc), (b_null, b_key, _) in zip(self.parts,
                                                             other.parts):
            if a_null != b_null:
                return b_null  # nulls last regardless of direction
            if a_null:
                continue
            if a_key != b_key:
                return (a_key > b_key) if desc else (a_key < b_key)
        return False


def compare(op: str, left, right) -> bool:
    """Comparison semantics shared by WHERE and property maps."""
    if op == "=":
        return cmp_equals(left, right)
    if op == "<>":
        if left is None or right is None:
            return False
        return not cmp_equals(left, right)
    if op == "IN":
        if left is None or not isinstance(right, list):
            return False
        return any(cmp_equals(left, item) for item in right)
    if op == "STARTS WITH":
        if not isinstance(left, str) or not isinstance(right, str):
            return False
        return left.startswith(right)
    if left is None or right is None:
        return False
    ka, kb = _kind(left), _kind(right)
    if ka != kb or ka not in ("num", "str", "bool"):
        return False
    if ka == "bool":
        left, right = int(left), int(right)
    if op == "<":
        return left < right
    if op == "<=":
        return left <= right
    if op == ">":
        return left > right
    if op == ">=":
        return left >= right
    raise QueryExecutionError(f"unknown comparison operator {op!r}")


def seekable_id(pattern: ast.NodePattern):
    """The ID-property value expression when the pattern allows an index seek."""
    if pattern.label is None:
        return None
    id_prop = schema.ID_PROPERTY.get(pattern.label)
    if id_prop is None:
        return None
    for name, vexpr in pattern.properties:
        if name == id_prop and isinstance(vexpr, (ast.Literal, ast.Parameter)):
            return vexpr
    return None


# -- slot registry --------------------------------------------------------------

class Registry:
    """Maps pattern variables (and hidden slots for anonymous elements) to
    row indices.

    Slots are assigned by a pre-scan of all patterns in declaration order,
    which fixes the canonical binding sort: the leftmost pattern variable
    owns the first slot.  Anonymous nodes and relationships get hidden
    positional slots so identical bindings cannot collapse.
    """

    def __init__(self):
        self.names: list[str] = []
        self.index: dict[str, int] = {}
        self.pattern_slots: dict[int, list[int]] = {}  # id(pattern) -> slots
        self._anon = 0

    def _assign(self, variable: str | None) -> int:
        if variable is None:
            variable = f" anon{self._anon}"
            self._anon += 1
        if variable in self.index:
            return self.index[variable]
        self.index[variable] = len(self.names)
        self.names.append(variable)
        return self.index[variable]

    def lookup(self, variable: str) -> int:
        if variable not in self.index:
            raise QueryExecutionError(f"unbound variable {variable!r}")
        return self.index[variable]

    @property
    def width(self) -> int:
        return len(self.names)

    @classmethod
    def build(cls, clauses) -> "Registry":
        reg = cls()
        for clause in clauses:
            for pattern in clause.patterns:
                slots = [reg._assign(element.variable)
                         for element in pattern.elements]
                reg.pattern_slots[id(pattern)] = slots
        return reg


class _Budget:
    __slots__ = ("left",)

    def __init__(self, max_bindings: int):
        self.left = max_bindings

    def spend(self, n: int = 1):
        self.left -= n
        if self.left < 0:
            raise ResourceLimitError(
                "query exceeded the intermediate binding cap; narrow the "
                "pattern or raise max_bindings")


# -- matching --------------------------------------------------------------------

class _Matcher:
    def __init__(self, graph: PropertyGraph, params: dict, registry: Registry,
                 budget: _Budget):
        self.graph = graph
        self.params = params
        self.registry = registry
        self.budget = budget

    # value evaluation over a binding row

    def eval_value(self, expr, bindings):
        if isinstance(expr, ast.Literal):
            return expr.value
        if isinstance(expr, ast.Parameter):
            return self.params[expr.name]
        if isinstance(expr, ast.Variable):
            return bindings[self.registry.lookup(expr.name)]
        if isinstance(expr, ast.PropertyAccess):
            return self.entity_prop(
                bindings[self.registry.lookup(expr.variable)], expr.prop)
        if isinstance(expr, ast.ListExpr):
            return [self.eval_value(item, bindings) for item in expr.items]
        raise QueryExecutionError(f"cannot evaluate {expr!r} as a value")

    def entity_prop(self, entity, prop: str):
        if entity is None:
            return None
        if isinstance(entity, NodeVal):
            return self.graph.node_props((entity.label, entity.business_id)).get(prop)
        if isinstance(entity, EdgeVal):
            src = (entity.src.label, entity.src.business_id)
            dst = (entity.dst.label, entity.dst.business_id)
            return self.graph._out[src][entity.edge_type][dst].get(prop)
        raise QueryExecutionError("property access on a non-entity value")

    def eval_bool(self, expr, bindings) -> bool:
        if isinstance(expr, ast.BoolOp):
            if expr.op == "AND":
                return all(self.eval_bool(t, bindings) for t in expr.terms)
            return any(self.eval_bool(t, bindings) for t in expr.terms)
        if isinstance(expr, ast.NotOp):
            return not self.eval_bool(expr.term, bindings)
        if isinstance(expr, ast.NullCheck):
            value = self.eval_value(expr.expr, bindings)
            return (value is not None) if expr.negated else (value is None)
        if isinstance(expr, ast.Comparison):
            return compare(expr.op, self.eval_value(expr.left, bindings),
                           self.eval_value(expr.right, bindings))
        raise QueryExecutionError(f"cannot evaluate {expr!r} as a predicate")

    # pattern pieces

    def node_matches(self, key, pattern: ast.NodePattern, bindings) -> bool:
        label, _ = key
        if pattern.label is not None and label != pattern.label:
            return False
        props = self.graph.node_props(key)
        for name, vexpr in pattern.properties:
            if not cmp_equals(props.get(name), self.eval_value(vexpr, bindings)):
                return False
        return True

    def rel_props_match(self, props: dict, rel: ast.RelPattern, bindings) -> bool:
        for name, vexpr in rel.properties:
            if not cmp_equals(props.get(name), self.eval_value(vexpr, bindings)):
                return False
        return True

    def anchor_candidates(self, pattern: ast.NodePattern, bindings):
        seek = seekable_id(pattern)
        if seek is not None:
            business_id = self.eval_value(seek, bindings)
            if isinstance(business_id, str) and \
                    self.graph.has_node(pattern.label, business_id):
                yield (pattern.label, business_id)
            return
        if pattern.label is not None:
            for business_id in self.graph.node_ids(pattern.label):
                yield (pattern.label, business_id)
            return
        for record in self.graph.nodes():
            yield record.key

    def expand_edges(self, key, rel: ast.RelPattern, reverse: bool):
        """Candidate (edge_key, far_key, props) for one hop; ``reverse``
        flips the arrow because expansion runs right-to-left."""
        direction = rel.direction
        if reverse and direction in ("out", "in"):
            direction = "in" if direction == "out" else "out"
        types = rel.types or None
        results = []
        if direction in ("out", "any"):
            by_type = self.graph._out.get(key, {})
            for etype in (types if types else tuple(by_type)):
                for dst, props in by_type.get(etype, {}).items():
                    results.append(((etype, key, dst), dst, props))
        if direction in ("in", "any"):
            by_type = self.graph._in.get(key, {})
            for etype in (types if types else tuple(by_type)):
                for src, props in by_type.get(etype, {}).items():
                    results.append(((etype, src, key), src, props))
        return results

    def anchor_index(self, pattern: ast.PathPattern, bound_slots: set) -> int:
        """Element index to start from: the leftmost already-bound node if
        any, else the leftmost index-seekable node, else element 0."""
        slots = self.registry.pattern_slots[id(pattern)]
        for i in range(0, len(pattern.elements), 2):
            if slots[i] in bound_slots:
                return i
        for i in range(0, len(pattern.elements), 2):
            if seekable_id(pattern.elements[i]) is not None:
                return i
        return 0

    def match_pattern(self, states, pattern: ast.PathPattern, bound_slots: set):
        """Extend (bindings list, used-edge frozenset) states over one
        comma pattern."""
        elements = pattern.elements
        slots = self.registry.pattern_slots[id(pattern)]
        anchor = self.anchor_index(pattern, bound_slots)
        self._current_anchor = anchor
        out = []
        for bindings, used in states:
            anchor_pat = elements[anchor]
            anchor_slot = slots[anchor]
            bound = bindings[anchor_slot]
            if bound is not None:
                key = (bound.label, bound.business_id)
                candidates = ((key,) if
                              self.node_matches(key, anchor_pat, bindings) else ())
            else:
                candidates = [key for key in
                              self.anchor_candidates(anchor_pat, bindings)
                              if self.node_matches(key, anchor_pat, bindings)]
            for key in candidates:
                self.budget.spend()
                work = list(bindings)
                prev = work[anchor_slot]
                work[anchor_slot] = NodeVal(*key)
                self._expand(elements, slots, anchor, +1, work, used, key, out)
                work[anchor_slot] = prev
        for i in range(0, len(elements), 2):
            bound_slots.add(slots[i])
        for i in range(1, len(elements), 2):
            bound_slots.add(slots[i])
        return out

    def _expand(self, elements, slots, i, direction, bindings, used, key, out):
        """Recursive expansion from node element i one relationship over."""
        nxt = i + 2 * direction
        if direction > 0 and nxt >= len(elements):
            # right side complete; expand left from the anchor if needed
            anchor = self._current_anchor
            if anchor == 0:
                out.append((tuple(bindings), used))
            else:
                node = bindings[slots[anchor]]
                self._expand(elements, slots, anchor, -1, bindings, used,
                             (node.label, node.business_id), out)
            return
        if direction < 0 and nxt < 0:
            out.append((tuple(bindings), used))
            return
        rel = elements[i + direction]
        rel_slot = slots[i + direction]
        node_pat = elements[nxt]
        node_slot = slots[nxt]
        reverse = direction < 0
        if rel.var_length:
            for path, far_key, path_used in self._var_paths(key, rel, reverse, used):
                if not self._endpoint_ok(bindings, node_slot, node_pat, far_key):
                    continue
                prev_rel, prev_node = bindings[rel_slot], bindings[node_slot]
                bindings[rel_slot] = PathVal(path)
                bindings[node_slot] = NodeVal(*far_key)
                self._expand(elements, slots, nxt, direction, bindings,
                             path_used, far_key, out)
                bindings[rel_slot] = prev_rel
                bindings[node_slot] = prev_node
        else:
            for edge_key, far_key, props in self.expand_edges(key, rel, reverse):
                self.budget.spend()
                if edge_key in used:
                    continue
                if not self.rel_props_match(props, rel, bindings):
                    continue
                if not self._endpoint_ok(bindings, node_slot, node_pat, far_key):
                    continue
                edge_val = EdgeVal(edge_key[0], NodeVal(*edge_key[1]),
                                   NodeVal(*edge_key[2]))
                prev_rel, prev_node = bindings[rel_slot], bindings[node_slot]
                bindings[rel_slot] = edge_val
                bindings[node_slot] = NodeVal(*far_key)
                self._expand(elements, slots, nxt, direction, bindings,
                             used | {edge_key}, far_key, out)
                bindings[rel_slot] = prev_rel
                bindings[node_slot] = prev_node

    def _endpoint_ok(self, bindings, slot, pattern, key) -> bool:
        existing = bindings[slot]
        if existing is not None and (existing.label, existing.business_id) != key:
            return False
        return self.node_matches(key, pattern, bindings)

    def _var_paths(self, start_key, rel: ast.RelPattern, reverse: bool, used):
        """All edge-distinct paths of length min..max from start_key; each
        result carries the enlarged used-edge set."""
        results = []

        def dfs(key, path, path_used):
            depth = len(path)
            if depth >= rel.min_len:
                results.append((tuple(path), key, path_used))
            if depth == rel.max_len:
                return
            for edge_key, far_key, _props in self.expand_edges(key, rel, reverse):
                self.budget.spend()
                if edge_key in path_used:
                    continue
                path.append(EdgeVal(edge_key[0], NodeVal(*edge_key[1]),
                                    NodeVal(*edge_key[2])))
                dfs(far_key, path, path_used | {edge_key})
                path.pop()

        dfs(start_key, [], used)
        return results

    def run_clause(self, rows, clause: ast.MatchClause, bound_slots: set):
        states = [(bindings, frozenset()) for bindings in rows]
        for pattern in clause.patterns:
            states = self.match_pattern(states, pattern, bound_slots)
        survivors = []
        for bindings, _used in states:
            if clause.where is None or self.eval_bool(clause.where, bindings):
                survivors.append(bindings)
        return survivors


# -- projection --------------------------------------------------------------------

def _aggregate(func: str, values: list, distinct: bool, row_count: int):
    if func == "count" and values is None:
        return row_count  # count(*)
    present = [v for v in values if v is not None]
    if distinct:
        seen = set()
        unique = []
        for v in present:
            key = canonical_key(v)
            if key not in seen:
                seen.add(key)
                unique.append(v)
        present = unique
    if func == "count":
        return len(present)
    if func == "collect":
        return list(present)
    if func in ("sum", "avg"):
        numbers = [v for v in present
                   if isinstance(v, (int, float)) and not isinstance(v, bool)]
        if func == "sum":
            if not numbers:
                return 0
            total = 0
            for v in numbers:
                total = total + v
            return total
        if not numbers:
            return None
        total = 0.0
        for v in numbers:
            total += v
        return total / len(numbers)
    if func in ("min", "max"):
        if not present:
            return None
        pick = min if func == "min" else max
        return pick(present, key=order_key)
    raise QueryExecutionError(f"unknown aggregate {func!r}")


def _project(query: ast.Query, rows, matcher: _Matcher, max_rows: int):
    returns = query.returns
    items = returns.items
    agg_positions = {i for i, item in enumerate(items)
                     if isinstance(item.expr, ast.Aggregate)}

    rows = sorted(rows, key=binding_sort_key)

    if agg_positions:
        group_positions = [i for i in range(len(items)) if i not in agg_positions]
        groups: dict = {}
        for bindings in rows:
            cells = [matcher.eval_value(items[i].expr, bindings)
                     for i in group_positions]
            key = tuple(canonical_key(c) for c in cells)
            groups.setdefault(key, (cells, []))[1].append(bindings)
        if not group_positions and not groups:
            groups[()] = ([], [])
        out_rows = []
        for key in sorted(groups):
            cells, grp_rows = groups[key]
            row = [None] * len(items)
            for pos, cell in zip(group_positions, cells):
                row[pos] = cell
            for pos in agg_positions:
                agg: ast.Aggregate = items[pos].expr
                values = None if agg.arg is None else \
                    [matcher.eval_value(agg.arg, b) for b in grp_rows]
                row[pos] = _aggregate(agg.func, values, agg.distinct,
                                      len(grp_rows))
            out_rows.append((row, None))
    else:
        out_rows = [([matcher.eval_value(item.expr, bindings) for item in items],
                     bindings) for bindings in rows]

    if returns.distinct:
        seen = set()
        deduped = []
        for row, bindings in out_rows:
            key = tuple(canonical_key(c) for c in row)
            if key not in seen:
                seen.add(key)
                deduped.append((row, bindings))
        out_rows = deduped

    if returns.order_by:
        alias_to_pos = {item.alias: i for i, item in enumerate(items) if item.alias}
        render_to_pos = {item.expr.render(): i for i, item in enumerate(items)}
        flags = [o.descending for o in returns.order_by]

        def sort_values(row, bindings):
            values = []
            for order in returns.order_by:
                expr = order.expr
                if isinstance(expr, ast.Variable) and expr.name in alias_to_pos:
                    values.append(row[alias_to_pos[expr.name]])
                elif expr.render() in render_to_pos:
                    values.append(row[render_to_pos[expr.render()]])
                else:
                    values.append(matcher.eval_value(expr, bindings))
            return values

        out_rows.sort(key=lambda pair: _OrderableRow(sort_values(*pair), flags))

    skip = returns.skip or 0
    if skip:
        out_rows = out_rows[skip:]
    if returns.limit is not None:
        out_rows = out_rows[:returns.limit]
    if len(out_rows) > max_rows:
        raise ResourceLimitError(
            f"query returned more than {max_rows} rows; add LIMIT or raise "
            f"max_rows")
    return [row for row, _ in out_rows]


def _materialize(cell, graph: PropertyGraph):
    if isinstance(cell, NodeVal):
        key = (cell.label, cell.business_id)
        return {"kind": "node", "label": cell.label, "id": cell.business_id,
                "props": dict(sorted(graph.node_props(key).items()))}
    if isinstance(cell, EdgeVal):
        src = (cell.src.label, cell.src.business_id)
        dst = (cell.dst.label, cell.dst.business_id)
        props = graph._out[src][cell.edge_type][dst]
        return {"kind": "edge", "type": cell.edge_type,
                "src": f"{cell.src.label}:{cell.src.business_id}",
                "dst": f"{cell.dst.label}:{cell.dst.business_id}",
                "props": dict(sorted(props.items()))}
    if isinstance(cell, PathVal):
        return [_materialize(edge, graph) for edge in cell.edges]
    if isinstance(cell, list):
        return [_materialize(item, graph) for item in cell]
    return cell


def _collect_touched(rows) -> list:
    touched: set[str] = set()
    for bindings in rows:
        for value in bindings:
            if isinstance(value, NodeVal):
                touched.add(value.business_id)
            elif isinstance(value, EdgeVal):
                touched.add(value.src.business_id)
                touched.add(value.dst.business_id)
            elif isinstance(value, PathVal):
                for edge in value.edges:
                    touched.add(edge.src.business_id)
                    touched.add(edge.dst.business_id)
    return sorted(touched)


# -- writes -----------------------------------------------------------------------

def _node_merge_from_pattern(pattern: ast.NodePattern, params: dict) -> NodeMerge:
    props = {}
    for name, vexpr in pattern.properties:
        if isinstance(vexpr, ast.Parameter):
            props[name] = params[vexpr.name]
        else:
            props[name] = vexpr.value
    id_prop = schema.ID_PROPERTY.get(pattern.label)
    if id_prop is None:
        raise QueryExecutionError(f"unknown label {pattern.label!r}")
    business_id = props.get(id_prop)
    if not isinstance(business_id, str):
        raise QueryExecutionError(
            f"{pattern.label} write pattern must set {id_prop} to a string")
    return NodeMerge(pattern.label, business_id, props)


def _execute_write(query: ast.Query, graph: PropertyGraph, params: dict
                   ) -> ResultTable:
    nodes_created = nodes_updated = edges_created = edges_updated = 0
    touched: set[str] = set()
    for clause in query.writes:
        pattern = clause.pattern
        merges = [_node_merge_from_pattern(p, params) for p in pattern.nodes]
        if clause.kind == "CREATE":
            if len(pattern.elements) == 1 and \
                    graph.has_node(merges[0].label, merges[0].business_id):
                raise QueryExecutionError(
                    f"CREATE: {merges[0].label} {merges[0].business_id} "
                    f"already exists")
        summary = graph.merge_nodes(merges)
        nodes_created += summary.created
        nodes_updated += summary.updated
        touched.update(m.business_id for m in merges)
        if len(pattern.elements) == 3:
            rel = pattern.rels[0]
            left, right = merges
            if rel.direction == "in":
                left, right = right, left
            props = {}
            for name, vexpr in rel.properties:
                props[name] = (params[vexpr.name]
                               if isinstance(vexpr, ast.Parameter) else vexpr.value)
            edge = EdgeMerge(rel.types[0], left.label, left.business_id,
                             right.label, right.business_id, props)
            if clause.kind == "CREATE" and graph.has_edge(
                    rel.types[0], (left.label, left.business_id),
                    (right.label, right.business_id)):
                raise QueryExecutionError(
                    f"CREATE: edge {rel.types[0]} "
                    f"{left.business_id}->{right.business_id} already exists")
            summary = graph.merge_edges([edge])
            edges_created += summary.created
            edges_updated += summary.updated
    return ResultTable(
        columns=["nodes_created", "nodes_updated", "edges_created",
                 "edges_updated"],
        rows=[[nodes_created, nodes_updated, edges_created, edges_updated]],
        touched_ids=sorted(touched))


# -- entry point --------------------------------------------------------------------

def execute(query, graph: PropertyGraph, params: dict | None = None, *,
            write: bool = False,
            max_bindings: int = DEFAULT_MAX_BINDINGS,
            max_rows: int = DEFAULT_MAX_ROWS) -> ResultTable:
    """Run a query (text or parsed AST) against the graph.

    ``write`` grants MERGE/CREATE capability; read queries never need it.
    """
    if isinstance(query, str):
        query = parse(query)
    params = dict(params or {})
    missing = sorted(query.parameters - set(params))
    if missing:
        raise MissingParameterError(missing[0])

    if query.is_write:
        if not write:
            raise ReadOnlyError("MERGE/CREATE attempted through a read-only handle")
        return _execute_write(query, graph, params)

    registry = Registry.build(query.matches)
    matcher = _Matcher(graph, params, registry, _Budget(max_bindings))

    with graph.read_view():
        rows = [tuple([None] * registry.width)]
        bound_slots: set[int] = set()
        for clause in query.matches:
            rows = matcher.run_clause(rows, clause, bound_slots)
        touched = _collect_touched(rows)
        cells = _project(query, rows, matcher, max_rows)
        columns = [item.column_name for item in query.returns.items]
        table = ResultTable(
            columns=columns,
            rows=[[_materialize(c, graph) for c in row] for row in cells],
            touched_ids=touched)
    return table
