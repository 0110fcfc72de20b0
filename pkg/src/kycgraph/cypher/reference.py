"""Naive reference interpreter used as the differential-testing oracle.

Deliberately unoptimized and written separately from the executor: patterns
are matched strictly left to right, node candidates come from scanning the
whole node list, relationship candidates from scanning the whole edge list.
No index seeks, no anchor selection, no plan.  It implements the same
documented semantics (edge-unique matching per clause, null-free
comparisons, canonical ordering, left-to-right summation over canonically
sorted rows) so its ResultTables must be byte-identical to the executor's.

Only read queries are supported; the oracle never writes.
"""

from __future__ import annotations

from . import ast
from .executor import ResultTable  # shared output container only
from ..errors import MissingParameterError, QueryExecutionError
from .parser import parse
from ..store import PropertyGraph


class _RNode(tuple):
    """(label, id) marker distinguishable from plain tuples."""


class _REdge(tuple):
    """(type, (label,id), (label,id), props) marker; props excluded from
    identity-sensitive operations."""

    @property
    def ident(self):
        return (self[0], self[1], self[2])


class _RPath(tuple):
    """Tuple of _REdge."""


def _scan_edges(graph: PropertyGraph):
    for edge in graph.edges():
        yield _REdge((edge.edge_type, edge.src, edge.dst, edge.properties))


def _value_kind(v):
    if isinstance(v, bool):
        return "bool"
    if isinstance(v, (int, float)):
        return "num"
    if isinstance(v, str):
        return "str"
    if isinstance(v, list):
        return "list"
    if isinstance(v, _RNode):
        return "node"
    if isinstance(v, _REdge):
        return "edge"
    if isinstance(v, _RPath):
        return "path"
    raise QueryExecutionError(f"reference: bad value {v!r}")


def _eq(a, b) -> bool:
    if a is None or b is None:
        return False
    ka, kb = _value_kind(a), _value_kind(b)
    if ka != kb:
        return False
    if ka == "list":
        if len(a) != len(b):
            return False
        return all(_eq(x, y) for x, y in zip(a, b))
    if ka == "edge":
        return a.ident == b.ident
    return a == b


_RANKS = {"bool": 0, "num": 1, "str": 2, "list": 3, "node": 4, "edge": 5,
          "path": 6}


def _okey(v):
    kind = _value_kind(v)
    rank = _RANKS[kind]
    if kind == "bool":
        return (rank, int(v))
    if kind == "num":
        return (rank, float(v))
    if kind == "str":
        return (rank, v)
    if kind == "list":
        return (rank, tuple((-1,) if x is None else _okey(x) for x in v))
    if kind == "node":
        return (rank, v[0], v[1])
    if kind == "edge":
        return (rank, v[0], v[1], v[2])
    return (rank, tuple(e.ident for e in v))


def _ckey(v):
    if v is None:
        return ("null",)
    kind = _value_kind(v)
    if kind == "num":
        return ("num", float(v))
    if kind == "list":
        return ("list", tuple(_ckey(x) for x in v))
    if kind == "node":
        return ("node", v[0], v[1])
    if kind == "edge":
        return ("edge", v[0], v[1], v[2])
    if kind == "path":
        return ("path", tuple(_ckey(e) for e in v))
    return (kind, v)


def _binding_key(row):
    return tuple(("zz",) if v is None else _ckey(v) for v in row)


class _Ref:
    def __init__(self, graph: PropertyGraph, params: dict):
        self.graph = graph
        self.params = params
        self.slot_names: list[str] = []
        self.slot_of: dict[str, int] = {}
        self._anon = 0

    # slot assignment: identical positional rule to the executor contract

    def _slot(self, variable):
        if variable is None:
            variable = f" anon{self._anon}"
            self._anon += 1
        if variable not in self.slot_of:
            self.slot_of[variable] = len(self.slot_names)
            self.slot_names.append(variable)
        return self.slot_of[variable]

    def assign_slots(self, query: ast.Query):
        table = {}
        for clause in query.matches:
            for pattern in clause.patterns:
                table[id(pattern)] = [self._slot(el.variable)
                                      for el in pattern.elements]
        return table

    # expression evaluation

    def value(self, expr, row):
        if isinstance(expr, ast.Literal):
            return expr.value
        if isinstance(expr, ast.Parameter):
            return self.params[expr.name]
        if isinstance(expr, ast.Variable):
            return row[self.slot_of[expr.name]]
        if isinstance(expr, ast.PropertyAccess):
            entity = row[self.slot_of[expr.variable]]
            if entity is None:
                return None
            if isinstance(entity, _RNode):
                return self.graph.get_node(entity[0], entity[1]).properties.get(
                    expr.prop)
            if isinstance(entity, _REdge):
                return entity[3].get(expr.prop)
            raise QueryExecutionError("reference: property of non-entity")
        if isinstance(expr, ast.ListExpr):
            return [self.value(item, row) for item in expr.items]
        raise QueryExecutionError(f"reference: cannot evaluate {expr!r}")

    def truth(self, expr, row) -> bool:
        if isinstance(expr, ast.BoolOp):
            results = [self.truth(t, row) for t in expr.terms]
            return all(results) if expr.op == "AND" else any(results)
        if isinstance(expr, ast.NotOp):
            return not self.truth(expr.term, row)
        if isinstance(expr, ast.NullCheck):
            v = self.value(expr.expr, row)
            return v is not None if expr.negated else v is None
        if isinstance(expr, ast.Comparison):
            a = self.value(expr.left, row)
            b = self.value(expr.right, row)
            return self.compare(expr.op, a, b)
        raise QueryExecutionError(f"reference: cannot test {expr!r}")

    @staticmethod
    def compare(op, a, b) -> bool:
        if op == "=":
            return _eq(a, b)
        if op == "<>":
            return a is not None and b is not None and not _eq(a, b)
        if op == "IN":
            if a is None or not isinstance(b, list):
                return False
            return any(_eq(a, item) for item in b)
        if op == "STARTS WITH":
            return isinstance(a, str) and isinstance(b, str) and a.startswith(b)
        if a is None or b is None:
            return False
        ka, kb = _value_kind(a), _value_kind(b)
        if ka != kb or ka not in ("num", "str", "bool"):
            return False
        if ka == "bool":
            a, b = int(a), int(b)
        return {"<": a < b, "<=": a <= b, ">": a > b, ">=": a >= b}[op]

    # matching: strict left-to-right full scans

    def node_ok(self, key, pattern: ast.NodePattern, row) -> bool:
        if pattern.label is not None and key[0] != pattern.label:
            return False
        props = self.graph.get_node(key[0], key[1]).properties
        return all(_eq(props.get(name), self.value(vexpr, row))
                   for name, vexpr in pattern.properties)

    def edge_ok(self, edge: _REdge, rel: ast.RelPattern, row) -> bool:
        if rel.types and edge[0] not in rel.types:
            return False
        return all(_eq(edge[3].get(name), self.value(vexpr, row))
                   for name, vexpr in rel.properties)

    def match_pattern(self, states, pattern, slots):
        """states: (row list, used idents frozenset).  Left-to-right."""
        elements = pattern.elements
        all_edges = list(_scan_edges(self.graph))

        def bind_node(state, i, results):
            row, used = state
            slot = slots[i]
            pat = elements[i]
            if row[slot] is not None:
                if self.node_ok(tuple(row[slot]), pat, row):
                    step_rel(( row, used), i, results)
                return
            for record in self.graph.nodes():
                if not self.node_ok(record.key, pat, row):
                    continue
                new_row = list(row)
                new_row[slot] = _RNode(record.key)
                step_rel((new_row, used), i, results)

        def step_rel(state, i, results):
            row, used = state
            if i + 1 >= len(elements):
                results.append((row, used))
                return
            rel: ast.RelPattern = elements[i + 1]
            rel_slot = slots[i + 1]
            here = tuple(row[slots[i]])
            if rel.var_length:
                for path, far, new_used in self.var_paths(
                        here, rel, used, all_edges, row):
                    new_row = list(row)
                    new_row[rel_slot] = _RPath(path)
                    land(new_row, new_used, far, i + 2, results)
            else:
                for edge in all_edges:
                    if edge.ident in used:
                        continue
                    if not self.edge_ok(edge, rel, row):
                        continue
                    far = self.far_end(edge, here, rel.direction)
                    if far is None:
                        continue
                    new_row = list(row)
                    new_row[rel_slot] = edge
                    land(new_row, used | {edge.ident}, far, i + 2, results)

        def land(row, used, far_key, i, results):
            slot = slots[i]
            pat = elements[i]
            if row[slot] is not None:
                if tuple(row[slot]) != far_key:
                    return
                if not self.node_ok(far_key, pat, row):
                    return
            else:
                if not self.node_ok(far_key, pat, row):
                    return
                row[slot] = _RNode(far_key)
            step_rel((row, used), i, results)

        results: list = []
        for state in states:
            bind_node(state, 0, results)
        return results

    @staticmethod
    def far_end(edge: _REdge, here, direction):
        etype, src, dst, _props = edge
        if direction == "out":
            return dst if src == here else None
        if direction == "in":
            return src if dst == here else None
        if src == here:
            return dst
        if dst == here:
            return src
        return None

    def var_paths(self, start, rel, used, all_edges, row):
        found = []

        def walk(here, path, path_used):
            if len(path) >= rel.min_len:
                found.append((tuple(path), here, path_used))
            if len(path) == rel.max_len:
                return
            for edge in all_edges:
                if edge.ident in path_used:
                    continue
                if rel.types and edge[0] not in rel.types:
                    continue
                far = self.far_end(edge, here, rel.direction)
                if far is None:
                    continue
                path.append(edge)
                walk(far, path, path_used | {edge.ident})
                path.pop()

        walk(start, [], used)
        return found

    # aggregation

    def aggregate(self, agg: ast.Aggregate, rows):
        if agg.arg is None:
            return len(rows)
        values = [self.value(agg.arg, row) for row in rows]
        values = [v for v in values if v is not None]
        if agg.distinct:
            seen, unique = set(), []
            for v in values:
                k = _ckey(v)
                if k not in seen:
                    seen.add(k)
                    unique.append(v)
            values = unique
        if agg.func == "count":
            return len(values)
        if agg.func == "collect":
            return list(values)
        if agg.func == "sum":
            nums = [v for v in values
                    if isinstance(v, (int, float)) and not isinstance(v, bool)]
            total = 0
            for v in nums:
                total = total + v
            return total
        if agg.func == "avg":
            nums = [v for v in values
                    if isinstance(v, (int, float)) and not isinstance(v, bool)]
            if not nums:
                return None
            total = 0.0
            for v in nums:
                total += v
            return total / len(nums)
        if agg.func == "min":
            return min(values, key=_okey) if values else None
        if agg.func == "max":
            return max(values, key=_okey) if values else None
        raise QueryExecutionError(f"reference: unknown aggregate {agg.func}")


class _RefSort:
    __slots__ = ("parts",)

    def __init__(self, values, flags):
        self.parts = [(v is None, None if v is None else _okey(v), f)
                      for v, f in zip(values, flags)]

    def __lt__(self, other):
        for (an, ak, desc), (bn, bk, _) in zip(self.parts, other.parts):
            if an != bn:
                return bn
            if an:
                continue
            if ak != bk:
                return ak > bk if desc else ak < bk
        return False


def _materialize(cell, graph: PropertyGraph):
    if isinstance(cell, _RNode):
        props = graph.get_node(cell[0], cell[1]).properties
        return {"kind": "node", "label": cell[0], "id": cell[1],
                "props": dict(sorted(props.items()))}
    if isinstance(cell, _REdge):
        return {"kind": "edge", "type": cell[0],
                "src": f"{cell[1][0]}:{cell[1][1]}",
                "dst": f"{cell[2][0]}:{cell[2][1]}",
                "props": dict(sorted(cell[3].items()))}
    if isinstance(cell, _RPath):
        return [_materialize(e, graph) for e in cell]
    if isinstance(cell, list):
        return [_materialize(x, graph) for x in cell]
    return cell


def reference_execute(query, graph: PropertyGraph,
                      params: dict | None = None) -> ResultTable:
    """Execute a read query by exhaustive enumeration."""
    if isinstance(query, str):
        query = parse(query)
    if query.is_write:
        raise QueryExecutionError("the reference interpreter is read-only")
    params = dict(params or {})
    missing = sorted(query.parameters - set(params))
    if missing:
        raise MissingParameterError(missing[0])

    ref = _Ref(graph, params)
    slot_table = ref.assign_slots(query)
    width = len(ref.slot_names)

    rows = [[None] * width]
    for clause in query.matches:
        states = [(row, frozenset()) for row in rows]
        for pattern in clause.patterns:
            states = ref.match_pattern(states, pattern, slot_table[id(pattern)])
        rows = [row for row, _used in states
                if clause.where is None or ref.truth(clause.where, row)]

    touched: set[str] = set()
    for row in rows:
        for v in row:
            if isinstance(v, _RNode):
                touched.add(v[1])
            elif isinstance(v, _REdge):
                touched.add(v[1][1])
                touched.add(v[2][1])
            elif isinstance(v, _RPath):
                for e in v:
                    touched.add(e[1][1])
                    touched.add(e[2][1])

    rows.sort(key=_binding_key)

    returns = query.returns
    items = returns.items
    agg_pos = {i for i, item in enumerate(items)
               if isinstance(item.expr, ast.Aggregate)}
    if agg_pos:
        plain_pos = [i for i in range(len(items)) if i not in agg_pos]
        buckets: dict = {}
        for row in rows:
            cells = [ref.value(items[i].expr, row) for i in plain_pos]
            key = tuple(_ckey(c) for c in cells)
            buckets.setdefault(key, (cells, []))[1].append(row)
        if not plain_pos and not buckets:
            buckets[()] = ([], [])
        projected = []
        for key in sorted(buckets):
            cells, members = buckets[key]
            out = [None] * len(items)
            for pos, cell in zip(plain_pos, cells):
                out[pos] = cell
            for pos in agg_pos:
                out[pos] = ref.aggregate(items[pos].expr, members)
            projected.append((out, None))
    else:
        projected = [([ref.value(item.expr, row) for item in items], row)
                     for row in rows]

    if returns.distinct:
        seen, kept = set(), []
        for out, row in projected:
            key = tuple(_ckey(c) for c in out)
            if key not in seen:
                seen.add(key)
                kept.append((out, row))
        projected = kept

    if returns.order_by:
        aliases = {item.alias: i for i, item in enumerate(items) if item.alias}
        renders = {item.expr.render(): i for i, item in enumerate(items)}
        flags = [o.descending for o in returns.order_by]

        def keys_for(out, row):
            values = []
            for order in returns.order_by:
                expr = order.expr
                if isinstance(expr, ast.Variable) and expr.name in aliases:
                    values.append(out[aliases[expr.name]])
                elif expr.render() in renders:
                    values.append(out[renders[expr.render()]])
                else:
                    values.append(ref.value(expr, row))
            return values

        projected.sort(key=lambda pair: _RefSort(keys_for(*pair), flags))

    if returns.skip:
        projected = projected[returns.skip:]
    if returns.limit is not None:
        projected = projected[:returns.limit]

    return ResultTable(
        columns=[item.column_name for item in items],
        rows=[[_materialize(c, graph) for c in out] for out, _ in projected],
        touched_ids=sorted(touched))
