"""Seeded random query generator for differential testing.

Queries are valid by construction (every variable bound, bounds within
limits, only supported constructs) and biased toward shapes that actually
match seeded KYC graphs: labels, edge types and literal values are
harvested from the target graph so predicates are neither always-true nor
always-false.
"""

from __future__ import annotations

import random

from . import ast
from .. import schema
from ..store import PropertyGraph

_AGG_NUMERIC = ("sum", "avg")
_AGG_ANY = ("count", "min", "max", "collect")


class ValuePool:
    """Sampled property values per (label, property) plus decoy values."""

    def __init__(self, graph: PropertyGraph, rng: random.Random, per_prop: int = 6):
        self.by_label: dict[str, dict[str, list]] = {}
        self.labels: list[str] = []
        for label in schema.LABELS:
            ids = graph.node_ids(label)
            if not ids:
                continue
            self.labels.append(label)
            props: dict[str, list] = {}
            sample = ids if len(ids) <= per_prop else rng.sample(ids, per_prop)
            for business_id in sample:
                for name, value in graph.get_node(label, business_id).properties.items():
                    if isinstance(value, list):
                        continue
                    bucket = props.setdefault(name, [])
                    if value not in bucket:
                        bucket.append(value)
            self.by_label[label] = props
        self.edge_types = [etype for etype, count in
                           graph.counts_by_edge_type().items() if count]

    def prop_names(self, label: str) -> list[str]:
        return sorted(self.by_label.get(label, ()))

    def value_for(self, label: str, prop: str, rng: random.Random):
        values = self.by_label.get(label, {}).get(prop)
        if values and rng.random() < 0.8:
            return rng.choice(values)
        # decoy: plausible but probably absent
        return rng.choice(["ZZ_NOPE", 0, -1, 999999.5, "CUST999999", True])


class QueryFuzzer:
    def __init__(self, graph: PropertyGraph, seed: int):
        self.rng = random.Random(seed)
        self.pool = ValuePool(graph, self.rng)

    def generate(self) -> tuple[ast.Query, dict]:
        """One random read query plus its parameter map."""
        rng = self.rng
        self._params: dict = {}
        self._param_n = 0
        self._var_n = 0
        self._node_vars: dict[str, str | None] = {}  # var -> label or None
        self._rel_vars: list[str] = []

        clauses = [self._clause() for _ in range(1 if rng.random() < 0.8 else 2)]
        returns = self._returns()
        query = ast.Query(tuple(clauses), (), returns)
        query = ast.Query(query.matches, (), returns, ast.query_parameters(query))
        return query, dict(self._params)

    # -- helpers ---------------------------------------------------------------

    def _fresh_var(self, prefix: str) -> str:
        self._var_n += 1
        return f"{prefix}{self._var_n}"

    def _literal(self, value) -> ast.Literal | ast.Parameter:
        if self.rng.random() < 0.25:
            self._param_n += 1
            name = f"p{self._param_n}"
            self._params[name] = value
            return ast.Parameter(name)
        return ast.Literal(value)

    def _clause(self) -> ast.MatchClause:
        rng = self.rng
        n_patterns = 1 if rng.random() < 0.75 else 2
        patterns = tuple(self._pattern() for _ in range(n_patterns))
        where = self._where() if rng.random() < 0.55 else None
        return ast.MatchClause(patterns, where)

    def _node_pattern(self, force_new: bool = False) -> ast.NodePattern:
        rng = self.rng
        reuse = [v for v in self._node_vars] if not force_new else []
        if reuse and rng.random() < 0.2:
            name = rng.choice(sorted(reuse))
            return ast.NodePattern(name, None, ())
        label = rng.choice(self.pool.labels) if rng.random() < 0.8 else None
        variable = None
        if rng.random() < 0.85:
            variable = self._fresh_var("n")
            self._node_vars[variable] = label
        properties = ()
        if label and rng.random() < 0.35:
            names = self.pool.prop_names(label)
            if names:
                prop = rng.choice(names)
                properties = ((prop, self._literal(
                    self.pool.value_for(label, prop, rng))),)
        return ast.NodePattern(variable, label, properties)

    def _rel_pattern(self) -> ast.RelPattern:
        rng = self.rng
        direction = rng.choice(("out", "out", "in", "any"))
        n_types = rng.choice((0, 1, 1, 1, 2))
        types = tuple(rng.sample(self.pool.edge_types,
                                 min(n_types, len(self.pool.edge_types))))
        if rng.random() < 0.14:
            lo = rng.randint(1, 2)
            hi = rng.randint(lo, 3)
            return ast.RelPattern(None, types, direction, lo, hi)
        variable = None
        if rng.random() < 0.3:
            variable = self._fresh_var("r")
            self._rel_vars.append(variable)
        return ast.RelPattern(variable, types, direction)

    def _pattern(self) -> ast.PathPattern:
        rng = self.rng
        hops = rng.choice((0, 1, 1, 1, 2, 2, 3))
        elements = [self._node_pattern()]
        for _ in range(hops):
            elements.append(self._rel_pattern())
            elements.append(self._node_pattern())
        return ast.PathPattern(tuple(elements))

    def _prop_access(self) -> ast.PropertyAccess | None:
        rng = self.rng
        named = sorted(self._node_vars)
        if not named:
            return None
        var = rng.choice(named)
        label = self._node_vars[var]
        names = self.pool.prop_names(label) if label else \
            self.pool.prop_names(rng.choice(self.pool.labels))
        if not names:
            return None
        return ast.PropertyAccess(var, rng.choice(names))

    def _predicate(self):
        rng = self.rng
        access = self._prop_access()
        if access is None:
            return ast.Comparison("=", ast.Literal(1), ast.Literal(1))
        label = self._node_vars.get(access.variable)
        sample_label = label or rng.choice(self.pool.labels)
        value = self.pool.value_for(sample_label, access.prop, rng)
        roll = rng.random()
        if roll < 0.45:
            op = rng.choice(("=", "<>", "<", "<=", ">", ">="))
            return ast.Comparison(op, access, self._literal(value))
        if roll < 0.6:
            options = [self.pool.value_for(sample_label, access.prop, rng)
                       for _ in range(rng.randint(1, 3))]
            scalars = [v for v in options if not isinstance(v, list)]
            if rng.random() < 0.4:
                self._param_n += 1
                name = f"p{self._param_n}"
                self._params[name] = scalars
                return ast.Comparison("IN", access, ast.Parameter(name))
            return ast.Comparison(
                "IN", access,
                ast.ListExpr(tuple(ast.Literal(v) for v in scalars)))
        if roll < 0.75:
            prefix = value[:2] if isinstance(value, str) and value else "X"
            return ast.Comparison("STARTS WITH", access, self._literal(prefix))
        if roll < 0.9:
            return ast.NullCheck(access, negated=rng.random() < 0.5)
        other = self._prop_access()
        if other is None:
            return ast.NullCheck(access, negated=False)
        return ast.Comparison(rng.choice(("=", "<>", "<", ">")), access, other)

    def _where(self):
        rng = self.rng
        terms = [self._predicate() for _ in range(rng.randint(1, 3))]
        expr = terms[0]
        for term in terms[1:]:
            op = rng.choice(("AND", "AND", "OR"))
            expr = ast.BoolOp(op, (expr, term))
        if rng.random() < 0.15:
            expr = ast.NotOp(expr)
        return expr

    def _projection_exprs(self) -> list:
        rng = self.rng
        named_nodes = sorted(self._node_vars)
        options: list = []
        if named_nodes:
            options.append(lambda: ast.Variable(rng.choice(named_nodes)))
            options.append(lambda: self._prop_access() or
                           ast.Variable(rng.choice(named_nodes)))
            options.append(options[-1])
        if self._rel_vars:
            options.append(lambda: ast.Variable(rng.choice(self._rel_vars)))
        if not options:
            options.append(lambda: ast.Literal(1))
        return [rng.choice(options)() for _ in range(rng.randint(1, 3))]

    def _aggregate_of(self, expr) -> ast.Aggregate:
        rng = self.rng
        if isinstance(expr, ast.PropertyAccess) and rng.random() < 0.4:
            func = rng.choice(_AGG_NUMERIC + _AGG_ANY)
        else:
            func = rng.choice(_AGG_ANY)
        if func == "count" and rng.random() < 0.25:
            return ast.Aggregate("count", None)
        return ast.Aggregate(func, expr, distinct=rng.random() < 0.25)

    def _returns(self) -> ast.ReturnClause:
        rng = self.rng
        exprs = self._projection_exprs()
        aggregate_query = rng.random() < 0.35
        items = []
        for i, expr in enumerate(exprs):
            make_agg = aggregate_query and (i > 0 or len(exprs) == 1 or
                                            rng.random() < 0.5)
            final = self._aggregate_of(expr) if make_agg else expr
            alias = f"col{i}" if rng.random() < 0.4 else None
            items.append(ast.ReturnItem(final, alias))
        has_agg = any(isinstance(i.expr, ast.Aggregate) for i in items)
        distinct = (not has_agg) and rng.random() < 0.2

        order_by = ()
        if rng.random() < 0.35:
            pick = rng.sample(items, k=rng.randint(1, len(items)))
            order_by = tuple(
                ast.OrderItem(
                    ast.Variable(item.alias) if item.alias else item.expr,
                    descending=rng.random() < 0.4)
                for item in pick)
        skip = rng.randint(0, 3) if rng.random() < 0.15 else None
        limit = rng.randint(0, 8) if rng.random() < 0.25 else None
        return ast.ReturnClause(tuple(items), distinct, order_by, skip, limit)
