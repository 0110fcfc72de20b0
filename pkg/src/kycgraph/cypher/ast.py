"""AST for the supported query subset, plus the canonical pretty-printer.

The printer is the inverse of the parser: pretty-printing an AST and
re-parsing it yields an equal AST.  Rendered expressions also serve as
default result column names.
"""

from __future__ import annotations

from dataclasses import dataclass, field

AGGREGATE_FUNCS = ("count", "sum", "avg", "min", "max", "collect")


# -- value expressions -------------------------------------------------------

@dataclass(frozen=True)
class Literal:
    value: object  # str | int | float | bool | None

    def render(self) -> str:
        v = self.value
        if v is None:
            return "null"
        if isinstance(v, bool):
            return "true" if v else "false"
        if isinstance(v, str):
            return "'" + v.replace("\\", "\\\\").replace("'", "\\'") + "'"
        return repr(v)


@dataclass(frozen=True)
class Parameter:
    name: str

    def render(self) -> str:
        return f"${self.name}"


@dataclass(frozen=True)
class Variable:
    name: str

    def render(self) -> str:
        return self.name


@dataclass(frozen=True)
class PropertyAccess:
    variable: str
    prop: str

    def render(self) -> str:
        return f"{self.variable}.{self.prop}"


@dataclass(frozen=True)
class ListExpr:
    items: tuple

    def render(self) -> str:
        return "[" + ", ".join(item.render() for item in self.items) + "]"


# -- boolean expressions (WHERE) ----------------------------------------------

@dataclass(frozen=True)
class Comparison:
    op: str  # = <> < <= > >= IN STARTS WITH
    left: object
    right: object

    def render(self) -> str:
        return f"{self.left.render()} {self.op} {self.right.render()}"


@dataclass(frozen=True)
class NullCheck:
    expr: object
    negated: bool  # True for IS NOT NULL

    def render(self) -> str:
        suffix = "IS NOT NULL" if self.negated else "IS NULL"
        return f"{self.expr.render()} {suffix}"


@dataclass(frozen=True)
class BoolOp:
    op: str  # AND | OR
    terms: tuple

    def render(self) -> str:
        parts = []
        for term in self.terms:
            text = term.render()
            if isinstance(term, BoolOp) and term.op != self.op:
                text = f"({text})"
            parts.append(text)
        return f" {self.op} ".join(parts)


@dataclass(frozen=True)
class NotOp:
    term: object

    def render(self) -> str:
        inner = self.term.render()
        if isinstance(self.term, (BoolOp, Comparison, NullCheck, NotOp)):
            return f"NOT ({inner})"
        return f"NOT {inner}"


# -- patterns -----------------------------------------------------------------

@dataclass(frozen=True)
class NodePattern:
    variable: str | None
    label: str | None
    properties: tuple  # of (name, value-expression)

    def render(self) -> str:
        text = self.variable or ""
        if self.label:
            text += f":{self.label}"
        if self.properties:
            props = ", ".join(f"{k}: {v.render()}" for k, v in self.properties)
            text += " " if text else ""
            text += "{" + props + "}"
        return f"({text})"


@dataclass(frozen=True)
class RelPattern:
    variable: str | None
    types: tuple  # of str; empty means any type
    direction: str  # out | in | any
    min_len: int | None = None  # None unless variable-length
    max_len: int | None = None
    properties: tuple = ()

    @property
    def var_length(self) -> bool:
        return self.min_len is not None

    def render(self) -> str:
        inner = self.variable or ""
        if self.types:
            inner += ":" + "|".join(self.types)
        if self.var_length:
            inner += f"*{self.min_len}..{self.max_len}"
        if self.properties:
            props = ", ".join(f"{k}: {v.render()}" for k, v in self.properties)
            inner += " {" + props + "}"
        body = f"[{inner}]" if inner else ""
        if self.direction == "out":
            return f"-{body}->"
        if self.direction == "in":
            return f"<-{body}-"
        return f"-{body}-"


@dataclass(frozen=True)
class PathPattern:
    # Alternating NodePattern, RelPattern, NodePattern, ...
    elements: tuple

    @property
    def nodes(self) -> tuple:
        return self.elements[0::2]

    @property
    def rels(self) -> tuple:
        return self.elements[1::2]

    def render(self) -> str:
        return "".join(el.render() for el in self.elements)


@dataclass(frozen=True)
class MatchClause:
    patterns: tuple  # of PathPattern
    where: object | None = None

    def render(self) -> str:
        text = "MATCH " + ", ".join(p.render() for p in self.patterns)
        if self.where is not None:
            text += " WHERE " + self.where.render()
        return text


# -- projection ----------------------------------------------------------------

@dataclass(frozen=True)
class Aggregate:
    func: str  # count | sum | avg | min | max | collect
    arg: object | None  # None only for count(*)
    distinct: bool = False

    def render(self) -> str:
        if self.arg is None:
            return "count(*)"
        inner = self.arg.render()
        if self.distinct:
            inner = "DISTINCT " + inner
        return f"{self.func}({inner})"


@dataclass(frozen=True)
class ReturnItem:
    expr: object
    alias: str | None = None

    @property
    def column_name(self) -> str:
        return self.alias if self.alias else self.expr.render()

    def render(self) -> str:
        text = self.expr.render()
        if self.alias:
            text += f" AS {self.alias}"
        return text


@dataclass(frozen=True)
class OrderItem:
    expr: object
    descending: bool = False

    def render(self) -> str:
        return self.expr.render() + (" DESC" if self.descending else "")


@dataclass(frozen=True)
class ReturnClause:
    items: tuple  # of ReturnItem
    distinct: bool = False
    order_by: tuple = ()
    skip: int | None = None
    limit: int | None = None

    def render(self) -> str:
        text = "RETURN "
        if self.distinct:
            text += "DISTINCT "
        text += ", ".join(item.render() for item in self.items)
        if self.order_by:
            text += " ORDER BY " + ", ".join(o.render() for o in self.order_by)
        if self.skip is not None:
            text += f" SKIP {self.skip}"
        if self.limit is not None:
            text += f" LIMIT {self.limit}"
        return text


@dataclass(frozen=True)
class WriteClause:
    kind: str  # MERGE | CREATE
    pattern: PathPattern

    def render(self) -> str:
        return f"{self.kind} {self.pattern.render()}"


@dataclass(frozen=True)
class Query:
    matches: tuple = ()
    writes: tuple = ()
    returns: ReturnClause | None = None
    parameters: frozenset = field(default_factory=frozenset)  # names referenced

    @property
    def is_write(self) -> bool:
        return bool(self.writes)

    def render(self) -> str:
        parts = [m.render() for m in self.matches]
        parts += [w.render() for w in self.writes]
        if self.returns is not None:
            parts.append(self.returns.render())
        return " ".join(parts)


def walk_values(expr):
    """Yield every value expression inside a boolean or value expression."""
    if isinstance(expr, (Literal, Parameter, Variable, PropertyAccess)):
        yield expr
    elif isinstance(expr, ListExpr):
        for item in expr.items:
            yield from walk_values(item)
    elif isinstance(expr, Comparison):
        yield from walk_values(expr.left)
        yield from walk_values(expr.right)
    elif isinstance(expr, NullCheck):
        yield from walk_values(expr.expr)
    elif isinstance(expr, BoolOp):
        for term in expr.terms:
            yield from walk_values(term)
    elif isinstance(expr, NotOp):
        yield from walk_values(expr.term)
    elif isinstance(expr, Aggregate):
        if expr.arg is not None:
            yield from walk_values(expr.arg)


def query_parameters(query: Query) -> frozenset:
    """All parameter names referenced anywhere in the query."""
    names = set()

    def scan_expr(expr):
        for value in walk_values(expr):
            if isinstance(value, Parameter):
                names.add(value.name)

    def scan_pattern(pattern: PathPattern):
        for element in pattern.elements:
            for _, value in element.properties:
                scan_expr(value)

    for clause in query.matches:
        for pattern in clause.patterns:
            scan_pattern(pattern)
        if clause.where is not None:
            scan_expr(clause.where)
    for write in query.writes:
        scan_pattern(write.pattern)
    if query.returns is not None:
        for item in query.returns.items:
            scan_expr(item.expr)
        for order in query.returns.order_by:
            scan_expr(order.expr)
    return frozenset(names)
