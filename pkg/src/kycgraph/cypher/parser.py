"""Recursive-descent parser for the query subset.

The subset is closed: MATCH (multiple clauses, comma patterns) with WHERE,
RETURN with aliases/DISTINCT/aggregates, ORDER BY, SKIP, LIMIT, parameters,
MERGE/CREATE for ingestion, and bounded variable-length relationships.
Constructs outside the subset (OPTIONAL MATCH, WITH, subqueries, regex,
functions beyond the six aggregates) are rejected with a clear
unsupported-feature error rather than misparsed.
"""

from __future__ import annotations

from . import ast
from ..errors import QuerySyntaxError, UnboundVariableError, UnsupportedFeatureError
from .lexer import Token, tokenize

_UNSUPPORTED_KEYWORDS = {
    "OPTIONAL": "OPTIONAL MATCH",
    "WITH": "WITH chaining",
    "UNION": "UNION",
    "CALL": "CALL subqueries/procedures",
    "UNWIND": "UNWIND",
    "DELETE": "DELETE",
    "SET": "SET",
    "REMOVE": "REMOVE",
    "FOREACH": "FOREACH",
    "CONTAINS": "CONTAINS predicate",
    "ENDS": "ENDS WITH predicate",
    "XOR": "XOR",
    "CASE": "CASE expressions",
}

MAX_VAR_LENGTH = 8


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    # -- token plumbing ------------------------------------------------------

    @property
    def cur(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def at_symbol(self, *symbols: str) -> bool:
        return self.cur.kind == "SYMBOL" and self.cur.value in symbols

    def at_keyword(self, *words: str) -> bool:
        return self.cur.kind == "KEYWORD" and self.cur.value in words

    def eat_symbol(self, symbol: str) -> Token:
        if not self.at_symbol(symbol):
            self.fail(f"expected {symbol!r}", expected=(symbol,))
        return self.advance()

    def eat_keyword(self, word: str) -> Token:
        if not self.at_keyword(word):
            self.fail(f"expected {word}", expected=(word,))
        return self.advance()

    def eat_ident(self, what: str = "identifier") -> Token:
        if self.cur.kind != "IDENT":
            self.fail(f"expected {what}", expected=(what,))
        return self.advance()

    def fail(self, message: str, expected: tuple = ()):
        tok = self.cur
        got = tok.text if tok.kind != "EOF" else "end of query"
        raise QuerySyntaxError(f"{message}, got {got!r}", tok.line, tok.column,
                               tuple(expected))

    def unsupported(self, feature: str):
        raise UnsupportedFeatureError(feature, self.cur.line, self.cur.column)

    def check_unsupported_keyword(self):
        if self.cur.kind == "KEYWORD" and self.cur.value in _UNSUPPORTED_KEYWORDS:
            self.unsupported(_UNSUPPORTED_KEYWORDS[self.cur.value])

    # -- grammar ---------------------------------------------------------------

    def parse_query(self) -> ast.Query:
        matches = []
        writes = []
        returns = None
        self.check_unsupported_keyword()
        while self.at_keyword("MATCH"):
            matches.append(self.parse_match())
            self.check_unsupported_keyword()
        while self.at_keyword("MERGE", "CREATE"):
            kind = self.advance().value
            writes.append(ast.WriteClause(kind, self.parse_pattern()))
            self.check_unsupported_keyword()
        if self.at_keyword("RETURN"):
            if writes:
                self.unsupported("RETURN after MERGE/CREATE")
            returns = self.parse_return()
        if self.cur.kind != "EOF":
            self.check_unsupported_keyword()
            self.fail("unexpected trailing input")
        if not matches and not writes:
            self.fail("query must start with MATCH, MERGE or CREATE",
                      expected=("MATCH", "MERGE", "CREATE"))
        if matches and not writes and returns is None:
            self.fail("read query is missing RETURN", expected=("RETURN",))
        query = ast.Query(tuple(matches), tuple(writes), returns)
        _validate(query)
        return ast.Query(query.matches, query.writes, query.returns,
                         ast.query_parameters(query))

    def parse_match(self) -> ast.MatchClause:
        self.eat_keyword("MATCH")
        patterns = [self.parse_pattern()]
        while self.at_symbol(","):
            self.advance()
            patterns.append(self.parse_pattern())
        where = None
        if self.at_keyword("WHERE"):
            self.advance()
            where = self.parse_or_expr()
        return ast.MatchClause(tuple(patterns), where)

    def parse_pattern(self) -> ast.PathPattern:
        if self.cur.kind == "IDENT" and self.tokens[self.pos + 1].kind == "SYMBOL" \
                and self.tokens[self.pos + 1].value == "=":
            self.unsupported("named paths")
        elements: list = [self.parse_node_pattern()]
        while self.at_symbol("-", "<-"):
            elements.append(self.parse_rel_pattern())
            elements.append(self.parse_node_pattern())
        return ast.PathPattern(tuple(elements))

    def parse_node_pattern(self) -> ast.NodePattern:
        self.eat_symbol("(")
        variable = None
        label = None
        properties: tuple = ()
        if self.cur.kind == "IDENT":
            variable = self.advance().value
        if self.at_symbol(":"):
            self.advance()
            label = self.eat_ident("node label").value
            if self.at_symbol(":"):
                self.unsupported("multiple labels on one node")
        if self.at_symbol("{"):
            properties = self.parse_property_map()
        self.eat_symbol(")")
        return ast.NodePattern(variable, label, properties)

    def parse_rel_pattern(self) -> ast.RelPattern:
        if self.at_symbol("<-"):
            self.advance()
            rel = self.parse_rel_body()
            self.eat_symbol("-")
            if self.at_symbol(">"):
                self.fail("relationship cannot point both ways")
            return ast.RelPattern(rel.variable, rel.types, "in",
                                  rel.min_len, rel.max_len, rel.properties)
        self.eat_symbol("-")
        rel = self.parse_rel_body()
        if self.at_symbol("->"):
            self.advance()
            direction = "out"
        elif self.at_symbol("-"):
            self.advance()
            direction = "any"
        elif self.at_symbol(">"):
            # after a bare "-" with no brackets, "->" lexes as "-" then ">"
            self.advance()
            direction = "out"
        else:
            self.fail("expected '->' or '-' to close relationship",
                      expected=("->", "-"))
        return ast.RelPattern(rel.variable, rel.types, direction,
                              rel.min_len, rel.max_len, rel.properties)

    def parse_rel_body(self) -> ast.RelPattern:
        """The optional [var:TYPE|TYPE2*min..max {..}] part; bare dashes allowed."""
        if not self.at_symbol("["):
            return ast.RelPattern(None, (), "any")
        self.advance()
        variable = None
        types: list[str] = []
        min_len = max_len = None
        properties: tuple = ()
        if self.cur.kind == "IDENT":
            variable = self.advance().value
        if self.at_symbol(":"):
            self.advance()
            types.append(self.eat_ident("relationship type").value)
            while self.at_symbol("|"):
                self.advance()
                if self.at_symbol(":"):  # tolerate `|:TYPE` form
                    self.advance()
                types.append(self.eat_ident("relationship type").value)
        if self.at_symbol("*"):
            star = self.advance()
            if self.cur.kind != "INT":
                raise UnsupportedFeatureError(
                    "variable-length relationship without explicit bounds "
                    "(use *min..max)", star.line, star.column)
            min_len = self.advance().value
            if self.at_symbol(".."):
                self.advance()
                if self.cur.kind != "INT":
                    self.fail("expected upper bound after '..'", expected=("INT",))
                max_len = self.advance().value
            else:
                max_len = min_len
            if variable is not None:
                raise UnsupportedFeatureError(
                    "binding a variable to a variable-length relationship",
                    star.line, star.column)
            if min_len < 1 or max_len > MAX_VAR_LENGTH or min_len > max_len:
                raise QuerySyntaxError(
                    f"variable-length bounds must satisfy 1 <= min <= max <= "
                    f"{MAX_VAR_LENGTH}, got *{min_len}..{max_len}",
                    star.line, star.column)
        if self.at_symbol("{"):
            if min_len is not None:
                self.unsupported("property map on a variable-length relationship")
            properties = self.parse_property_map()
        self.eat_symbol("]")
        return ast.RelPattern(variable, tuple(types), "any",
                              min_len, max_len, properties)

    def parse_property_map(self) -> tuple:
        self.eat_symbol("{")
        entries = []
        while True:
            key = self.eat_ident("property name").value
            self.eat_symbol(":")
            entries.append((key, self.parse_value_literal()))
            if self.at_symbol(","):
                self.advance()
                continue
            break
        self.eat_symbol("}")
        return tuple(entries)

    def parse_value_literal(self):
        """Literal, parameter or list; no variables (for property maps)."""
        tok = self.cur
        if tok.kind == "PARAM":
            self.advance()
            return ast.Parameter(tok.value)
        if tok.kind in ("INT", "FLOAT"):
            self.advance()
            return ast.Literal(tok.value)
        if tok.kind == "STRING":
            self.advance()
            return ast.Literal(tok.value)
        if self.at_symbol("-"):
            self.advance()
            if self.cur.kind not in ("INT", "FLOAT"):
                self.fail("expected number after '-'")
            return ast.Literal(-self.advance().value)
        if self.at_keyword("TRUE"):
            self.advance()
            return ast.Literal(True)
        if self.at_keyword("FALSE"):
            self.advance()
            return ast.Literal(False)
        if self.at_keyword("NULL"):
            self.advance()
            return ast.Literal(None)
        if self.at_symbol("["):
            self.advance()
            items = []
            if not self.at_symbol("]"):
                items.append(self.parse_value_literal())
                while self.at_symbol(","):
                    self.advance()
                    items.append(self.parse_value_literal())
            self.eat_symbol("]")
            return ast.ListExpr(tuple(items))
        self.fail("expected a literal, parameter or list")

    def parse_value_expr(self):
        """A value term as allowed in WHERE/RETURN: adds variables and
        property access to the literal forms."""
        if self.cur.kind == "IDENT":
            name = self.advance().value
            if self.at_symbol("("):
                self.unsupported(f"function call {name}(...)")
            if self.at_symbol("."):
                self.advance()
                prop = self.eat_ident("property name").value
                return ast.PropertyAccess(name, prop)
            return ast.Variable(name)
        if self.at_symbol("=~"):
            self.unsupported("regular-expression matching")
        return self.parse_value_literal()

    # WHERE grammar: or_expr > and_expr > not_expr > predicate

    def parse_or_expr(self):
        terms = [self.parse_and_expr()]
        while self.at_keyword("OR"):
            self.advance()
            terms.append(self.parse_and_expr())
        return terms[0] if len(terms) == 1 else ast.BoolOp("OR", tuple(terms))

    def parse_and_expr(self):
        terms = [self.parse_not_expr()]
        while self.at_keyword("AND"):
            self.advance()
            terms.append(self.parse_not_expr())
        return terms[0] if len(terms) == 1 else ast.BoolOp("AND", tuple(terms))

    def parse_not_expr(self):
        if self.at_keyword("NOT"):
            self.advance()
            return ast.NotOp(self.parse_not_expr())
        return self.parse_predicate()

    def parse_predicate(self):
        if self.at_symbol("("):
            self.advance()
            inner = self.parse_or_expr()
            self.eat_symbol(")")
            return inner
        self.check_unsupported_keyword()
        left = self.parse_value_expr()
        if self.at_symbol("=", "<>", "<", "<=", ">", ">="):
            op = self.advance().value
            if self.at_symbol("=~"):
                self.unsupported("regular-expression matching")
            return ast.Comparison(op, left, self.parse_value_expr())
        if self.at_symbol("=~"):
            self.unsupported("regular-expression matching")
        if self.at_keyword("IN"):
            self.advance()
            return ast.Comparison("IN", left, self.parse_value_expr())
        if self.at_keyword("STARTS"):
            self.advance()
            self.eat_keyword("WITH")
            return ast.Comparison("STARTS WITH", left, self.parse_value_expr())
        if self.at_keyword("IS"):
            self.advance()
            negated = False
            if self.at_keyword("NOT"):
                self.advance()
                negated = True
            self.eat_keyword("NULL")
            return ast.NullCheck(left, negated)
        self.check_unsupported_keyword()
        self.fail("expected a comparison operator, IN, STARTS WITH or IS [NOT] NULL")

    def parse_return(self) -> ast.ReturnClause:
        self.eat_keyword("RETURN")
        distinct = False
        if self.at_keyword("DISTINCT"):
            self.advance()
            distinct = True
        items = [self.parse_return_item()]
        while self.at_symbol(","):
            self.advance()
            items.append(self.parse_return_item())
        order_by: list[ast.OrderItem] = []
        skip = limit = None
        if self.at_keyword("ORDER"):
            self.advance()
            self.eat_keyword("BY")
            order_by.append(self.parse_order_item())
            while self.at_symbol(","):
                self.advance()
                order_by.append(self.parse_order_item())
        if self.at_keyword("SKIP"):
            self.advance()
            skip = self.parse_count("SKIP")
        if self.at_keyword("LIMIT"):
            self.advance()
            limit = self.parse_count("LIMIT")
        return ast.ReturnClause(tuple(items), distinct, tuple(order_by), skip, limit)

    def parse_count(self, what: str) -> int:
        if self.cur.kind != "INT":
            self.fail(f"{what} takes a non-negative integer literal",
                      expected=("INT",))
        return self.advance().value

    def parse_projection_expr(self):
        """Aggregate or plain value expression (RETURN / ORDER BY item)."""
        if self.cur.kind == "IDENT" and self.cur.value.lower() in ast.AGGREGATE_FUNCS \
                and self.tokens[self.pos + 1].kind == "SYMBOL" \
                and self.tokens[self.pos + 1].value == "(":
            func = self.advance().value.lower()
            self.advance()  # (
            if self.at_symbol("*"):
                star = self.advance()
                if func != "count":
                    raise QuerySyntaxError(f"{func}(*) is not defined",
                                           star.line, star.column)
                self.eat_symbol(")")
                return ast.Aggregate("count", None)
            distinct = False
            if self.at_keyword("DISTINCT"):
                self.advance()
                distinct = True
            arg = self.parse_value_expr()
            if isinstance(arg, ast.Aggregate):
                self.fail("aggregates cannot be nested")
            self.eat_symbol(")")
            return ast.Aggregate(func, arg, distinct)
        return self.parse_value_expr()

    def parse_return_item(self) -> ast.ReturnItem:
        expr = self.parse_projection_expr()
        alias = None
        if self.at_keyword("AS"):
            self.advance()
            alias = self.eat_ident("alias").value
        return ast.ReturnItem(expr, alias)

    def parse_order_item(self) -> ast.OrderItem:
        expr = self.parse_projection_expr()
        descending = False
        if self.at_keyword("DESC"):
            self.advance()
            descending = True
        elif self.at_keyword("ASC"):
            self.advance()
        return ast.OrderItem(expr, descending)


def _pattern_bindings(pattern: ast.PathPattern,
                      node_vars: set[str], rel_vars: set[str]):
    for node in pattern.nodes:
        if node.variable:
            if node.variable in rel_vars:
                raise UnboundVariableError(
                    f"variable {node.variable!r} is used for both a node and "
                    f"a relationship")
            node_vars.add(node.variable)
    for rel in pattern.rels:
        if rel.variable:
            if rel.variable in rel_vars:
                raise UnboundVariableError(
                    f"relationship variable {rel.variable!r} is bound more than once")
            if rel.variable in node_vars:
                raise UnboundVariableError(
                    f"variable {rel.variable!r} is used for both a node and "
                    f"a relationship")
            rel_vars.add(rel.variable)


def _check_vars(expr, bound: set[str], context: str):
    for value in ast.walk_values(expr):
        if isinstance(value, ast.Variable) and value.name not in bound:
            raise UnboundVariableError(
                f"variable {value.name!r} in {context} is not bound by any pattern")
        if isinstance(value, ast.PropertyAccess) and value.variable not in bound:
            raise UnboundVariableError(
                f"variable {value.variable!r} in {context} is not bound by any pattern")


def _validate(query: ast.Query):
    if query.matches and query.writes:
        raise UnsupportedFeatureError(
            "MERGE/CREATE combined with MATCH (writes are single-statement)")
    node_vars: set[str] = set()
    rel_vars: set[str] = set()
    for clause in query.matches:
        for pattern in clause.patterns:
            _pattern_bindings(pattern, node_vars, rel_vars)
        if clause.where is not None:
            if any(isinstance(v, ast.Aggregate)
                   for v in _iter_aggregates(clause.where)):
                raise QuerySyntaxError("aggregates are not allowed in WHERE")
            _check_vars(clause.where, node_vars | rel_vars, "WHERE")
    for write in query.writes:
        _validate_write(write)
        _pattern_bindings(write.pattern, node_vars, rel_vars)
    if query.returns is not None:
        bound = node_vars | rel_vars
        aliases = set()
        has_aggregate = False
        for item in query.returns.items:
            _check_vars(item.expr if not isinstance(item.expr, ast.Aggregate)
                        else (item.expr.arg or ast.Literal(None)), bound, "RETURN")
            if isinstance(item.expr, ast.Aggregate):
                has_aggregate = True
            if item.alias:
                aliases.add(item.alias)
        rendered_items = {item.expr.render() for item in query.returns.items}
        for order in query.returns.order_by:
            expr = order.expr
            if isinstance(expr, ast.Variable) and expr.name in aliases:
                continue
            if expr.render() in rendered_items:
                continue
            if has_aggregate:
                raise QuerySyntaxError(
                    "ORDER BY in an aggregating query must reference returned "
                    "items or aliases")
            if query.returns.distinct:
                raise QuerySyntaxError(
                    "ORDER BY with DISTINCT must reference returned items or "
                    "aliases")
            if isinstance(expr, ast.Aggregate):
                raise QuerySyntaxError(
                    "ORDER BY may not introduce an aggregate the query does "
                    "not return")
            _check_vars(expr, bound, "ORDER BY")


def _iter_aggregates(expr):
    stack = [expr]
    while stack:
        item = stack.pop()
        if isinstance(item, ast.Aggregate):
            yield item
        elif isinstance(item, ast.BoolOp):
            stack.extend(item.terms)
        elif isinstance(item, ast.NotOp):
            stack.append(item.term)
        elif isinstance(item, ast.Comparison):
            stack.extend((item.left, item.right))
        elif isinstance(item, ast.NullCheck):
            stack.append(item.expr)


def _validate_write(write: ast.WriteClause):
    pattern = write.pattern
    if len(pattern.elements) not in (1, 3):
        raise UnsupportedFeatureError(
            f"{write.kind} pattern must be a single node or a single "
            f"relationship between two nodes")
    for node in pattern.nodes:
        if node.label is None:
            raise QuerySyntaxError(f"{write.kind} node pattern requires a label")
        for _, value in node.properties:
            if not isinstance(value, (ast.Literal, ast.Parameter)):
                raise QuerySyntaxError(
                    f"{write.kind} property values must be literals or parameters")
    if len(pattern.elements) == 3:
        rel = pattern.rels[0]
        if rel.var_length:
            raise QuerySyntaxError(f"{write.kind} cannot create variable-length "
                                   f"relationships")
        if len(rel.types) != 1:
            raise QuerySyntaxError(f"{write.kind} relationship requires exactly "
                                   f"one type")
        if rel.direction == "any":
            raise QuerySyntaxError(f"{write.kind} relationship requires a "
                                   f"direction")


def parse(text: str) -> ast.Query:
    """Parse query text into an AST; raises QuerySyntaxError subclasses."""
    if not text or not text.strip():
        raise QuerySyntaxError("empty query")
    return _Parser(text).parse_query()
