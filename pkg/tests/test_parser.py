"""Lexing/parsing: grammar coverage, round-trip stability, clean rejections."""

import pytest

from kycgraph.cypher import ast, parse
from kycgraph.errors import (QuerySyntaxError, UnboundVariableError,
                             UnsupportedFeatureError)


def test_count_query_shape():
    query = parse("MATCH (c:Customer) RETURN count(c)")
    assert len(query.matches) == 1
    pattern = query.matches[0].patterns[0]
    assert len(pattern.elements) == 1
    assert pattern.elements[0].label == "Customer"
    item = query.returns.items[0]
    assert isinstance(item.expr, ast.Aggregate)
    assert item.expr.func == "count"


def test_parameterized_property_map_and_directed_hop():
    query = parse("MATCH (c:Customer {customer_id:$id})-[:OWNS]->(a:Account) "
                  "RETURN a.account_number")
    pattern = query.matches[0].patterns[0]
    node = pattern.elements[0]
    assert node.properties == (("customer_id", ast.Parameter("id")),)
    rel = pattern.elements[1]
    assert rel.types == ("OWNS",) and rel.direction == "out"
    assert query.parameters == {"id"}


def test_syntax_error_carries_position():
    with pytest.raises(QuerySyntaxError) as exc:
        parse("MATCH (c)-[r:*1..3]->(d) RETURN c")
    assert exc.value.line == 1
    assert exc.value.column > 10


@pytest.mark.parametrize("text", [
    "MATCH (c:Customer) RETURN count(c)",
    "MATCH (c:Customer {customer_id: $id})-[:OWNS]->(a:Account) "
    "RETURN a.account_number AS acct ORDER BY acct DESC SKIP 1 LIMIT 3",
    "MATCH (a)-[r:RELATED_TO|TRANSACTED_WITH]-(b:Customer) "
    "WHERE a.risk_level = 'HIGH' AND NOT b.name STARTS WITH 'Z' "
    "RETURN DISTINCT a, b.name",
    "MATCH (c:Customer)-[:SHARES_ADDRESS_WITH*1..3]->(o) "
    "WHERE o.customer_id <> 'CUST000001' RETURN collect(DISTINCT o.name)",
    "MATCH (c:Customer) WHERE c.high_risk_jurisdiction_count >= 2 "
    "OR c.nationality IN ['US', 'GB'] RETURN c.name, c.risk_level",
    "MATCH (c:Customer) WHERE c.occupation IS NOT NULL "
    "RETURN sum(c.high_risk_jurisdiction_count) AS total",
    "MATCH (a:Account {account_number: 'ACC00000001'})<-[o:OWNS]-(c) "
    "RETURN o, c",
    "MERGE (c:Customer {customer_id: 'CUST000001', name: 'A', "
    "risk_level: 'LOW', nationality: 'US', date_of_birth: '1980-01-01', "
    "occupation: 'x', high_risk_jurisdiction_count: 0})",
])
def test_render_round_trip(text):
    first = parse(text)
    assert parse(first.render()) == first


@pytest.mark.parametrize("text,feature", [
    ("OPTIONAL MATCH (c) RETURN c", "OPTIONAL"),
    ("MATCH (c) WITH c RETURN c", "WITH"),
    ("MATCH (c) RETURN c UNION MATCH (d) RETURN d", "UNION"),
    ("MATCH p = (c)-[:OWNS]->(a) RETURN p", "named path"),
    ("MATCH (c) WHERE c.name =~ 'A.*' RETURN c", "regular-expression"),
    ("MATCH (c)-[:OWNS*]->(a) RETURN c", "without explicit bounds"),
    ("MATCH (c)-[r:OWNS*1..2]->(a) RETURN c", "variable-length"),
    ("MATCH (c) RETURN shortestPath(c)", "function call"),
    ("MATCH (c) MERGE (d:Customer {customer_id: 'CUST000009'})",
     "MERGE/CREATE combined with MATCH"),
])
def test_unsupported_features_are_clean_errors(text, feature):
    with pytest.raises(UnsupportedFeatureError, match=feature):
        parse(text)


def test_unbound_variable_rejected():
    with pytest.raises(UnboundVariableError, match="x"):
        parse("MATCH (c:Customer) WHERE x.name = 'A' RETURN c")
    with pytest.raises(UnboundVariableError):
        parse("MATCH (c:Customer) RETURN d.name")


def test_rel_variable_reuse_rejected():
    with pytest.raises(UnboundVariableError, match="bound more than once"):
        parse("MATCH (a)-[r:OWNS]->(b)-[r:OWNS]->(c) RETURN a")


def test_var_length_bounds_enforced():
    with pytest.raises(QuerySyntaxError, match="bounds"):
        parse("MATCH (a)-[:OWNS*0..2]->(b) RETURN a")
    with pytest.raises(QuerySyntaxError, match="bounds"):
        parse("MATCH (a)-[:OWNS*2..9]->(b) RETURN a")
    with pytest.raises(QuerySyntaxError, match="bounds"):
        parse("MATCH (a)-[:OWNS*3..2]->(b) RETURN a")


def test_aggregate_restrictions():
    with pytest.raises(QuerySyntaxError, match="function call"):
        parse("MATCH (c) WHERE count(c) > 1 RETURN c")
    with pytest.raises(QuerySyntaxError, match=r"sum\(\*\)"):
        parse("MATCH (c) RETURN sum(*)")
    with pytest.raises(QuerySyntaxError, match="must reference returned"):
        parse("MATCH (c)-[:OWNS]->(a) RETURN count(a) ORDER BY c.name")


def test_empty_query_rejected():
    with pytest.raises(QuerySyntaxError):
        parse("   ")


def test_expected_token_set_reported():
    with pytest.raises(QuerySyntaxError) as exc:
        parse("MATCH (c RETURN c")
    assert exc.value.expected


def test_write_pattern_requirements():
    with pytest.raises(QuerySyntaxError, match="label"):
        parse("MERGE (c {customer_id: 'CUST000001'})")
    with pytest.raises(QuerySyntaxError, match="direction"):
        parse("MERGE (a:Customer {customer_id: 'CUST000001'})-"
              "[:RELATED_TO]-(b:Customer {customer_id: 'CUST000002'})")


def test_bare_relationship_forms():
    query = parse("MATCH (a)-->(b) RETURN a")
    rel = query.matches[0].patterns[0].elements[1]
    assert rel.direction == "out" and rel.types == ()
    query = parse("MATCH (a)--(b) RETURN a")
    assert query.matches[0].patterns[0].elements[1].direction == "any"
    query = parse("MATCH (a)<--(b) RETURN a")
    assert query.matches[0].patterns[0].elements[1].direction == "in"
