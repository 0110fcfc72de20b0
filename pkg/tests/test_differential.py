"""Differential testing: executor vs the naive reference interpreter.

The acceptance suite runs the full 10,000-query campaign; this module runs
a faster slice on every test run plus regression cases for semantics that
once diverged or are easy to get wrong.
"""

import pytest

from conftest import make_fuzz_graph, run_differential
from kycgraph.cypher.executor import execute
from kycgraph.cypher.reference import reference_execute


@pytest.fixture(scope="module")
def fuzz_graphs():
    return [make_fuzz_graph(seed) for seed in (101, 202, 303)]


def test_fuzz_differential_slice(fuzz_graphs):
    mismatches = run_differential(fuzz_graphs, n_queries=750, seed=5)
    assert mismatches == []


REGRESSION_QUERIES = [
    ("MATCH (c:Customer) RETURN c.risk_level, count(c) ORDER BY count(c)", {}),
    ("MATCH (a:Customer)-[r]-(b) RETURN a.customer_id, count(r)", {}),
    ("MATCH (a)-[:PERFORMED]->(t) RETURN min(t.amount), max(t.amount), "
     "avg(t.amount), sum(t.amount)", {}),
    ("MATCH (c:Customer)-[:OWNS]->(x)-[:PERFORMED]->(t) "
     "WHERE t.amount > $floor RETURN DISTINCT c.customer_id ORDER BY "
     "c.customer_id SKIP 1 LIMIT 4", {"floor": 100}),
    ("MATCH (a:Customer)-[:TRANSACTED_WITH*1..3]->(b) "
     "RETURN b.customer_id, count(*)", {}),
    ("MATCH (a:Customer), (b:Sanction) RETURN a.customer_id, b.sanction_id "
     "LIMIT 7", {}),
    ("MATCH (c:Customer) WHERE c.missing IS NULL AND NOT c.risk_level = 'X' "
     "RETURN collect(DISTINCT c.nationality)", {}),
    ("MATCH (c:Customer) MATCH (c)-[:HAS_PHONE]->(p) RETURN c.customer_id, "
     "p.phone_id", {}),
    ("MATCH (x)-[r:RECEIVED]->(y) RETURN y, r ORDER BY y.counterparty_id "
     "LIMIT 5", {}),
    ("MATCH (c:Customer) RETURN c.nationality, collect(c.customer_id), "
     "count(DISTINCT c.risk_level) ORDER BY c.nationality DESC", {}),
]


@pytest.mark.parametrize("text,params", REGRESSION_QUERIES)
def test_regression_queries_agree(fuzz_graphs, text, params):
    for graph in fuzz_graphs:
        mine = execute(text, graph, params, max_rows=1_000_000)
        theirs = reference_execute(text, graph, params)
        assert mine.to_json() == theirs.to_json()


def test_touched_ids_agree(fuzz_graphs):
    graph = fuzz_graphs[0]
    text = ("MATCH (c:Customer)-[:OWNS]->(a)-[:PERFORMED]->(t) "
            "WHERE t.risk_score >= 0.5 RETURN count(t)")
    assert execute(text, graph).touched_ids == \
        reference_execute(text, graph).touched_ids
