"""Shared fixtures: hand-built graphs, seeded snapshots, benchmark session."""

import pytest

from kycgraph.store import EdgeMerge, NodeMerge, PropertyGraph
from kycgraph.synth import GenConfig, generate
from kycgraph.tools import ToolKit


def customer_merge(i, **overrides) -> NodeMerge:
    props = {
        "name": f"Test Person {i}",
        "risk_level": "LOW",
        "nationality": "US",
        "date_of_birth": "1980-01-01",
        "occupation": "tester",
        "high_risk_jurisdiction_count": 0,
    }
    props.update(overrides)
    return NodeMerge("Customer", f"CUST{i:06d}", props)


def account_merge(i, **overrides) -> NodeMerge:
    props = {"type": "CHECKING", "balance": 100.0, "status": "OPEN"}
    props.update(overrides)
    return NodeMerge("Account", f"ACC{i:08d}", props)


def txn_merge(i, **overrides) -> NodeMerge:
    props = {"amount": 50.0, "currency": "USD",
             "timestamp": "2025-01-15T12:00:00Z", "risk_score": 0.1,
             "merchant": "Test Shop"}
    props.update(overrides)
    return NodeMerge("Transaction", f"TXN{i:09d}", props)


@pytest.fixture
def tiny_graph() -> PropertyGraph:
    """Three customers, three accounts, two transactions; hand-enumerable."""
    g = PropertyGraph()
    g.merge_nodes([customer_merge(1, risk_level="HIGH"), customer_merge(2),
                   customer_merge(3)])
    g.merge_nodes([account_merge(1), account_merge(2), account_merge(3)])
    g.merge_nodes([txn_merge(1, amount=100.0), txn_merge(2, amount=25.5)])
    g.merge_edges([
        EdgeMerge("OWNS", "Customer", "CUST000001", "Account", "ACC00000001"),
        EdgeMerge("OWNS", "Customer", "CUST000001", "Account", "ACC00000002"),
        EdgeMerge("OWNS", "Customer", "CUST000002", "Account", "ACC00000003"),
        EdgeMerge("PERFORMED", "Account", "ACC00000001", "Transaction",
                  "TXN000000001"),
        EdgeMerge("PERFORMED", "Account", "ACC00000003", "Transaction",
                  "TXN000000002"),
        EdgeMerge("RELATED_TO", "Customer", "CUST000001", "Customer",
                  "CUST000002", {"relationship_kind": "FAMILY"}),
    ])
    return g


SMALL_CONFIG = GenConfig(seed=7, n_customers=60, n_planted_rings=2,
                         ring_size=(3, 4), joint_account_rate=0.02)


@pytest.fixture(scope="session")
def small_synth():
    """Seeded 60-customer graph with manifest; shared read-only."""
    return generate(SMALL_CONFIG)


@pytest.fixture(scope="session")
def small_kit(small_synth) -> ToolKit:
    graph, _manifest = small_synth
    return ToolKit(graph)


BENCHMARK_CONFIG = GenConfig(seed=20_250_809, n_customers=400)
BENCHMARK_QUESTION_SEED = 11


@pytest.fixture(scope="session")
def benchmark():
    """The frozen benchmark snapshot (400 customers) plus 200 questions."""
    from kycgraph.evaluation import generate_questions

    graph, manifest = generate(BENCHMARK_CONFIG)
    kit = ToolKit(graph)
    questions, warnings = generate_questions(
        graph, manifest, seed=BENCHMARK_QUESTION_SEED, n=200, kit=kit)
    return {"graph": graph, "manifest": manifest, "kit": kit,
            "questions": questions, "warnings": warnings}


def make_fuzz_graph(seed: int, n_customers: int = 8) -> PropertyGraph:
    """Seeded synthetic graph small enough (<= 200 nodes) for the naive
    reference interpreter.  Count ranges are stated at reference scale, so
    explicit small totals are scaled back up."""
    factor = 10_000 / n_customers
    config = GenConfig(
        seed=seed,
        n_customers=n_customers,
        n_transactions=(int(50 * factor), int(70 * factor)),
        n_addresses=(int(9 * factor), int(12 * factor)),
        n_planted_rings=0,
        sanction_rate=0.25,
        pep_rate=0.15,
        alert_rate=0.3,
        internal_transfer_share=0.3,
    )
    graph, _ = generate(config)
    assert graph.node_count <= 200, graph.node_count
    return graph


def run_differential(graphs, n_queries: int, seed: int) -> list:
    """Fuzz executor vs reference; returns mismatch descriptions."""
    from kycgraph.cypher.executor import execute
    from kycgraph.cypher.fuzz import QueryFuzzer
    from kycgraph.cypher.reference import reference_execute
    from kycgraph.errors import ResourceLimitError

    mismatches = []
    per_graph = max(1, n_queries // len(graphs))
    for g_index, graph in enumerate(graphs):
        fuzzer = QueryFuzzer(graph, seed=seed + g_index)
        produced = 0
        while produced < per_graph:
            query, params = fuzzer.generate()
            produced += 1
            try:
                mine = execute(query, graph, params,
                               max_rows=1_000_000).to_json()
            except ResourceLimitError:
                continue
            theirs = reference_execute(query, graph, params).to_json()
            if mine != theirs:
                mismatches.append({"graph": g_index,
                                   "query": query.render(),
                                   "params": params})
                if len(mismatches) >= 5:
                    return mismatches
    return mismatches
