"""The twelve tools: query equivalence, cross-tool consistency, errors."""

import random

import pytest

from conftest import account_merge, customer_merge, txn_merge
from kycgraph.errors import (InvalidParamsError, NotFoundError,
                             UnsupportedQuestionError)
from kycgraph.store import EdgeMerge, NodeMerge, PropertyGraph
from kycgraph.tools import ToolKit
from kycgraph.tools.kit import DEFINING_QUERIES


@pytest.fixture(scope="module")
def kit(small_kit):
    return small_kit


def sample_customers(kit, n, seed=13):
    ids = kit.graph.node_ids("Customer")
    return random.Random(seed).sample(ids, min(n, len(ids)))


def test_execute_cypher_count_empty_graph():
    kit = ToolKit(PropertyGraph())
    table = kit.execute_cypher("MATCH (c:Customer) RETURN count(c)")
    assert table["rows"] == [[0]]


def test_execute_cypher_matches_direct_lookup(kit):
    cid = sample_customers(kit, 1)[0]
    table = kit.execute_cypher(
        "MATCH (c:Customer {customer_id: $id}) RETURN c.name", {"id": cid})
    assert table["rows"][0][0] == \
        kit.graph.get_node("Customer", cid).properties["name"]


def test_unknown_customer_not_found(kit):
    with pytest.raises(NotFoundError):
        kit.get_customer_profile("CUST999999")


def test_malformed_id_invalid_params(kit):
    with pytest.raises(InvalidParamsError):
        kit.get_customer_accounts("CUSTX")
    with pytest.raises(InvalidParamsError):
        kit.extract_customer_transactions("CUST000001", lookback_days=-1)
    with pytest.raises(InvalidParamsError):
        kit.find_mutual_counterparties(["CUST000001"])
    with pytest.raises(InvalidParamsError):
        kit.aggregate_customer_transactions("CUST000001", interval="hourly")
    with pytest.raises(InvalidParamsError):
        kit.find_customer_rings(min_size=1)


def test_accounts_equal_defining_query(kit):
    for cid in sample_customers(kit, 10):
        listing = kit.get_customer_accounts(cid)
        table = kit.execute_cypher(DEFINING_QUERIES["accounts"], {"id": cid})
        assert listing["total_accounts"] == len(listing["accounts"]) == \
            len(table["rows"])
        for entry, row in zip(listing["accounts"], table["rows"]):
            assert [entry["account_number"], entry["type"], entry["balance"],
                    entry["status"]] == row[:4]


def test_profile_is_union_of_subtools(kit):
    for cid in sample_customers(kit, 8):
        profile = kit.get_customer_profile(cid)
        assert profile["accounts"] == kit.get_customer_accounts(cid)
        assert profile["sanctions"] == kit.get_customer_sanctions(cid)
        for field in ("addresses", "related_parties", "alerts"):
            assert isinstance(profile[field], list)
        assert profile["high_risk_txn_count"] == kit.execute_cypher(
            DEFINING_QUERIES["high_risk_txns"],
            {"id": cid, "hrj": kit.high_risk_jurisdictions})["rows"][0][0]


def test_profile_empty_collections_for_clean_customer():
    g = PropertyGraph()
    g.merge_nodes([customer_merge(1)])
    profile = ToolKit(g).get_customer_profile("CUST000001")
    assert profile["addresses"] == []
    assert profile["related_parties"] == []
    assert profile["alerts"] == []
    assert profile["sanctions"]["sanction_matches"] == []
    assert profile["accounts"]["accounts"] == []
    assert profile["high_risk_txn_count"] == 0


def test_profile_matches_manifest(small_synth, kit):
    _, manifest = small_synth
    for cid in sample_customers(kit, 10):
        facts = manifest.customers[cid]
        profile = kit.get_customer_profile(cid)
        assert profile["accounts"]["total_accounts"] == facts.accounts
        assert len(profile["sanctions"]["sanction_matches"]) == facts.sanctions
        assert len(profile["sanctions"]["pep_links"]) == facts.peps
        assert len(profile["alerts"]) == facts.alerts
        assert profile["customer"]["risk_level"] == facts.risk_level


def test_fig_style_dossier_counts():
    """A customer with 2 sanction matches, 1 PEP link and 5 alerts reports
    exactly those counts through the profile tool."""
    g = PropertyGraph()
    g.merge_nodes([customer_merge(1, risk_level="MEDIUM")])
    g.merge_nodes([
        NodeMerge("Sanction", f"SANC{i:05d}",
                  {"list_name": "OFAC_SDN", "entity_name": f"Entity {i}"})
        for i in (1, 2)])
    g.merge_nodes([NodeMerge("PEP", "PEP00001",
                             {"name": "P", "position": "mayor",
                              "country": "US"})])
    g.merge_nodes([
        NodeMerge("Alert", f"ALRT{i:07d}",
                  {"alert_type": "VELOCITY", "status": "OPEN",
                   "created_date": "2025-01-01"}) for i in range(1, 6)])
    g.merge_edges(
        [EdgeMerge("MATCHES_SANCTION", "Customer", "CUST000001", "Sanction",
                   f"SANC{i:05d}") for i in (1, 2)] +
        [EdgeMerge("LINKED_TO_PEP", "Customer", "CUST000001", "PEP",
                   "PEP00001")] +
        [EdgeMerge("HAS_ALERT", "Customer", "CUST000001", "Alert",
                   f"ALRT{i:07d}") for i in range(1, 6)])
    kit = ToolKit(g)
    profile = kit.get_customer_profile("CUST000001")
    assert profile["customer"]["risk_level"] == "MEDIUM"
    assert len(profile["sanctions"]["sanction_matches"]) == 2
    assert len(profile["sanctions"]["pep_links"]) == 1
    assert len(profile["alerts"]) == 5
    risk = kit.get_customer_risk_summary("CUST000001")
    assert "sanction-list match" in risk["risk_factors"]
    assert "politically exposed person link" in risk["risk_factors"]
    assert "open compliance alert" in risk["risk_factors"]


def test_risk_summary_clean_customer_has_no_factors():
    g = PropertyGraph()
    g.merge_nodes([customer_merge(1)])
    risk = ToolKit(g).get_customer_risk_summary("CUST000001")
    assert risk["risk_factors"] == []


def test_sanction_rate_recovered_by_full_scan(small_synth, kit):
    _, manifest = small_synth
    flagged = sum(
        1 for cid in kit.graph.node_ids("Customer")
        if kit.get_customer_sanctions(cid)["sanction_matches"])
    assert flagged == manifest.counts["sanctioned_customers"]


def test_extract_zero_lookback_empty(kit):
    cid = sample_customers(kit, 1)[0]
    extract = kit.extract_customer_transactions(cid, lookback_days=0)
    assert extract["transactions"] == []
    assert extract["summary"]["count"] == 0
    assert extract["summary"]["total_amount"] == 0


def test_extract_full_window_matches_manifest(small_synth, kit):
    _, manifest = small_synth
    for cid in sample_customers(kit, 8, seed=5):
        extract = kit.extract_customer_transactions(cid, lookback_days=800)
        assert extract["summary"]["count"] == \
            manifest.customers[cid].transactions


def test_extract_summary_recomputable(kit):
    cid = max(kit.graph.node_ids("Customer"),
              key=lambda c: len(kit.extract_customer_transactions(
                  c, lookback_days=800)["transactions"]))
    extract = kit.extract_customer_transactions(cid, lookback_days=800)
    amounts = [t["amount"] for t in extract["transactions"]]
    assert extract["summary"]["total_amount"] == round(sum(amounts), 2)
    assert extract["summary"]["max_amount"] == max(amounts)
    assert extract["summary"]["high_risk_count"] == sum(
        1 for t in extract["transactions"] if t["risk_score"] >= 0.7)


def test_trace_shared_accounts_joint_fixture():
    g = PropertyGraph()
    g.merge_nodes([customer_merge(1), customer_merge(2, risk_level="HIGH")])
    g.merge_nodes([account_merge(1)])
    g.merge_edges([
        EdgeMerge("OWNS", "Customer", "CUST000001", "Account", "ACC00000001"),
        EdgeMerge("OWNS", "Customer", "CUST000002", "Account", "ACC00000001"),
    ])
    kit = ToolKit(g)
    trace = kit.trace_shared_accounts("CUST000001")
    assert [c["customer_id"] for c in trace["co_holders"]] == ["CUST000002"]
    assert trace["shared_account_count"] == 1
    # sole-owner world: the other direction exists, nothing else
    assert kit.trace_shared_accounts("CUST000002")["co_holders"][0][
        "customer_id"] == "CUST000001"


def test_trace_flags_equal_sanctions_tool(small_synth, kit):
    for cid in sample_customers(kit, 6, seed=3):
        trace = kit.trace_shared_accounts(cid)
        for holder in trace["co_holders"]:
            exposure = kit.get_customer_sanctions(holder["customer_id"])
            assert holder["sanction_match_count"] == \
                len(exposure["sanction_matches"])
            assert holder["pep_link_count"] == len(exposure["pep_links"])
            assert holder["flagged"] == (exposure["watchlist_total"] > 0)


def test_mutual_counterparties_validation_and_oracle(kit):
    with pytest.raises(InvalidParamsError):
        kit.find_mutual_counterparties(["CUST000001", "CUST000001"])
    ids = sample_customers(kit, 4, seed=21)
    result = kit.find_mutual_counterparties(ids, window_days=800)
    # nested-loop oracle over the extract tool
    per_customer = {}
    for cid in ids:
        extract = kit.extract_customer_transactions(cid, lookback_days=800)
        cptys = set()
        for txn in extract["transactions"]:
            for target in txn["counterparties"]:
                if target["kind"] == "Counterparty":
                    cptys.add(target["id"])
        per_customer[cid] = cptys
    expected = {}
    for cid, cptys in per_customer.items():
        for cpty in cptys:
            expected.setdefault(cpty, set()).add(cid)
    expected = {cpty: members for cpty, members in expected.items()
                if len(members) >= 2}
    got = {entry["counterparty_id"]: set(entry["customers"])
           for entry in result["mutual_counterparties"]}
    assert got == expected


def test_aggregate_partition_identity(kit):
    cid = sample_customers(kit, 1, seed=8)[0]
    for interval in ("daily", "weekly", "monthly"):
        series = kit.aggregate_customer_transactions(
            cid, interval=interval, lookback_days=400)
        extract = kit.extract_customer_transactions(cid, lookback_days=400)
        assert sum(b["txn_count"] for b in series["buckets"]) == \
            extract["summary"]["count"]
        assert round(sum(b["total_amount"] for b in series["buckets"]), 2) \
            == pytest.approx(extract["summary"]["total_amount"], abs=0.05)


def test_aggregate_no_transactions_all_zero_series():
    g = PropertyGraph()
    g.merge_nodes([customer_merge(1)])
    series = ToolKit(g, now="2025-06-30T00:00:00Z") \
        .aggregate_customer_transactions("CUST000001", interval="monthly",
                                         lookback_days=90)
    assert [b["start"] for b in series["buckets"]] == \
        ["2025-04-01", "2025-05-01", "2025-06-01"]
    assert all(b["txn_count"] == 0 and b["total_amount"] == 0
               for b in series["buckets"])


def test_aggregate_monthly_matches_brute_force(kit):
    cid = sample_customers(kit, 1, seed=30)[0]
    series = kit.aggregate_customer_transactions(cid, interval="monthly",
                                                 lookback_days=800)
    extract = kit.extract_customer_transactions(cid, lookback_days=800)
    brute = {}
    for txn in extract["transactions"]:
        bucket = txn["timestamp"][:7] + "-01"
        brute.setdefault(bucket, [0.0, 0])
        brute[bucket][0] += txn["amount"]
        brute[bucket][1] += 1
    for bucket in series["buckets"]:
        total, count = brute.get(bucket["start"], (0.0, 0))
        assert bucket["txn_count"] == count
        assert bucket["total_amount"] == pytest.approx(round(total, 2))


def test_rings_empty_when_no_mechanism_edges():
    g = PropertyGraph()
    g.merge_nodes([customer_merge(1), customer_merge(2)])
    assert ToolKit(g).find_customer_rings()["rings"] == []


def test_ring_ordering_and_limit(kit):
    report = kit.find_customer_rings(min_size=2, limit=3)
    sizes = [ring["size"] for ring in report["rings"]]
    assert sizes == sorted(sizes, reverse=True)
    assert len(report["rings"]) <= 3


def test_rings_match_union_find_oracle(kit):
    report = kit.find_customer_rings(min_size=2, limit=10_000)
    # independent union-find over the store's raw edges
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    members = set()
    for edge in kit.graph.edges():
        if edge.edge_type in ("SHARES_ADDRESS_WITH", "SHARES_PHONE_WITH",
                              "TRANSACTED_WITH", "RELATED_TO"):
            a, b = edge.src[1], edge.dst[1]
            members.update((a, b))
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[rb] = ra
    expected = {}
    for m in members:
        expected.setdefault(find(m), set()).add(m)
    expected_sets = {frozenset(v) for v in expected.values() if len(v) >= 2}
    got = {frozenset(ring["members"]) for ring in report["rings"]}
    assert got == expected_sets


def test_summarize_is_composition(kit):
    cid = sample_customers(kit, 1, seed=77)[0]
    summary = kit.summarize_customer_risk_profile(cid)
    assert summary["profile"] == kit.get_customer_profile(cid)
    assert summary["risk"] == kit.get_customer_risk_summary(cid)
    assert summary["transaction_summary"] == \
        kit.extract_customer_transactions(cid, lookback_days=365)["summary"]
    assert summary["monthly_activity"] == \
        kit.aggregate_customer_transactions(cid, interval="monthly",
                                            lookback_days=365)["buckets"]
    assert summary["shared_accounts"] == kit.trace_shared_accounts(cid)


def test_summarize_empty_history():
    g = PropertyGraph()
    g.merge_nodes([customer_merge(1)])
    summary = ToolKit(g, now="2025-06-30T00:00:00Z") \
        .summarize_customer_risk_profile("CUST000001")
    assert summary["transaction_summary"]["count"] == 0
    assert summary["rings"] == []
    assert summary["shared_accounts"]["co_holders"] == []


def test_text_to_cypher_matches_tool_five(kit):
    cid = sample_customers(kit, 1, seed=41)[0]
    out = kit.text_to_cypher(f"List all accounts owned by customer {cid}.")
    accounts = kit.get_customer_accounts(cid)
    numbers = [row[0] for row in out["result"]["rows"]]
    assert numbers == [a["account_number"] for a in accounts["accounts"]]


def test_text_to_cypher_single_property(kit):
    cid = sample_customers(kit, 1, seed=42)[0]
    out = kit.text_to_cypher(f"What is the nationality of customer {cid}?")
    assert out["result"]["rows"][0][0] == \
        kit.graph.get_node("Customer", cid).properties["nationality"]
    assert "MATCH" in out["query"]


def test_text_to_cypher_gibberish_rejected(kit):
    with pytest.raises(UnsupportedQuestionError):
        kit.text_to_cypher("please write a poem about compliance")


def test_execute_cypher_explain_prefix(kit):
    out = kit.execute_cypher(
        "EXPLAIN MATCH (c:Customer {customer_id: $id})-[:OWNS]->(a) RETURN a")
    assert out["columns"] == ["step", "detail"]
    assert out["rows"][0][0] == "NodeIndexSeek"
    assert "NodeIndexSeek" in out["plan_text"]
    assert out["touched_ids"] == []  # nothing executed


def test_tool_outputs_deterministic(kit):
    cid = sample_customers(kit, 1, seed=50)[0]
    import json
    first = json.dumps(kit.summarize_customer_risk_profile(cid),
                       sort_keys=True)
    second = json.dumps(kit.summarize_customer_risk_profile(cid),
                        sort_keys=True)
    assert first == second
