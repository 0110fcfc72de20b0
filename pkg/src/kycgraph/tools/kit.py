"""Twelve typed investigation tools over the KYC graph.

Every tool is sugar over documented queries: it runs its defining queries
through the query engine and reshapes rows into a stable JSON payload, so
tool output can never disagree with what an analyst would get running the
same queries by hand.  The defining queries appear verbatim in each
docstring and in ``DEFINING_QUERIES`` for the equivalence tests.

Reproducibility: look-back windows are anchored at an explicit ``now`` that
defaults to the newest transaction timestamp in the graph, never the wall
clock.
"""

from __future__ import annotations

import threading
from datetime import datetime, timezone, timedelta

from ..cypher.executor import DEFAULT_MAX_BINDINGS, DEFAULT_MAX_ROWS, execute
from ..errors import InvalidParamsError, NotFoundError, UnsupportedQuestionError
from .. import schema
from ..store import PropertyGraph
from ..synth.vocab import HIGH_RISK_JURISDICTIONS

TOOL_NAMES = (
    "execute_cypher",
    "text_to_cypher",
    "get_customer_profile",
    "get_customer_risk_summary",
    "get_customer_accounts",
    "get_customer_sanctions",
    "find_customer_rings",
    "extract_customer_transactions",
    "trace_shared_accounts",
    "find_mutual_counterparties",
    "aggregate_customer_transactions",
    "summarize_customer_risk_profile",
)

RING_MECHANISM_EDGES = ("SHARES_ADDRESS_WITH", "SHARES_PHONE_WITH",
                        "TRANSACTED_WITH", "RELATED_TO")

HIGH_RISK_SCORE = 0.7  # transactions at or above this score count as high risk

DEFINING_QUERIES = {
    "accounts": ("MATCH (c:Customer {customer_id: $id})-[:OWNS]->(a:Account) "
                 "RETURN a.account_number, a.type, a.balance, a.status, "
                 "a.products ORDER BY a.account_number"),
    "addresses": ("MATCH (c:Customer {customer_id: $id})-[:LIVES_AT]->"
                  "(ad:Address) RETURN ad.address_id, ad.street, ad.city, "
                  "ad.country ORDER BY ad.address_id"),
    "related_parties": ("MATCH (c:Customer {customer_id: $id})-[r:RELATED_TO]-"
                        "(o:Customer) RETURN DISTINCT o.customer_id, o.name, "
                        "r.relationship_kind ORDER BY o.customer_id"),
    "sanctions": ("MATCH (c:Customer {customer_id: $id})-[m:MATCHES_SANCTION]"
                  "->(s:Sanction) RETURN s.sanction_id, s.list_name, "
                  "s.entity_name, m.match_score, m.matched_name "
                  "ORDER BY s.sanction_id"),
    "peps": ("MATCH (c:Customer {customer_id: $id})-[l:LINKED_TO_PEP]->"
             "(p:PEP) RETURN p.pep_id, p.name, p.position, p.country, "
             "l.link_type ORDER BY p.pep_id"),
    "alerts": ("MATCH (c:Customer {customer_id: $id})-[:HAS_ALERT]->(al:Alert)"
               " RETURN al.alert_id, al.alert_type, al.status, "
               "al.created_date ORDER BY al.alert_id"),
    "high_risk_txns": ("MATCH (c:Customer {customer_id: $id})-[:OWNS]->"
                       "(a:Account)-[:PERFORMED]->(t:Transaction)-[:RECEIVED]"
                       "->(x:Counterparty) WHERE x.jurisdiction IN $hrj "
                       "RETURN count(t)"),
    "transactions": ("MATCH (c:Customer {customer_id: $id})-[:OWNS]->"
                     "(a:Account)-[:PERFORMED]->(t:Transaction)-[:RECEIVED]->"
                     "(x) WHERE t.timestamp >= $since AND t.timestamp <= $now "
                     "RETURN t.txn_id, t.timestamp, t.amount, t.currency, "
                     "t.risk_score, t.merchant, a.account_number, x "
                     "ORDER BY t.timestamp, t.txn_id"),
    "co_holders": ("MATCH (c:Customer {customer_id: $id})-[:OWNS]->"
                   "(a:Account)<-[:OWNS]-(o:Customer) WHERE "
                   "o.customer_id <> $id RETURN a.account_number, "
                   "o.customer_id, o.name, o.risk_level "
                   "ORDER BY a.account_number, o.customer_id"),
    "counterparties_in_window": (
        "MATCH (c:Customer {customer_id: $id})-[:OWNS]->(a:Account)-"
        "[:PERFORMED]->(t:Transaction)-[:RECEIVED]->(x:Counterparty) "
        "WHERE t.timestamp >= $since AND t.timestamp <= $now "
        "RETURN DISTINCT x.counterparty_id, x.name, x.jurisdiction "
        "ORDER BY x.counterparty_id"),
    "ring_edges": ("MATCH (a:Customer)-[r:{etype}]->(b:Customer) "
                   "RETURN a.customer_id, b.customer_id "
                   "ORDER BY a.customer_id, b.customer_id"),
    "customer": ("MATCH (c:Customer {customer_id: $id}) RETURN c.customer_id, "
                 "c.name, c.date_of_birth, c.nationality, c.occupation, "
                 "c.risk_level, c.high_risk_jurisdiction_count"),
}

_DAY = 86_400
_TS_FORMAT = "%Y-%m-%dT%H:%M:%SZ"


def _to_ts(text: str) -> int:
    return int(datetime.strptime(text, _TS_FORMAT)
               .replace(tzinfo=timezone.utc).timestamp())


def _from_ts(ts: int) -> str:
    return datetime.fromtimestamp(ts, tz=timezone.utc).strftime(_TS_FORMAT)


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        root = self.parent.setdefault(x, x)
        while root != self.parent[root]:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # deterministic: smaller id becomes the root
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


class ToolKit:
    """Callable facade over the graph for a single snapshot.

    Read-only by construction: no tool mutates the graph, and
    execute_cypher refuses writes unless the kit was built with
    ``allow_writes=True`` (the ingestion CLI path).
    """

    def __init__(self, graph: PropertyGraph, *,
                 high_risk_jurisdictions: tuple = HIGH_RISK_JURISDICTIONS,
                 allow_writes: bool = False,
                 max_bindings: int = DEFAULT_MAX_BINDINGS,
                 max_rows: int = DEFAULT_MAX_ROWS,
                 now: str | None = None):
        self.graph = graph
        self.high_risk_jurisdictions = list(high_risk_jurisdictions)
        self.allow_writes = allow_writes
        self.max_bindings = max_bindings
        self.max_rows = max_rows
        self._now = now
        self._local = threading.local()

    # -- shared plumbing ---------------------------------------------------------

    def _note_touched(self, record_ids) -> None:
        bucket = getattr(self._local, "touched", None)
        if bucket is not None:
            bucket.update(record_ids)

    @property
    def now(self) -> str:
        """Window anchor: newest transaction timestamp (cached), not wall
        clock, so replays are stable."""
        if self._now is None:
            newest = ""
            for record in self.graph.nodes("Transaction"):
                ts = record.properties.get("timestamp", "")
                if isinstance(ts, str) and ts > newest:
                    newest = ts
            self._now = newest or "1970-01-01T00:00:00Z"
        return self._now

    def _run(self, query: str, params: dict | None = None):
        table = execute(query, self.graph, params, write=False,
                        max_bindings=self.max_bindings, max_rows=self.max_rows)
        self._note_touched(table.touched_ids)
        return table

    def _require_customer(self, customer_id) -> str:
        if not isinstance(customer_id, str) or \
                schema.check_business_id("Customer", customer_id):
            raise InvalidParamsError(
                f"malformed customer id {customer_id!r}", field="customer_id")
        if not self.graph.has_node("Customer", customer_id):
            raise NotFoundError(f"no Customer node with id {customer_id!r}")
        return customer_id

    def _window(self, lookback_days, now: str | None) -> tuple[str, str]:
        if not isinstance(lookback_days, int) or isinstance(lookback_days, bool) \
                or lookback_days < 0:
            raise InvalidParamsError(
                f"lookback_days must be a non-negative integer, got "
                f"{lookback_days!r}", field="lookback_days")
        anchor = now or self.now
        since = _from_ts(_to_ts(anchor) - lookback_days * _DAY)
        return since, anchor

    # -- tool 1 -------------------------------------------------------------------

    def execute_cypher(self, query: str, params: dict | None = None) -> dict:
        """Run an explicit query and return the raw result table.

        An ``EXPLAIN `` prefix returns the query plan as a two-column table
        instead of executing anything.
        """
        if not isinstance(query, str):
            raise InvalidParamsError("query must be a string", field="query")
        stripped = query.lstrip()
        if stripped[:8].upper() == "EXPLAIN ":
            from ..cypher.planner import explain
            plan = explain(stripped[8:])
            return {"columns": ["step", "detail"],
                    "rows": [[s["op"], s["detail"]] for s in plan["steps"]],
                    "summary": {"rows_returned": len(plan["steps"]),
                                "nodes_touched": 0},
                    "touched_ids": [], "plan_text": plan["text"]}
        table = execute(query, self.graph, params, write=self.allow_writes,
                        max_bindings=self.max_bindings, max_rows=self.max_rows)
        self._note_touched(table.touched_ids)
        return table.to_dict()

    # -- tool 2 -------------------------------------------------------------------

    def text_to_cypher(self, question: str) -> dict:
        """Translate a natural-language question into a query, run it, and
        return both.

        Deterministic backend: a rule-based matcher over the benchmark
        question templates; anything it cannot match is an
        unsupported-question error, never a guess.
        """
        from ..templates import match_question  # local import: no cycle

        if not isinstance(question, str) or not question.strip():
            raise InvalidParamsError("question must be a non-empty string",
                                     field="question")
        matched = match_question(question, self)
        if matched is None:
            raise UnsupportedQuestionError(
                f"no deterministic translation for: {question!r}")
        template, slots = matched
        queries = template.build_queries(slots, self)
        if len(queries) != 1:
            raise UnsupportedQuestionError(
                f"question maps to a {len(queries)}-query investigation; "
                f"run it through the agent instead")
        text, params = queries[0]
        table = self._run(text, params)
        return {"query": text, "params": params, "result": table.to_dict()}

    # -- tool 3 -------------------------------------------------------------------

    def get_customer_profile(self, customer_id: str) -> dict:
        """Comprehensive dossier; union of the account/sanction tools plus
        address, related-party and alert queries (see DEFINING_QUERIES)."""
        cid = self._require_customer(customer_id)
        base = self._run(DEFINING_QUERIES["customer"], {"id": cid})
        row = base.rows[0]
        addresses = self._run(DEFINING_QUERIES["addresses"], {"id": cid})
        related = self._run(DEFINING_QUERIES["related_parties"], {"id": cid})
        alerts = self._run(DEFINING_QUERIES["alerts"], {"id": cid})
        high_risk = self._run(DEFINING_QUERIES["high_risk_txns"],
                              {"id": cid, "hrj": self.high_risk_jurisdictions})
        return {
            "customer": {
                "customer_id": row[0], "name": row[1], "date_of_birth": row[2],
                "nationality": row[3], "occupation": row[4],
                "risk_level": row[5], "high_risk_jurisdiction_count": row[6],
            },
            "addresses": [
                {"address_id": r[0], "street": r[1], "city": r[2],
                 "country": r[3]} for r in addresses.rows],
            "accounts": self.get_customer_accounts(cid),
            "related_parties": [
                {"customer_id": r[0], "name": r[1], "relationship_kind": r[2]}
                for r in related.rows],
            "sanctions": self.get_customer_sanctions(cid),
            "alerts": [
                {"alert_id": r[0], "alert_type": r[1], "status": r[2],
                 "created_date": r[3]} for r in alerts.rows],
            "high_risk_txn_count": high_risk.scalar(),
        }

    # -- tool 4 -------------------------------------------------------------------

    def get_customer_risk_summary(self, customer_id: str) -> dict:
        """Risk snapshot.  High-risk factor rule (artifact decision): a
        sanction match, a PEP link, at least one OPEN alert, any high-risk-
        jurisdiction transactions, or an overall HIGH risk level."""
        cid = self._require_customer(customer_id)
        base = self._run(DEFINING_QUERIES["customer"], {"id": cid})
        row = base.rows[0]
        exposure = self.get_customer_sanctions(cid)
        alerts = self._run(DEFINING_QUERIES["alerts"], {"id": cid})
        open_alerts = [r for r in alerts.rows if r[2] == "OPEN"]
        hr_txns = self._run(DEFINING_QUERIES["high_risk_txns"],
                            {"id": cid, "hrj": self.high_risk_jurisdictions}
                            ).scalar()
        factors = []
        if exposure["sanction_matches"]:
            factors.append("sanction-list match")
        if exposure["pep_links"]:
            factors.append("politically exposed person link")
        if open_alerts:
            factors.append("open compliance alert")
        if hr_txns:
            factors.append("high-risk jurisdiction transactions")
        if row[5] == "HIGH":
            factors.append("overall risk level HIGH")
        return {
            "customer_id": cid,
            "name": row[1],
            "risk_level": row[5],
            "risk_factors": factors,
            "sanctions": exposure["sanction_matches"],
            "peps": exposure["pep_links"],
            "open_alert_count": len(open_alerts),
            "alert_count": len(alerts.rows),
            "high_risk_jurisdiction_txn_count": hr_txns,
            "declared_high_risk_jurisdiction_count": row[6],
        }

    # -- tool 5 -------------------------------------------------------------------

    def get_customer_accounts(self, customer_id: str) -> dict:
        cid = self._require_customer(customer_id)
        base = self._run(DEFINING_QUERIES["customer"], {"id": cid})
        table = self._run(DEFINING_QUERIES["accounts"], {"id": cid})
        accounts = [{"account_number": r[0], "type": r[1], "balance": r[2],
                     "status": r[3], "products": r[4] if r[4] is not None else []}
                    for r in table.rows]
        return {"customer_id": cid, "name": base.rows[0][1],
                "total_accounts": len(accounts), "accounts": accounts}

    # -- tool 6 -------------------------------------------------------------------

    def get_customer_sanctions(self, customer_id: str) -> dict:
        cid = self._require_customer(customer_id)
        sanctions = self._run(DEFINING_QUERIES["sanctions"], {"id": cid})
        peps = self._run(DEFINING_QUERIES["peps"], {"id": cid})
        matches = [{"sanction_id": r[0], "list_name": r[1], "entity_name": r[2],
                    "match_score": r[3], "matched_name": r[4]}
                   for r in sanctions.rows]
        links = [{"pep_id": r[0], "name": r[1], "position": r[2],
                  "country": r[3], "link_type": r[4]} for r in peps.rows]
        return {"customer_id": cid, "sanction_matches": matches,
                "pep_links": links,
                "watchlist_total": len(matches) + len(links)}

    # -- tool 7 -------------------------------------------------------------------

    def find_customer_rings(self, min_size: int = 3,
                            mechanisms: list | None = None,
                            limit: int = 20) -> dict:
        """Connected components of the customer projection restricted to the
        selected mechanism edge types, size >= min_size, ordered by size
        descending then smallest member id."""
        if not isinstance(min_size, int) or isinstance(min_size, bool) or \
                min_size < 2:
            raise InvalidParamsError("min_size must be an integer >= 2",
                                     field="min_size")
        if not isinstance(limit, int) or isinstance(limit, bool) or limit < 1:
            raise InvalidParamsError("limit must be a positive integer",
                                     field="limit")
        selected = tuple(mechanisms) if mechanisms else RING_MECHANISM_EDGES
        unknown = [m for m in selected if m not in RING_MECHANISM_EDGES]
        if unknown:
            raise InvalidParamsError(
                f"unknown ring mechanisms {unknown}; expected a subset of "
                f"{list(RING_MECHANISM_EDGES)}", field="mechanisms")
        uf = _UnionFind()
        edge_types_seen: dict = {}
        for etype in selected:
            table = self._run(
                DEFINING_QUERIES["ring_edges"].replace("{etype}", etype))
            for a, b in table.rows:
                uf.union(a, b)
                edge_types_seen.setdefault(a, set()).add(etype)
                edge_types_seen.setdefault(b, set()).add(etype)
        components: dict = {}
        for member in edge_types_seen:
            components.setdefault(uf.find(member), []).append(member)
        reports = []
        for members in components.values():
            if len(members) < min_size:
                continue
            members = sorted(members)
            mechanisms_present = sorted(
                {etype for m in members for etype in edge_types_seen[m]})
            reports.append({
                "members": members,
                "size": len(members),
                "mechanisms": mechanisms_present,
                **self._ring_metadata(members),
            })
        reports.sort(key=lambda r: (-r["size"], r["members"][0]))
        reports = reports[:limit]
        for i, report in enumerate(reports, start=1):
            report["ring_id"] = f"ring-{i:03d}"
        return {"ring_count": len(reports),
                "min_size": min_size,
                "mechanisms_searched": list(selected),
                "rings": reports}

    def _ring_metadata(self, members: list) -> dict:
        member_set = set(members)
        shared_addresses, shared_phones = [], []
        earliest = None
        for cid in members:
            key = ("Customer", cid)
            for edge in self.graph.out_edges(key, "LIVES_AT"):
                residents = {e.src[1] for e in
                             self.graph.in_edges(edge.dst, "LIVES_AT")}
                if len(residents & member_set) >= 2:
                    if edge.dst[1] not in shared_addresses:
                        shared_addresses.append(edge.dst[1])
                    since = edge.properties.get("since")
                    if isinstance(since, str) and (earliest is None or
                                                   since < earliest):
                        earliest = since
            for edge in self.graph.out_edges(key, "HAS_PHONE"):
                holders = {e.src[1] for e in
                           self.graph.in_edges(edge.dst, "HAS_PHONE")}
                if len(holders & member_set) >= 2 and \
                        edge.dst[1] not in shared_phones:
                    shared_phones.append(edge.dst[1])
        self._note_touched(shared_addresses)
        self._note_touched(shared_phones)
        return {"shared_addresses": sorted(shared_addresses),
                "shared_phones": sorted(shared_phones),
                "earliest_link": earliest}

    # -- tool 8 -------------------------------------------------------------------

    def extract_customer_transactions(self, customer_id: str,
                                      lookback_days: int = 90,
                                      now: str | None = None) -> dict:
        """Transactions performed by the customer's accounts within
        [now - lookback, now], plus summary statistics recomputable from the
        listed rows."""
        cid = self._require_customer(customer_id)
        since, anchor = self._window(lookback_days, now)
        table = self._run(DEFINING_QUERIES["transactions"],
                          {"id": cid, "since": since, "now": anchor})
        by_txn: dict = {}
        for r in table.rows:
            entry = by_txn.setdefault(r[0], {
                "txn_id": r[0], "timestamp": r[1], "amount": r[2],
                "currency": r[3], "risk_score": r[4], "merchant": r[5],
                "account_number": r[6], "counterparties": []})
            target = r[7]
            label = target.get("label")
            target_id = target.get("id")
            name = target["props"].get("name") if label == "Counterparty" \
                else target["props"].get("account_number")
            jurisdiction = target["props"].get("jurisdiction")
            entry["counterparties"].append(
                {"kind": label, "id": target_id, "name": name,
                 "jurisdiction": jurisdiction})
        txns = [by_txn[k] for k in sorted(by_txn,
                                          key=lambda t: (by_txn[t]["timestamp"], t))]
        amounts = [t["amount"] for t in txns]
        high_risk = [t for t in txns if t["risk_score"] >= HIGH_RISK_SCORE]
        summary = {
            "count": len(txns),
            "total_amount": round(sum(amounts), 2) if amounts else 0,
            "mean_amount": round(sum(amounts) / len(amounts), 2) if amounts else None,
            "max_amount": max(amounts) if amounts else None,
            "high_risk_count": len(high_risk),
            "high_risk_score_threshold": HIGH_RISK_SCORE,
        }
        return {"customer_id": cid, "window": {"since": since, "now": anchor},
                "transactions": txns, "summary": summary}

    # -- tool 9 -------------------------------------------------------------------

    def trace_shared_accounts(self, customer_id: str) -> dict:
        """Co-holders of the customer's accounts with their sanction/PEP
        flags (flags computed exactly as get_customer_sanctions)."""
        cid = self._require_customer(customer_id)
        table = self._run(DEFINING_QUERIES["co_holders"], {"id": cid})
        co_holders = []
        for account_number, other_id, name, risk_level in table.rows:
            exposure = self.get_customer_sanctions(other_id)
            co_holders.append({
                "account_number": account_number,
                "customer_id": other_id,
                "name": name,
                "risk_level": risk_level,
                "sanction_match_count": len(exposure["sanction_matches"]),
                "pep_link_count": len(exposure["pep_links"]),
                "flagged": exposure["watchlist_total"] > 0,
            })
        return {"customer_id": cid, "shared_account_count":
                len({c["account_number"] for c in co_holders}),
                "co_holders": co_holders}

    # -- tool 10 ------------------------------------------------------------------

    def find_mutual_counterparties(self, customer_ids: list,
                                   window_days: int = 365,
                                   now: str | None = None) -> dict:
        """Counterparties that transacted with at least two of the given
        customers inside the window."""
        if not isinstance(customer_ids, (list, tuple)) or len(customer_ids) < 2:
            raise InvalidParamsError(
                "customer_ids must list at least two customers",
                field="customer_ids")
        if len(set(customer_ids)) != len(customer_ids):
            raise InvalidParamsError("customer_ids must be distinct",
                                     field="customer_ids")
        ids = [self._require_customer(cid) for cid in customer_ids]
        since, anchor = self._window(window_days, now)
        seen: dict = {}
        for cid in ids:
            table = self._run(DEFINING_QUERIES["counterparties_in_window"],
                              {"id": cid, "since": since, "now": anchor})
            for cpty_id, name, jurisdiction in table.rows:
                entry = seen.setdefault(cpty_id, {
                    "counterparty_id": cpty_id, "name": name,
                    "jurisdiction": jurisdiction, "customers": []})
                entry["customers"].append(cid)
        mutual = [entry for entry in seen.values()
                  if len(entry["customers"]) >= 2]
        for entry in mutual:
            entry["customers"] = sorted(entry["customers"])
            entry["customer_count"] = len(entry["customers"])
        mutual.sort(key=lambda e: e["counterparty_id"])
        return {"customer_ids": list(ids),
                "window": {"since": since, "now": anchor},
                "mutual_counterparties": mutual}

    # -- tool 11 ------------------------------------------------------------------

    def aggregate_customer_transactions(self, customer_id: str,
                                        interval: str = "monthly",
                                        lookback_days: int = 365,
                                        now: str | None = None) -> dict:
        """Calendar-aligned UTC buckets over the window; empty buckets are
        emitted with zeros so the series has no gaps."""
        if interval not in ("daily", "weekly", "monthly"):
            raise InvalidParamsError(
                f"interval must be daily, weekly or monthly, got {interval!r}",
                field="interval")
        cid = self._require_customer(customer_id)
        since, anchor = self._window(lookback_days, now)
        table = self._run(DEFINING_QUERIES["transactions"],
                          {"id": cid, "since": since, "now": anchor})
        totals: dict[str, list] = {}
        seen_txn = set()
        for r in table.rows:
            if r[0] in seen_txn:  # one row per extra RECEIVED target
                continue
            seen_txn.add(r[0])
            bucket = _bucket_start(r[1], interval)
            slot = totals.setdefault(bucket, [0.0, 0])
            slot[0] += r[2]
            slot[1] += 1
        buckets = []
        for start in _bucket_series(since, anchor, interval):
            amount, count = totals.get(start, (0.0, 0))
            buckets.append({"start": start,
                            "total_amount": round(amount, 2),
                            "txn_count": count})
        return {"customer_id": cid, "interval": interval,
                "window": {"since": since, "now": anchor},
                "buckets": buckets}

    # -- tool 12 ------------------------------------------------------------------

    def summarize_customer_risk_profile(self, customer_id: str) -> dict:
        """All-in-one summary; strictly a composition of tools 3 to 11 (it
        contains no datum those tools cannot produce)."""
        cid = self._require_customer(customer_id)
        profile = self.get_customer_profile(cid)
        risk = self.get_customer_risk_summary(cid)
        extract = self.extract_customer_transactions(cid, lookback_days=365)
        activity = self.aggregate_customer_transactions(
            cid, interval="monthly", lookback_days=365)
        shared = self.trace_shared_accounts(cid)
        rings = self.find_customer_rings(min_size=2)
        member_rings = [ring for ring in rings["rings"]
                        if cid in ring["members"]]
        return {
            "customer_id": cid,
            "profile": profile,
            "risk": risk,
            "transaction_summary": extract["summary"],
            "monthly_activity": activity["buckets"],
            "shared_accounts": shared,
            "rings": member_rings,
            "related_party_count": len(profile["related_parties"]),
        }

    # -- dispatch ------------------------------------------------------------------

    def call(self, name: str, params: dict) -> dict:
        """Invoke a tool by catalog name with keyword parameters."""
        payload, _record_ids = self.call_with_provenance(name, params)
        return payload

    def call_with_provenance(self, name: str, params: dict) -> tuple[dict, list]:
        """Invoke a tool and also report the record IDs it touched (the
        retrieval provenance the server envelope carries)."""
        if name not in TOOL_NAMES:
            raise NotFoundError(f"unknown tool {name!r}")
        method = getattr(self, name)
        outer = getattr(self._local, "touched", None)
        own: set = set()
        self._local.touched = own
        try:
            payload = method(**params)
        except TypeError as exc:
            raise InvalidParamsError(str(exc)) from exc
        finally:
            self._local.touched = outer
            if outer is not None:
                outer.update(own)
        return payload, sorted(own)


def _bucket_start(timestamp: str, interval: str) -> str:
    dt = datetime.strptime(timestamp, _TS_FORMAT).replace(tzinfo=timezone.utc)
    if interval == "daily":
        floor = dt.replace(hour=0, minute=0, second=0)
    elif interval == "weekly":
        floor = (dt - timedelta(days=dt.weekday())).replace(
            hour=0, minute=0, second=0)
    else:
        floor = dt.replace(day=1, hour=0, minute=0, second=0)
    return floor.strftime("%Y-%m-%d")


def _bucket_series(since: str, now: str, interval: str) -> list:
    starts = []
    cursor = datetime.strptime(_bucket_start(since, interval), "%Y-%m-%d") \
        .replace(tzinfo=timezone.utc)
    end = datetime.strptime(now, _TS_FORMAT).replace(tzinfo=timezone.utc)
    while cursor <= end:
        starts.append(cursor.strftime("%Y-%m-%d"))
        if interval == "daily":
            cursor += timedelta(days=1)
        elif interval == "weekly":
            cursor += timedelta(days=7)
        else:
            cursor = (cursor.replace(day=28) + timedelta(days=4)).replace(day=1)
    return starts
