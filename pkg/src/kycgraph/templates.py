"""Benchmark question templates, co-maintained across three consumers:

- the evaluation harness instantiates them into benchmark questions with
  query-derived ground truth,
- text_to_cypher matches incoming questions against them,
- the scripted agent backend turns a matched question into a tool plan and
  renders the answer from the tool payloads with the same formatter that
  produced the ground truth.

Each template owns: a question pattern, the defining queries (the ground
truth is whatever those queries return), an entity sampler that only draws
slots with non-degenerate answers, and a deterministic answer builder.
Question difficulty levels follow fixed structural bands (hop count,
linking edges, temporal predicates, query count) that the rubric judge
checks mechanically.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from datetime import datetime, timezone

_DAY = 86_400
_TS_FORMAT = "%Y-%m-%dT%H:%M:%SZ"

QTYPES = ("account", "profile", "relationship", "risk", "sanction",
          "transaction")

# Edge classes used by the difficulty bands: linking edges connect a
# customer to another risk-bearing entity; attribute edges hang facts off
# one customer.
LINKING_EDGES = frozenset({"SHARES_ADDRESS_WITH", "SHARES_PHONE_WITH",
                           "RELATED_TO", "TRANSACTED_WITH",
                           "MATCHES_SANCTION", "LINKED_TO_PEP"})

LEVEL_BANDS = {
    1: "single query, at most 1 hop over attribute edges, no aggregate, "
       "no temporal predicate",
    2: "single query, 1-2 hops including a linking edge or an identity-node "
       "join, no aggregate, no temporal predicate",
    3: "single query, 3+ hops or a variable-length pattern, no temporal "
       "predicate",
    4: "temporal predicate over transaction timestamps, aggregates allowed, "
       "at most 2 queries",
    5: "composition of 3 or more queries with narrative synthesis",
}


def _ts_to_int(text: str) -> int:
    return int(datetime.strptime(text, _TS_FORMAT)
               .replace(tzinfo=timezone.utc).timestamp())


def _int_to_ts(ts: int) -> str:
    return datetime.fromtimestamp(ts, tz=timezone.utc).strftime(_TS_FORMAT)


def window_params(kit, days: int) -> dict:
    """since/now parameter pair anchored at the kit's reproducible now."""
    now = kit.now
    return {"since": _int_to_ts(_ts_to_int(now) - days * _DAY), "now": now}


def money(value) -> str:
    return f"{float(value):.2f}"


@dataclass
class AnswerParts:
    direct: str
    details: list = field(default_factory=list)
    findings: list = field(default_factory=list)

    @property
    def text(self) -> str:
        return " ".join([self.direct] + self.details)


@dataclass(frozen=True)
class Template:
    template_id: str
    level: int
    qtype: str
    text_format: str
    pattern: re.Pattern
    build_queries: object  # (slots, kit) -> [(query_text, params)]
    build_answer: object   # (slots, tables, kit) -> AnswerParts
    sample_pool: object    # (graph, manifest, kit, rng) -> [slots, ...]
    extra_plan: object = None  # (slots, kit) -> [(tool, params)] appended

    def question(self, slots: dict) -> str:
        return self.text_format.format(**slots)

    def match(self, question: str) -> dict | None:
        m = self.pattern.fullmatch(question.strip())
        if not m:
            return None
        slots = m.groupdict()
        for key in ("days", "k", "amount"):
            if key in slots:
                slots[key] = int(slots[key])
        return slots

    def tool_plan(self, slots: dict, kit) -> list:
        plan = [("execute_cypher", {"query": text, "params": params})
                for text, params in self.build_queries(slots, kit)]
        if self.extra_plan is not None:
            plan += self.extra_plan(slots, kit)
        return plan


def _rows(table: dict) -> list:
    return table["rows"]


def _col(table: dict, index: int = 0) -> list:
    return [row[index] for row in table["rows"]]


def _scalar(table: dict):
    return table["rows"][0][0]


def _fmt_list(values: list, empty: str) -> str:
    if not values:
        return empty
    return ", ".join(str(v) for v in values)


# --- samplers (shared helpers) ---------------------------------------------------

def _customers_with_edge(kit, edge_type: str) -> list:
    table = kit.execute_cypher(
        f"MATCH (c:Customer)-[:{edge_type}]->(o:Customer) "
        f"RETURN DISTINCT c.customer_id ORDER BY c.customer_id")
    return _col(table)


def _all_customers(graph) -> list:
    return graph.node_ids("Customer")


# --- template definitions ----------------------------------------------------------

def _pattern_for(text_format: str) -> re.Pattern:
    escaped = re.escape(text_format)
    escaped = escaped.replace(re.escape("{cid}"), r"(?P<cid>CUST\d{6})")
    return re.compile(escaped)


def _simple_prop_template(template_id, qtype, question, prop, phrasing):
    """Level-1 single-property lookup."""
    query = (f"MATCH (c:Customer {{customer_id: $id}}) "
             f"RETURN c.{prop} AS {prop}")

    def build(slots, kit):
        return [(query, {"id": slots["cid"]})]

    def answer(slots, tables, kit):
        value = _scalar(tables[0])
        return AnswerParts(
            direct=phrasing.format(cid=slots["cid"], value=value),
            details=[f"{prop} = {value}"],
            findings=[f"single attribute lookup for {slots['cid']}"])

    def pool(graph, manifest, kit, rng):
        return [{"cid": cid} for cid in _all_customers(graph)]

    return Template(template_id, 1, qtype, question, _pattern_for(question),
                    build, answer, pool)


def _build_registry() -> list:
    templates: list[Template] = []

    # ---- level 1 ------------------------------------------------------------

    templates.append(_simple_prop_template(
        "l1_nationality", "profile",
        "What is the nationality of customer {cid}?", "nationality",
        "Customer {cid} has nationality {value}."))

    templates.append(_simple_prop_template(
        "l1_risk_level", "risk",
        "What is the risk level of customer {cid}?", "risk_level",
        "Customer {cid} has risk level {value}."))

    templates.append(_simple_prop_template(
        "l1_occupation", "profile",
        "What is the occupation of customer {cid}?", "occupation",
        "Customer {cid} has occupation {value}."))

    def l1_accounts_build(slots, kit):
        return [("MATCH (c:Customer {customer_id: $id})-[:OWNS]->(a:Account) "
                 "RETURN a.account_number AS account_number "
                 "ORDER BY account_number", {"id": slots["cid"]})]

    def l1_accounts_answer(slots, tables, kit):
        numbers = _col(tables[0])
        return AnswerParts(
            direct=f"Customer {slots['cid']} owns {len(numbers)} account(s): "
                   f"{_fmt_list(numbers, 'none')}.",
            details=[f"account_number = {n}" for n in numbers],
            findings=[f"account count = {len(numbers)}"])

    templates.append(Template(
        "l1_accounts", 1, "account",
        "List all accounts owned by customer {cid}.",
        re.compile(r"List all accounts owned by customer (?P<cid>CUST\d{6})\."),
        l1_accounts_build, l1_accounts_answer,
        lambda graph, manifest, kit, rng: [
            {"cid": cid} for cid in _all_customers(graph)]))

    def l1_residence_build(slots, kit):
        return [("MATCH (c:Customer {customer_id: $id})-[:LIVES_AT]->"
                 "(ad:Address) RETURN DISTINCT ad.country AS country "
                 "ORDER BY country", {"id": slots["cid"]})]

    def l1_residence_answer(slots, tables, kit):
        countries = _col(tables[0])
        return AnswerParts(
            direct=f"Customer {slots['cid']} resides in "
                   f"{_fmt_list(countries, 'no recorded country')}.",
            details=[f"country = {c}" for c in countries],
            findings=[f"registered address countries = {len(countries)}"])

    templates.append(Template(
        "l1_residence", 1, "profile",
        "In which country does customer {cid} reside?",
        re.compile(r"In which country does customer (?P<cid>CUST\d{6}) "
                   r"reside\?"),
        l1_residence_build, l1_residence_answer,
        lambda graph, manifest, kit, rng: [
            {"cid": cid} for cid in _all_customers(graph)]))

    def l1_balance_build(slots, kit):
        return [("MATCH (a:Account {account_number: $id}) "
                 "RETURN a.balance AS balance", {"id": slots["aid"]})]

    def l1_balance_answer(slots, tables, kit):
        balance = _scalar(tables[0])
        return AnswerParts(
            direct=f"Account {slots['aid']} has balance {money(balance)}.",
            details=[f"balance = {money(balance)}"],
            findings=["single account attribute lookup"])

    templates.append(Template(
        "l1_balance", 1, "account",
        "What is the balance of account {aid}?",
        re.compile(r"What is the balance of account (?P<aid>ACC\d{8})\?"),
        l1_balance_build, l1_balance_answer,
        lambda graph, manifest, kit, rng: [
            {"aid": aid} for aid in graph.node_ids("Account")]))

    # ---- level 2 ------------------------------------------------------------

    def _listing_answer(noun: str):
        def answer(slots, tables, kit):
            ids = _col(tables[0])
            return AnswerParts(
                direct=f"Customer {slots['cid']} has {len(ids)} {noun}: "
                       f"{_fmt_list(ids, 'none')}.",
                details=[f"customer_id = {i}" for i in ids],
                findings=[f"{noun} count = {len(ids)}"])
        return answer

    def l2_shared_address_build(slots, kit):
        return [("MATCH (c:Customer {customer_id: $id})-"
                 "[:SHARES_ADDRESS_WITH]->(o:Customer) "
                 "RETURN o.customer_id AS customer_id ORDER BY customer_id",
                 {"id": slots["cid"]})]

    templates.append(Template(
        "l2_shared_address", 2, "relationship",
        "Which customers share an address with customer {cid}?",
        re.compile(r"Which customers share an address with customer "
                   r"(?P<cid>CUST\d{6})\?"),
        l2_shared_address_build, _listing_answer("address sharer(s)"),
        lambda graph, manifest, kit, rng: [
            {"cid": cid} for cid in
            _customers_with_edge(kit, "SHARES_ADDRESS_WITH")]))

    def l2_shared_phone_build(slots, kit):
        return [("MATCH (c:Customer {customer_id: $id})-"
                 "[:SHARES_PHONE_WITH]->(o:Customer) "
                 "RETURN o.customer_id AS customer_id ORDER BY customer_id",
                 {"id": slots["cid"]})]

    templates.append(Template(
        "l2_shared_phone", 2, "relationship",
        "Which customers share a phone number with customer {cid}?",
        re.compile(r"Which customers share a phone number with customer "
                   r"(?P<cid>CUST\d{6})\?"),
        l2_shared_phone_build, _listing_answer("phone sharer(s)"),
        lambda graph, manifest, kit, rng: [
            {"cid": cid} for cid in
            _customers_with_edge(kit, "SHARES_PHONE_WITH")]))

    def l2_related_build(slots, kit):
        return [("MATCH (c:Customer {customer_id: $id})-[r:RELATED_TO]-"
                 "(o:Customer) RETURN DISTINCT o.customer_id AS customer_id "
                 "ORDER BY customer_id", {"id": slots["cid"]})]

    def l2_related_pool(graph, manifest, kit, rng):
        table = kit.execute_cypher(
            "MATCH (c:Customer)-[r:RELATED_TO]-(o:Customer) "
            "RETURN DISTINCT c.customer_id ORDER BY c.customer_id")
        return [{"cid": cid} for cid in _col(table)]

    templates.append(Template(
        "l2_related", 2, "relationship",
        "Which customers are recorded as related parties of customer {cid}?",
        re.compile(r"Which customers are recorded as related parties of "
                   r"customer (?P<cid>CUST\d{6})\?"),
        l2_related_build, _listing_answer("related part(y/ies)"),
        l2_related_pool))

    def l2_same_address_build(slots, kit):
        return [("MATCH (c:Customer {customer_id: $id})-[:LIVES_AT]->"
                 "(ad:Address)<-[:LIVES_AT]-(o:Customer) "
                 "WHERE o.customer_id <> $id "
                 "RETURN DISTINCT o.customer_id AS customer_id "
                 "ORDER BY customer_id", {"id": slots["cid"]})]

    templates.append(Template(
        "l2_same_address", 2, "relationship",
        "Which other customers live at the same address as customer {cid}?",
        re.compile(r"Which other customers live at the same address as "
                   r"customer (?P<cid>CUST\d{6})\?"),
        l2_same_address_build, _listing_answer("co-resident(s)"),
        lambda graph, manifest, kit, rng: [
            {"cid": cid} for cid in
            _customers_with_edge(kit, "SHARES_ADDRESS_WITH")]))

    def l2_sanctions_build(slots, kit):
        return [("MATCH (c:Customer {customer_id: $id})-[:MATCHES_SANCTION]"
                 "->(s:Sanction) RETURN s.entity_name AS entity_name, "
                 "s.list_name AS list_name ORDER BY entity_name",
                 {"id": slots["cid"]})]

    def l2_sanctions_answer(slots, tables, kit):
        rows = _rows(tables[0])
        pairs = [f"{r[0]} ({r[1]})" for r in rows]
        details = [f"entity_name = {r[0]}" for r in rows]
        details += [f"list_name = {r[1]}" for r in rows]
        return AnswerParts(
            direct=f"Customer {slots['cid']} matches {len(rows)} sanction "
                   f"list entr(y/ies): {_fmt_list(pairs, 'none')}.",
            details=details,
            findings=["sanction screening hit" if rows else
                      "no sanction exposure"])

    def l2_sanctions_pool(graph, manifest, kit, rng):
        table = kit.execute_cypher(
            "MATCH (c:Customer)-[:MATCHES_SANCTION]->(s:Sanction) "
            "RETURN DISTINCT c.customer_id ORDER BY c.customer_id")
        return [{"cid": cid} for cid in _col(table)]

    templates.append(Template(
        "l2_sanctions", 2, "sanction",
        "Which sanction list entries does customer {cid} match?",
        re.compile(r"Which sanction list entries does customer "
                   r"(?P<cid>CUST\d{6}) match\?"),
        l2_sanctions_build, l2_sanctions_answer, l2_sanctions_pool))

    def l2_transacted_build(slots, kit):
        return [("MATCH (c:Customer {customer_id: $id})-[:TRANSACTED_WITH]->"
                 "(o:Customer) RETURN o.customer_id AS customer_id "
                 "ORDER BY customer_id", {"id": slots["cid"]})]

    templates.append(Template(
        "l2_transacted", 2, "transaction",
        "Which customers has customer {cid} transacted with?",
        re.compile(r"Which customers has customer (?P<cid>CUST\d{6}) "
                   r"transacted with\?"),
        l2_transacted_build, _listing_answer("transaction counterpart(s)"),
        lambda graph, manifest, kit, rng: [
            {"cid": cid} for cid in
            _customers_with_edge(kit, "TRANSACTED_WITH")]))

    # ---- level 3 ------------------------------------------------------------

    def l3_counterparties_build(slots, kit):
        return [("MATCH (c:Customer {customer_id: $id})-[:OWNS]->(a:Account)"
                 "-[:PERFORMED]->(t:Transaction)-[:RECEIVED]->"
                 "(x:Counterparty) RETURN DISTINCT x.name AS counterparty "
                 "ORDER BY counterparty", {"id": slots["cid"]})]

    def l3_counterparties_answer(slots, tables, kit):
        names = _col(tables[0])
        return AnswerParts(
            direct=f"Accounts owned by customer {slots['cid']} sent funds to "
                   f"{len(names)} counterpart(y/ies): "
                   f"{_fmt_list(names, 'none')}.",
            details=[f"counterparty = {n}" for n in names],
            findings=[f"distinct external counterparties = {len(names)}"])

    def l3_counterparties_pool(graph, manifest, kit, rng):
        return [{"cid": cid} for cid, facts in
                sorted(manifest.customers.items())
                if facts.transactions > facts.high_risk_transactions]

    templates.append(Template(
        "l3_counterparties", 3, "transaction",
        "Which counterparties received transactions from accounts owned by "
        "customer {cid}?",
        re.compile(r"Which counterparties received transactions from accounts"
                   r" owned by customer (?P<cid>CUST\d{6})\?"),
        l3_counterparties_build, l3_counterparties_answer,
        l3_counterparties_pool))

    def l3_reach_build(slots, kit):
        k = slots["k"]
        return [(f"MATCH (c:Customer {{customer_id: $id}})-"
                 f"[:SHARES_ADDRESS_WITH|SHARES_PHONE_WITH*1..{k}]->"
                 f"(o:Customer) WHERE o.customer_id <> $id "
                 f"RETURN DISTINCT o.customer_id AS customer_id "
                 f"ORDER BY customer_id", {"id": slots["cid"]})]

    def l3_reach_pool(graph, manifest, kit, rng):
        pool = []
        for edge_type in ("SHARES_ADDRESS_WITH", "SHARES_PHONE_WITH"):
            for cid in _customers_with_edge(kit, edge_type):
                for k in (2, 3):
                    pool.append({"cid": cid, "k": k})
        seen, unique = set(), []
        for slots in pool:
            key = (slots["cid"], slots["k"])
            if key not in seen:
                seen.add(key)
                unique.append(slots)
        return unique

    templates.append(Template(
        "l3_reach", 3, "relationship",
        "Which customers are connected to customer {cid} within {k} hops "
        "through shared addresses or phones?",
        re.compile(r"Which customers are connected to customer "
                   r"(?P<cid>CUST\d{6}) within (?P<k>\d) hops through shared "
                   r"addresses or phones\?"),
        l3_reach_build, _listing_answer("connected customer(s)"),
        l3_reach_pool))

    def l3_sanction_build(slots, kit):
        return [("MATCH (c:Customer {customer_id: $id})-[:RELATED_TO*1..2]-"
                 "(x:Customer)-[:MATCHES_SANCTION]->(s:Sanction) "
                 "WHERE x.customer_id <> $id "
                 "RETURN DISTINCT s.entity_name AS entity_name "
                 "ORDER BY entity_name", {"id": slots["cid"]})]

    def l3_sanction_answer(slots, tables, kit):
        names = _col(tables[0])
        return AnswerParts(
            direct=f"Customers related to customer {slots['cid']} within two "
                   f"hops match {len(names)} sanction entit(y/ies): "
                   f"{_fmt_list(names, 'none')}.",
            details=[f"entity_name = {n}" for n in names],
            findings=["indirect sanction exposure through related parties"
                      if names else "no indirect sanction exposure"])

    def l3_sanction_pool(graph, manifest, kit, rng):
        table = kit.execute_cypher(
            "MATCH (c:Customer)-[:RELATED_TO*1..2]-(x:Customer)-"
            "[:MATCHES_SANCTION]->(s:Sanction) "
            "WHERE x.customer_id <> c.customer_id "
            "RETURN DISTINCT c.customer_id ORDER BY c.customer_id")
        return [{"cid": cid} for cid in _col(table)]

    templates.append(Template(
        "l3_sanction", 3, "sanction",
        "Which sanction entities are matched by customers related to "
        "customer {cid} within two hops?",
        re.compile(r"Which sanction entities are matched by customers related"
                   r" to customer (?P<cid>CUST\d{6}) within two hops\?"),
        l3_sanction_build, l3_sanction_answer, l3_sanction_pool))

    def l3_risk_build(slots, kit):
        k = slots["k"]
        return [(f"MATCH (c:Customer {{customer_id: $id}})-"
                 f"[:TRANSACTED_WITH*1..{k}]->(o:Customer) "
                 f"WHERE o.risk_level = 'HIGH' AND o.customer_id <> $id "
                 f"RETURN DISTINCT o.customer_id AS customer_id "
                 f"ORDER BY customer_id", {"id": slots["cid"]})]

    def l3_risk_pool(graph, manifest, kit, rng):
        pool = []
        for k in (2, 3):
            table = kit.execute_cypher(
                f"MATCH (c:Customer)-[:TRANSACTED_WITH*1..{k}]->(o:Customer) "
                f"WHERE o.risk_level = 'HIGH' AND "
                f"o.customer_id <> c.customer_id "
                f"RETURN DISTINCT c.customer_id ORDER BY c.customer_id")
            pool += [{"cid": cid, "k": k} for cid in _col(table)]
        return pool

    templates.append(Template(
        "l3_risk", 3, "risk",
        "Which HIGH risk customers can customer {cid} reach within {k} "
        "transaction hops?",
        re.compile(r"Which HIGH risk customers can customer "
                   r"(?P<cid>CUST\d{6}) reach within (?P<k>\d) transaction "
                   r"hops\?"),
        l3_risk_build, _listing_answer("reachable HIGH risk customer(s)"),
        l3_risk_pool))

    # ---- level 4 ------------------------------------------------------------

    def l4_count_build(slots, kit):
        params = {"id": slots["cid"], **window_params(kit, slots["days"])}
        return [("MATCH (c:Customer {customer_id: $id})-[:OWNS]->(a:Account)"
                 "-[:PERFORMED]->(t:Transaction) WHERE t.timestamp >= $since "
                 "AND t.timestamp <= $now RETURN count(t) AS txn_count",
                 params)]

    def l4_count_answer(slots, tables, kit):
        count = _scalar(tables[0])
        return AnswerParts(
            direct=f"Customer {slots['cid']} performed {count} transaction(s)"
                   f" in the last {slots['days']} days.",
            details=[f"txn_count = {count}"],
            findings=[f"window of {slots['days']} days"])

    def _active_customer_pool(days_options):
        def pool(graph, manifest, kit, rng):
            out = []
            for cid, facts in sorted(manifest.customers.items()):
                if facts.transactions > 0:
                    for days in days_options:
                        out.append({"cid": cid, "days": days})
            return out
        return pool

    templates.append(Template(
        "l4_txn_count", 4, "transaction",
        "How many transactions did customer {cid} perform in the last {days} "
        "days?",
        re.compile(r"How many transactions did customer (?P<cid>CUST\d{6}) "
                   r"perform in the last (?P<days>\d+) days\?"),
        l4_count_build, l4_count_answer, _active_customer_pool((180, 365, 720))))

    def l4_total_build(slots, kit):
        params = {"id": slots["cid"], **window_params(kit, slots["days"])}
        return [("MATCH (c:Customer {customer_id: $id})-[:OWNS]->(a:Account)"
                 "-[:PERFORMED]->(t:Transaction) WHERE t.timestamp >= $since "
                 "AND t.timestamp <= $now RETURN count(t) AS txn_count, "
                 "sum(t.amount) AS total_amount", params)]

    def l4_total_answer(slots, tables, kit):
        count = tables[0]["rows"][0][0]
        total = tables[0]["rows"][0][1]
        return AnswerParts(
            direct=f"Customer {slots['cid']} transacted a total of "
                   f"{money(total)} across {count} transaction(s) in the "
                   f"last {slots['days']} days.",
            details=[f"total_amount = {money(total)}",
                     f"txn_count = {count}"],
            findings=["aggregated transaction volume inside the window"])

    templates.append(Template(
        "l4_txn_total", 4, "transaction",
        "What total amount did customer {cid} transact in the last {days} "
        "days?",
        re.compile(r"What total amount did customer (?P<cid>CUST\d{6}) "
                   r"transact in the last (?P<days>\d+) days\?"),
        l4_total_build, l4_total_answer, _active_customer_pool((180, 365, 720))))

    def l4_high_value_build(slots, kit):
        params = {"id": slots["cid"], "amt": slots["amount"],
                  **window_params(kit, slots["days"])}
        return [("MATCH (c:Customer {customer_id: $id})-[:OWNS]->(a:Account)"
                 "-[:PERFORMED]->(t:Transaction) WHERE t.amount > $amt AND "
                 "t.timestamp >= $since AND t.timestamp <= $now "
                 "RETURN DISTINCT a.account_number AS account_number "
                 "ORDER BY account_number", params)]

    def l4_high_value_answer(slots, tables, kit):
        numbers = _col(tables[0])
        return AnswerParts(
            direct=f"{len(numbers)} account(s) of customer {slots['cid']} "
                   f"performed transactions above {slots['amount']} in the "
                   f"last {slots['days']} days: {_fmt_list(numbers, 'none')}.",
            details=[f"account_number = {n}" for n in numbers],
            findings=[f"high-value threshold = {slots['amount']}"])

    def l4_high_value_pool(graph, manifest, kit, rng):
        out = []
        for cid, facts in sorted(manifest.customers.items()):
            if facts.transactions >= 5:
                out.append({"cid": cid, "days": 720,
                            "amount": rng.choice((500, 1000))})
        return out

    templates.append(Template(
        "l4_high_value", 4, "account",
        "Which accounts of customer {cid} performed transactions above "
        "{amount} in the last {days} days?",
        re.compile(r"Which accounts of customer (?P<cid>CUST\d{6}) performed "
                   r"transactions above (?P<amount>\d+) in the last "
                   r"(?P<days>\d+) days\?"),
        l4_high_value_build, l4_high_value_answer, l4_high_value_pool))

    def l4_hrj_build(slots, kit):
        params = {"id": slots["cid"], "hrj": kit.high_risk_jurisdictions,
                  **window_params(kit, slots["days"])}
        return [("MATCH (c:Customer {customer_id: $id})-[:OWNS]->(a:Account)"
                 "-[:PERFORMED]->(t:Transaction)-[:RECEIVED]->"
                 "(x:Counterparty) WHERE x.jurisdiction IN $hrj AND "
                 "t.timestamp >= $since AND t.timestamp <= $now "
                 "RETURN count(t) AS hrj_txn_count", params)]

    def l4_hrj_answer(slots, tables, kit):
        count = _scalar(tables[0])
        return AnswerParts(
            direct=f"Customer {slots['cid']} made {count} transaction(s) "
                   f"involving high-risk jurisdictions in the last "
                   f"{slots['days']} days.",
            details=[f"hrj_txn_count = {count}"],
            findings=["high-risk jurisdiction exposure" if count else
                      "no high-risk jurisdiction activity"])

    def l4_hrj_pool(graph, manifest, kit, rng):
        return [{"cid": cid, "days": 720} for cid, facts in
                sorted(manifest.customers.items())
                if facts.high_risk_transactions > 0]

    templates.append(Template(
        "l4_hrj", 4, "risk",
        "How many transactions involving high-risk jurisdictions did "
        "customer {cid} make in the last {days} days?",
        re.compile(r"How many transactions involving high-risk jurisdictions "
                   r"did customer (?P<cid>CUST\d{6}) make in the last "
                   r"(?P<days>\d+) days\?"),
        l4_hrj_build, l4_hrj_answer, l4_hrj_pool))

    # ---- level 5 ------------------------------------------------------------

    def l5_summary_build(slots, kit):
        cid = {"id": slots["cid"]}
        window = {"id": slots["cid"], **window_params(kit, 365)}
        return [
            ("MATCH (c:Customer {customer_id: $id}) RETURN c.name AS name, "
             "c.risk_level AS risk_level, "
             "c.high_risk_jurisdiction_count AS hrj_count", cid),
            ("MATCH (c:Customer {customer_id: $id})-[:MATCHES_SANCTION]->"
             "(s:Sanction) RETURN s.entity_name AS entity_name "
             "ORDER BY entity_name", cid),
            ("MATCH (c:Customer {customer_id: $id})-[:LINKED_TO_PEP]->(p:PEP)"
             " RETURN p.name AS name ORDER BY name", cid),
            ("MATCH (c:Customer {customer_id: $id})-[:HAS_ALERT]->(al:Alert) "
             "RETURN count(al) AS alert_count", cid),
            ("MATCH (c:Customer {customer_id: $id})-[r:RELATED_TO]-"
             "(o:Customer) RETURN DISTINCT o.customer_id AS customer_id "
             "ORDER BY customer_id", cid),
            ("MATCH (c:Customer {customer_id: $id})-[:OWNS]->(a:Account)-"
             "[:PERFORMED]->(t:Transaction) WHERE t.timestamp >= $since AND "
             "t.timestamp <= $now RETURN count(t) AS txn_count, "
             "sum(t.amount) AS total_amount", window),
        ]

    def l5_summary_answer(slots, tables, kit):
        name, risk_level, hrj = tables[0]["rows"][0]
        sanctions = _col(tables[1])
        peps = _col(tables[2])
        alert_count = _scalar(tables[3])
        related = _col(tables[4])
        txn_count, total = tables[5]["rows"][0]
        findings = []
        if sanctions:
            findings.append(f"sanction matches: {_fmt_list(sanctions, 'none')}")
        if peps:
            findings.append(f"PEP links: {_fmt_list(peps, 'none')}")
        if hrj:
            findings.append(f"high-risk jurisdiction transactions = {hrj}")
        if not findings:
            findings.append("no watchlist exposure on record")
        return AnswerParts(
            direct=f"Customer {slots['cid']} ({name}) has risk level "
                   f"{risk_level} with {len(sanctions)} sanction match(es), "
                   f"{len(peps)} PEP link(s), and {alert_count} alert(s).",
            details=[
                f"risk_level = {risk_level}",
                f"sanction_entities = {_fmt_list(sanctions, 'none')}",
                f"pep_names = {_fmt_list(peps, 'none')}",
                f"alert_count = {alert_count}",
                f"related_parties = {_fmt_list(related, 'none')}",
                f"txn_count = {txn_count}",
                f"total_amount = {money(total)}",
                f"high_risk_jurisdiction_count = {hrj}",
            ],
            findings=findings)

    def l5_summary_pool(graph, manifest, kit, rng):
        out = []
        for cid, facts in sorted(manifest.customers.items()):
            if facts.transactions > 0 and (
                    facts.sanctions or facts.peps or facts.alerts or
                    facts.risk_level == "HIGH"):
                out.append({"cid": cid})
        return out

    def l5_summary_extra(slots, kit):
        return [("summarize_customer_risk_profile",
                 {"customer_id": slots["cid"]})]

    templates.append(Template(
        "l5_summary", 5, "risk",
        "Summarize the risk profile of customer {cid} based on transactions, "
        "related parties, and watchlist matches.",
        re.compile(r"Summarize the risk profile of customer "
                   r"(?P<cid>CUST\d{6}) based on transactions, related "
                   r"parties, and watchlist matches\."),
        l5_summary_build, l5_summary_answer, l5_summary_pool,
        extra_plan=l5_summary_extra))

    def l5_links_build(slots, kit):
        pair = {"a": slots["c1"], "b": slots["c2"]}
        window = {**pair, **window_params(kit, 720)}
        return [
            ("MATCH (a:Customer {customer_id: $a})-[:LIVES_AT]->(ad:Address)"
             "<-[:LIVES_AT]-(b:Customer {customer_id: $b}) "
             "RETURN ad.address_id AS address_id ORDER BY address_id", pair),
            ("MATCH (a:Customer {customer_id: $a})-[:HAS_PHONE]->(p:Phone)"
             "<-[:HAS_PHONE]-(b:Customer {customer_id: $b}) "
             "RETURN p.phone_id AS phone_id ORDER BY phone_id", pair),
            ("MATCH (a:Customer {customer_id: $a})-[r:TRANSACTED_WITH|"
             "RELATED_TO]-(b:Customer {customer_id: $b}) "
             "RETURN count(r) AS direct_links", pair),
            ("MATCH (a:Customer {customer_id: $a})-[:OWNS]->(x:Account)-"
             "[:PERFORMED]->(t:Transaction)-[:RECEIVED]->(cp:Counterparty) "
             "WHERE t.timestamp >= $since AND t.timestamp <= $now "
             "RETURN DISTINCT cp.counterparty_id AS counterparty_id "
             "ORDER BY counterparty_id", window),
            ("MATCH (b:Customer {customer_id: $b})-[:OWNS]->(x:Account)-"
             "[:PERFORMED]->(t:Transaction)-[:RECEIVED]->(cp:Counterparty) "
             "WHERE t.timestamp >= $since AND t.timestamp <= $now "
             "RETURN DISTINCT cp.counterparty_id AS counterparty_id "
             "ORDER BY counterparty_id", window),
        ]

    def l5_links_answer(slots, tables, kit):
        addresses = _col(tables[0])
        phones = _col(tables[1])
        direct = _scalar(tables[2])
        mutual = sorted(set(_col(tables[3])) & set(_col(tables[4])))
        link_kinds = []
        if addresses:
            link_kinds.append("shared address")
        if phones:
            link_kinds.append("shared phone")
        if direct:
            link_kinds.append("direct relationship or fund flow")
        if mutual:
            link_kinds.append("mutual counterparties")
        return AnswerParts(
            direct=f"Customers {slots['c1']} and {slots['c2']} are linked by "
                   f"{_fmt_list(link_kinds, 'no recorded mechanism')}.",
            details=[
                f"shared_addresses = {_fmt_list(addresses, 'none')}",
                f"shared_phones = {_fmt_list(phones, 'none')}",
                f"direct_links = {direct}",
                f"mutual_counterparties = {_fmt_list(mutual, 'none')}",
            ],
            findings=[f"link mechanisms found = {len(link_kinds)}"])

    def l5_links_pool(graph, manifest, kit, rng):
        pairs = []
        for ring in manifest.rings:
            members = ring.members
            for i, a in enumerate(members):
                for b in members[i + 1:]:
                    pairs.append({"c1": a, "c2": b})
        table = kit.execute_cypher(
            "MATCH (a:Customer)-[:TRANSACTED_WITH]->(b:Customer) "
            "RETURN a.customer_id, b.customer_id "
            "ORDER BY a.customer_id, b.customer_id")
        for a, b in table["rows"]:
            if a < b:
                pairs.append({"c1": a, "c2": b})
        seen, unique = set(), []
        for pair in pairs:
            key = (pair["c1"], pair["c2"])
            if key not in seen:
                seen.add(key)
                unique.append(pair)
        return unique

    templates.append(Template(
        "l5_links", 5, "relationship",
        "Explain the potential links between customer {c1} and customer "
        "{c2} considering shared addresses, shared phones, and mutual "
        "counterparties.",
        re.compile(r"Explain the potential links between customer "
                   r"(?P<c1>CUST\d{6}) and customer (?P<c2>CUST\d{6}) "
                   r"considering shared addresses, shared phones, and mutual "
                   r"counterparties\."),
        l5_links_build, l5_links_answer, l5_links_pool))

    def l5_exposure_build(slots, kit):
        cid = {"id": slots["cid"]}
        return [
            ("MATCH (c:Customer {customer_id: $id})-[:MATCHES_SANCTION]->"
             "(s:Sanction) RETURN s.entity_name AS entity_name, "
             "s.list_name AS list_name ORDER BY entity_name", cid),
            ("MATCH (c:Customer {customer_id: $id})-[:LINKED_TO_PEP]->(p:PEP)"
             " RETURN p.name AS name, p.position AS position ORDER BY name",
             cid),
            ("MATCH (c:Customer {customer_id: $id})-[r:RELATED_TO]-"
             "(o:Customer) RETURN DISTINCT o.customer_id AS customer_id "
             "ORDER BY customer_id", cid),
            ("MATCH (c:Customer {customer_id: $id})-[:RELATED_TO]-"
             "(o:Customer)-[:MATCHES_SANCTION]->(s:Sanction) "
             "RETURN DISTINCT o.customer_id AS customer_id, "
             "s.entity_name AS entity_name ORDER BY customer_id, entity_name",
             cid),
            ("MATCH (c:Customer {customer_id: $id})-[:RELATED_TO]-"
             "(o:Customer)-[:LINKED_TO_PEP]->(p:PEP) "
             "RETURN DISTINCT o.customer_id AS customer_id, p.name AS name "
             "ORDER BY customer_id, name", cid),
        ]

    def l5_exposure_answer(slots, tables, kit):
        own_sanctions = [r[0] for r in tables[0]["rows"]]
        own_peps = [r[0] for r in tables[1]["rows"]]
        related = _col(tables[2])
        rel_sanctioned = sorted({r[0] for r in tables[3]["rows"]})
        rel_sanction_names = sorted({r[1] for r in tables[3]["rows"]})
        rel_pep_parties = sorted({r[0] for r in tables[4]["rows"]})
        total = len(own_sanctions) + len(own_peps) + \
            len(tables[3]["rows"]) + len(tables[4]["rows"])
        return AnswerParts(
            direct=f"Customer {slots['cid']} and related parties carry "
                   f"{total} watchlist exposure item(s).",
            details=[
                f"own_sanctions = {_fmt_list(own_sanctions, 'none')}",
                f"own_pep_links = {_fmt_list(own_peps, 'none')}",
                f"related_parties = {_fmt_list(related, 'none')}",
                f"related_sanctioned_parties = {_fmt_list(rel_sanctioned, 'none')}",
                f"related_sanction_entities = "
                f"{_fmt_list(rel_sanction_names, 'none')}",
                f"related_pep_linked_parties = "
                f"{_fmt_list(rel_pep_parties, 'none')}",
            ],
            findings=["watchlist exposure present" if total else
                      "no watchlist exposure found"])

    def l5_exposure_pool(graph, manifest, kit, rng):
        return [{"cid": cid} for cid, facts in
                sorted(manifest.customers.items())
                if facts.sanctions or facts.peps]

    templates.append(Template(
        "l5_exposure", 5, "sanction",
        "Assess the sanctions and PEP exposure of customer {cid} and its "
        "related parties.",
        re.compile(r"Assess the sanctions and PEP exposure of customer "
                   r"(?P<cid>CUST\d{6}) and its related parties\."),
        l5_exposure_build, l5_exposure_answer, l5_exposure_pool))

    def l5_profile_build(slots, kit):
        cid = {"id": slots["cid"]}
        return [
            ("MATCH (c:Customer {customer_id: $id}) RETURN c.name AS name, "
             "c.risk_level AS risk_level, "
             "c.high_risk_jurisdiction_count AS hrj_count", cid),
            ("MATCH (c:Customer {customer_id: $id})-[:MATCHES_SANCTION]->"
             "(s:Sanction) RETURN s.entity_name AS entity_name "
             "ORDER BY entity_name", cid),
            ("MATCH (c:Customer {customer_id: $id})-[:LINKED_TO_PEP]->(p:PEP)"
             " RETURN p.name AS name ORDER BY name", cid),
            ("MATCH (c:Customer {customer_id: $id})-[:HAS_ALERT]->(al:Alert) "
             "RETURN count(al) AS alert_count", cid),
        ]

    def l5_profile_answer(slots, tables, kit):
        name, risk_level, hrj = tables[0]["rows"][0]
        sanctions = _col(tables[1])
        peps = _col(tables[2])
        alert_count = _scalar(tables[3])
        findings = []
        if sanctions:
            findings.append("sanctions list matches")
        if peps:
            findings.append("politically exposed person status")
        if hrj:
            findings.append("high-risk jurisdiction activity")
        if not findings:
            findings.append("no watchlist or jurisdiction flags")
        return AnswerParts(
            direct=f"Customer {slots['cid']} has a {risk_level} risk level.",
            details=[
                f"risk_level = {risk_level}",
                f"name = {name}",
                f"sanction_entities = {_fmt_list(sanctions, 'none')}",
                f"pep_names = {_fmt_list(peps, 'none')}",
                f"alert_count = {alert_count}",
                f"high_risk_jurisdiction_count = {hrj}",
            ],
            findings=findings)

    templates.append(Template(
        "l5_risk_profile", 5, "risk",
        "What is the risk profile of customer {cid}?",
        re.compile(r"What is the risk profile of (?:customer )?"
                   r"(?P<cid>CUST\d{6})\?"),
        l5_profile_build, l5_profile_answer,
        lambda graph, manifest, kit, rng: [
            {"cid": cid} for cid in graph.node_ids("Customer")]))

    return templates


TEMPLATES: list[Template] = _build_registry()

BY_LEVEL: dict[int, list[Template]] = {}
for _t in TEMPLATES:
    BY_LEVEL.setdefault(_t.level, []).append(_t)

BY_ID: dict[str, Template] = {t.template_id: t for t in TEMPLATES}


def match_question(question: str, kit) -> tuple[Template, dict] | None:
    """Resolve free text to (template, slots), or None when nothing fits."""
    for template in TEMPLATES:
        slots = template.match(question)
        if slots is not None:
            return template, slots
    return None
