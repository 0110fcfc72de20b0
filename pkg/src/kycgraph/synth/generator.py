"""Seeded construction of the synthetic KYC graph.

Strategy: stage plain-python records first (so required node properties
like risk level and high-risk transaction counts are final before any node
is created), merge everything into a PropertyGraph in deterministic order,
plant fraud rings, then derive the shared-identifier and counterparty
projection edges.  One RNG, one call order: identical configs give
byte-identical snapshots.
"""

from __future__ import annotations

import bisect
import math
import random
from datetime import datetime, timezone

from . import vocab
from .config import GenConfig
from .manifest import CustomerFacts, GroundTruthManifest, RingEntry
from .. import schema
from ..errors import KycGraphError, NotFoundError
from ..store import EdgeMerge, NodeMerge, PropertyGraph

RING_MECHANISMS = ("shared-address", "shared-phone", "circular-transactions")

_MECHANISM_EDGE = {
    "shared-address": "SHARES_ADDRESS_WITH",
    "shared-phone": "SHARES_PHONE_WITH",
    "circular-transactions": "TRANSACTED_WITH",
}

_DAY = 86_400


def _iso_ts(ts: int) -> str:
    return datetime.fromtimestamp(ts, tz=timezone.utc).strftime(
        "%Y-%m-%dT%H:%M:%SZ")


def _iso_date(ts: int) -> str:
    return datetime.fromtimestamp(ts, tz=timezone.utc).strftime("%Y-%m-%d")


def _parse_ts(text: str) -> int:
    return int(datetime.strptime(text, "%Y-%m-%dT%H:%M:%SZ")
               .replace(tzinfo=timezone.utc).timestamp())


class _ZipfPicker:
    """Draws indices 0..n-1 with probability proportional to rank^-s over a
    shuffled rank order, so skew is not aligned with creation order."""

    def __init__(self, n: int, s: float, rng: random.Random):
        order = list(range(n))
        rng.shuffle(order)
        self.order = order
        weights = [(i + 1) ** -s for i in range(n)]
        total = 0.0
        self.cum = []
        for w in weights:
            total += w
            self.cum.append(total)
        self.total = total

    def pick(self, rng: random.Random) -> int:
        u = rng.random() * self.total
        return self.order[bisect.bisect_left(self.cum, u)]


def generate(config: GenConfig) -> tuple[PropertyGraph, GroundTruthManifest]:
    """Build the synthetic graph and its ground-truth manifest."""
    config.validate()
    rng = random.Random(config.seed)
    graph = PropertyGraph()
    manifest = GroundTruthManifest(seed=config.seed, config=config.to_dict())

    n = config.n_customers
    if n == 0:
        manifest.counts = _empty_counts()
        return graph, manifest

    epoch = _parse_ts(config.as_of)
    window_start = epoch - config.lookback_months * 30 * _DAY

    # ---- staging -------------------------------------------------------------

    customers = []
    for i in range(1, n + 1):
        name = f"{rng.choice(vocab.FIRST_NAMES)} {rng.choice(vocab.LAST_NAMES)}"
        dob = _iso_date(epoch - rng.randint(21 * 365, 80 * 365) * _DAY)
        customers.append({
            "id": schema.format_id("Customer", i),
            "name": name,
            "nationality": rng.choice(vocab.COUNTRIES),
            "date_of_birth": dob,
            "occupation": rng.choice(vocab.OCCUPATIONS),
        })

    # addresses: every address houses at least one customer; extra residence
    # slots create organic sharing
    ring_count = config.planted_rings
    addr_lo, addr_hi = config.address_bounds
    ring_addr_reserve = sum(1 for r in range(ring_count)
                            if RING_MECHANISMS[r % 3] == "shared-address")
    ring_phone_reserve = sum(1 for r in range(ring_count)
                             if RING_MECHANISMS[r % 3] == "shared-phone")
    n_addresses = max(1, rng.randint(addr_lo, addr_hi) - ring_addr_reserve) \
        if addr_hi else 0
    n_addresses = min(n_addresses, 2 * n - 1)
    addresses = []
    for i in range(1, n_addresses + 1):
        addresses.append({
            "id": schema.format_id("Address", i),
            "street": f"{rng.randint(1, 220)} {rng.choice(vocab.STREETS)}",
            "city": rng.choice(vocab.CITIES),
            "country": rng.choice(vocab.COUNTRIES),
        })

    # residence slots: enough so each address is inhabited, plus ~2% sharing
    lives_at = []  # (customer idx, address idx, since)
    slots: list[int] = []
    per_customer = [1] * n
    needed = max(n_addresses - n, 0) + max(1, round(0.02 * n))
    bump_targets = list(range(n))
    rng.shuffle(bump_targets)
    for j in range(needed):
        per_customer[bump_targets[j % n]] += 1
    for ci, count in enumerate(per_customer):
        slots.extend([ci] * count)
    rng.shuffle(slots)
    for slot_no, ci in enumerate(slots):
        ai = slot_no if slot_no < n_addresses else rng.randrange(n_addresses)
        since = _iso_date(epoch - rng.randint(30, 3650) * _DAY)
        lives_at.append((ci, ai, since))
    if len(slots) < n_addresses:
        raise KycGraphError("internal: address residency underflow")

    # phones: one per customer, ~3% shared
    n_phones = max(1, round(n * 0.97) - ring_phone_reserve)
    phones = [{"id": schema.format_id("Phone", i),
               "number": f"+1-{rng.randint(200, 989)}-"
                         f"{rng.randint(200, 989)}-{rng.randint(0, 9999):04d}"}
              for i in range(1, n_phones + 1)]
    has_phone = []  # (customer idx, phone idx)
    phone_slots = list(range(n))
    rng.shuffle(phone_slots)
    for slot_no, ci in enumerate(phone_slots):
        pi = slot_no if slot_no < n_phones else rng.randrange(n_phones)
        has_phone.append((ci, pi))

    # compliance flags: exact counts so configured rates are hit
    n_sanctioned = round(config.sanction_rate * n)
    n_pep = round(config.pep_rate * n)
    n_alerted = round(config.alert_rate * n)
    shuffled = list(range(n))
    rng.shuffle(shuffled)
    sanctioned = sorted(shuffled[:n_sanctioned])
    rng.shuffle(shuffled)
    pep_flagged = sorted(shuffled[:n_pep])
    rng.shuffle(shuffled)
    alerted = sorted(shuffled[:n_alerted])

    sanction_entities = []
    for i in range(1, max(1, round(n_sanctioned * 0.8)) + 1 if n_sanctioned else 1):
        sanction_entities.append({
            "id": schema.format_id("Sanction", i),
            "list_name": rng.choice(vocab.SANCTION_LISTS),
            "entity_name": f"{rng.choice(vocab.FIRST_NAMES)} "
                           f"{rng.choice(vocab.LAST_NAMES)}",
        })
    matches_sanction = []  # (customer idx, sanction idx, score)
    for ci in sanctioned:
        k = 2 if rng.random() < 0.1 and len(sanction_entities) > 1 else 1
        picks = rng.sample(range(len(sanction_entities)),
                           min(k, len(sanction_entities)))
        for si in picks:
            matches_sanction.append((ci, si, round(rng.uniform(0.72, 0.99), 2)))

    pep_entities = []
    for i in range(1, max(1, round(n_pep * 0.9)) + 1 if n_pep else 1):
        pep_entities.append({
            "id": schema.format_id("PEP", i),
            "name": f"{rng.choice(vocab.FIRST_NAMES)} "
                    f"{rng.choice(vocab.LAST_NAMES)}",
            "position": rng.choice(vocab.PEP_POSITIONS),
            "country": rng.choice(vocab.COUNTRIES),
        })
    linked_pep = []
    for ci in pep_flagged:
        pi = rng.randrange(len(pep_entities))
        linked_pep.append((ci, pi, rng.choice(("self", "close-associate",
                                               "family-member"))))

    alerts = []
    has_alert = []  # (customer idx, alert idx)
    for ci in alerted:
        for _ in range(rng.choices((1, 2, 3), weights=(70, 22, 8))[0]):
            ai = len(alerts) + 1
            alerts.append({
                "id": schema.format_id("Alert", ai),
                "alert_type": rng.choice(vocab.ALERT_TYPES),
                "status": "OPEN" if rng.random() < 0.6 else "CLOSED",
                "created_date": _iso_date(rng.randint(window_start, epoch)),
            })
            has_alert.append((ci, len(alerts) - 1))

    # risk level: HIGH forced for sanction matches, else 70/20/10
    sanctioned_set = set(sanctioned)
    alerted_set = set(alerted)
    risk_levels = []
    low, med, _high = config.risk_mix
    for ci in range(n):
        if ci in sanctioned_set:
            risk_levels.append("HIGH")
            continue
        u = rng.random()
        risk_levels.append("LOW" if u < low else
                           "MEDIUM" if u < low + med else "HIGH")

    # CDD cases: sanction match, or HIGH risk with an alert
    cases = []
    subject_of = []
    for ci in range(n):
        if ci in sanctioned_set or (risk_levels[ci] == "HIGH" and
                                    ci in alerted_set):
            cases.append({
                "id": schema.format_id("CDDCase", len(cases) + 1),
                "status": "OPEN" if rng.random() < 0.5 else "CLOSED",
                "opened_date": _iso_date(rng.randint(window_start, epoch)),
            })
            subject_of.append((ci, len(cases) - 1))

    # accounts
    accounts = []  # {"id", "owner": ci, "type", ...}
    acct_lo, acct_hi = config.accounts_per_customer
    for ci in range(n):
        for _ in range(rng.randint(acct_lo, acct_hi)):
            products = sorted(rng.sample(vocab.ACCOUNT_PRODUCTS,
                                         rng.randint(0, 3)))
            accounts.append({
                "id": schema.format_id("Account", len(accounts) + 1),
                "owner": ci,
                "type": rng.choice(vocab.ACCOUNT_TYPES),
                "balance": round(rng.lognormvariate(math.log(5000), 1.3), 2),
                "status": "OPEN" if rng.random() < 0.93 else "DORMANT",
                "products": products,
            })
    joint_owners = []  # (account idx, extra owner ci)
    n_joint = round(config.joint_account_rate * len(accounts))
    if n_joint:
        for acct_idx in rng.sample(range(len(accounts)), n_joint):
            owner = accounts[acct_idx]["owner"]
            extra = rng.randrange(n)
            if extra == owner:
                extra = (extra + 1) % n
            joint_owners.append((acct_idx, extra))

    # counterparties
    n_cpty = max(20, round(n * config.counterparties_per_customer))
    n_cpty_hr = round(config.high_risk_counterparty_share * n_cpty)
    counterparties = []
    hr_picks = set(rng.sample(range(n_cpty), n_cpty_hr)) if n_cpty_hr else set()
    for i in range(n_cpty):
        if i in hr_picks:
            jurisdiction = rng.choice(config.high_risk_jurisdictions)
        else:
            jurisdiction = rng.choice(vocab.COUNTRIES)
        counterparties.append({
            "id": schema.format_id("Counterparty", i + 1),
            "name": vocab.COMPANIES[i % len(vocab.COMPANIES)] if i < len(
                vocab.COMPANIES) else f"{rng.choice(vocab.COMPANIES)} "
                                      f"{i // len(vocab.COMPANIES) + 1}",
            "jurisdiction": jurisdiction,
        })
    high_risk_set = set(config.high_risk_jurisdictions)

    # transactions
    txn_lo, txn_hi = config.transaction_bounds
    n_txns = rng.randint(txn_lo, txn_hi) if txn_hi else 0
    acct_picker = _ZipfPicker(len(accounts), config.zipf_exponent, rng)
    cpty_picker = _ZipfPicker(n_cpty, 1.05, rng)
    txns = []
    hrj_count = [0] * n
    transacted_pairs = set()
    for i in range(1, n_txns + 1):
        src_idx = acct_picker.pick(rng)
        src = accounts[src_idx]
        internal = rng.random() < config.internal_transfer_share
        amount = round(rng.lognormvariate(math.log(120), 1.2), 2)
        ts = rng.randint(window_start, epoch)
        risk = round(rng.random(), 4)
        if internal and len(accounts) > 1:
            dst_idx = acct_picker.pick(rng)
            if dst_idx == src_idx:
                dst_idx = (dst_idx + 1) % len(accounts)
            dst = accounts[dst_idx]
            merchant = "INTERNAL TRANSFER"
            dst_kind = "Account"
            dst_id = dst["id"]
            if dst["owner"] != src["owner"]:
                transacted_pairs.add((src["owner"], dst["owner"]))
        else:
            ci = cpty_picker.pick(rng)
            cpty = counterparties[ci]
            merchant = cpty["name"]
            dst_kind = "Counterparty"
            dst_id = cpty["id"]
            if cpty["jurisdiction"] in high_risk_set:
                risk = round(min(1.0, risk + 0.4), 4)
                hrj_count[src["owner"]] += 1
        txns.append({
            "id": schema.format_id("Transaction", i),
            "src": src["id"],
            "dst_kind": dst_kind,
            "dst": dst_id,
            "amount": amount,
            "currency": rng.choice(vocab.CURRENCIES),
            "timestamp": _iso_ts(ts),
            "risk_score": risk,
            "merchant": merchant,
        })

    # ---- merge into the graph ---------------------------------------------------

    node_batch = [NodeMerge("Customer", c["id"], {
        "name": c["name"], "risk_level": risk_levels[ci],
        "nationality": c["nationality"], "date_of_birth": c["date_of_birth"],
        "occupation": c["occupation"],
        "high_risk_jurisdiction_count": hrj_count[ci],
    }) for ci, c in enumerate(customers)]
    node_batch += [NodeMerge("Address", a["id"], {
        "street": a["street"], "city": a["city"], "country": a["country"]})
        for a in addresses]
    node_batch += [NodeMerge("Phone", p["id"], {"number": p["number"]})
                   for p in phones]
    node_batch += [NodeMerge("Sanction", s["id"], {
        "list_name": s["list_name"], "entity_name": s["entity_name"]})
        for s in sanction_entities]
    node_batch += [NodeMerge("PEP", p["id"], {
        "name": p["name"], "position": p["position"], "country": p["country"]})
        for p in pep_entities]
    node_batch += [NodeMerge("Alert", a["id"], {
        "alert_type": a["alert_type"], "status": a["status"],
        "created_date": a["created_date"]}) for a in alerts]
    node_batch += [NodeMerge("CDDCase", c["id"], {
        "status": c["status"], "opened_date": c["opened_date"]})
        for c in cases]
    node_batch += [NodeMerge("Account", a["id"], {
        "type": a["type"], "balance": a["balance"], "status": a["status"],
        "products": a["products"]}) for a in accounts]
    node_batch += [NodeMerge("Counterparty", c["id"], {
        "name": c["name"], "jurisdiction": c["jurisdiction"]})
        for c in counterparties]
    node_batch += [NodeMerge("Transaction", t["id"], {
        "amount": t["amount"], "currency": t["currency"],
        "timestamp": t["timestamp"], "risk_score": t["risk_score"],
        "merchant": t["merchant"]}) for t in txns]
    graph.merge_nodes(node_batch)
    del node_batch

    cust_id = [c["id"] for c in customers]
    edge_batch = [EdgeMerge("LIVES_AT", "Customer", cust_id[ci],
                            "Address", addresses[ai]["id"], {"since": since})
                  for ci, ai, since in lives_at]
    edge_batch += [EdgeMerge("HAS_PHONE", "Customer", cust_id[ci],
                             "Phone", phones[pi]["id"])
                   for ci, pi in has_phone]
    edge_batch += [EdgeMerge("MATCHES_SANCTION", "Customer", cust_id[ci],
                             "Sanction", sanction_entities[si]["id"],
                             {"match_score": score,
                              "matched_name": customers[ci]["name"]})
                   for ci, si, score in matches_sanction]
    edge_batch += [EdgeMerge("LINKED_TO_PEP", "Customer", cust_id[ci],
                             "PEP", pep_entities[pi]["id"],
                             {"link_type": kind})
                   for ci, pi, kind in linked_pep]
    edge_batch += [EdgeMerge("HAS_ALERT", "Customer", cust_id[ci],
                             "Alert", alerts[ai]["id"])
                   for ci, ai in has_alert]
    edge_batch += [EdgeMerge("SUBJECT_OF", "Customer", cust_id[ci],
                             "CDDCase", cases[si]["id"])
                   for ci, si in subject_of]
    edge_batch += [EdgeMerge("OWNS", "Customer", cust_id[a["owner"]],
                             "Account", a["id"]) for a in accounts]
    edge_batch += [EdgeMerge("OWNS", "Customer", cust_id[extra],
                             "Account", accounts[ai]["id"])
                   for ai, extra in joint_owners]
    graph.merge_edges(edge_batch)
    del edge_batch

    txn_edges = []
    for t in txns:
        txn_edges.append(EdgeMerge("PERFORMED", "Account", t["src"],
                                   "Transaction", t["id"]))
        txn_edges.append(EdgeMerge("RECEIVED", "Transaction", t["id"],
                                   t["dst_kind"], t["dst"]))
    graph.merge_edges(txn_edges)
    del txn_edges

    graph.merge_edges([EdgeMerge("TRANSACTED_WITH", "Customer", cust_id[a],
                                 "Customer", cust_id[b])
                       for a, b in sorted(transacted_pairs)])

    # RELATED_TO: degree-bounded random pairs (max degree 3)
    related_target = min(round(0.015 * n * (n - 1) / 2), round(0.7 * n))
    degree = [0] * n
    related = set()
    attempts = 0
    while len(related) < related_target and attempts < related_target * 12:
        attempts += 1
        a, b = rng.randrange(n), rng.randrange(n)
        if a == b or degree[a] >= 3 or degree[b] >= 3 or (a, b) in related \
                or (b, a) in related:
            continue
        related.add((a, b))
        degree[a] += 1
        degree[b] += 1
    graph.merge_edges([EdgeMerge("RELATED_TO", "Customer", cust_id[a],
                                 "Customer", cust_id[b],
                                 {"relationship_kind":
                                  rng.choice(vocab.RELATIONSHIP_KINDS)})
                       for a, b in sorted(related)])

    # planted rings: disjoint, mechanisms round-robin
    available = [ci for ci in range(n)]
    rng.shuffle(available)
    cursor = 0
    for r in range(ring_count):
        mechanism = RING_MECHANISMS[r % 3]
        size = rng.randint(*config.ring_size)
        members = [cust_id[ci] for ci in
                   sorted(available[cursor:cursor + size])]
        cursor += size
        entry = plant_ring(graph, members, mechanism, existing=manifest.rings,
                           rng=rng, epoch=epoch)
        manifest.rings.append(entry)

    derive_shared_identifier_edges(graph)
    derive_transacted_with(graph)

    _fill_manifest(graph, manifest, config)
    return graph, manifest


def _empty_counts() -> dict:
    return {"customers": 0, "accounts": 0, "transactions": 0, "addresses": 0,
            "phones": 0, "counterparties": 0, "sanction_entities": 0,
            "pep_entities": 0, "alerts": 0, "cdd_cases": 0,
            "sanctioned_customers": 0, "pep_customers": 0,
            "alerted_customers": 0, "planted_rings": 0}


def _fill_manifest(graph: PropertyGraph, manifest: GroundTruthManifest,
                   config: GenConfig) -> None:
    """Per-customer expected aggregates, derived by direct store scans
    (never through the query engine, so the manifest stays an independent
    oracle for it)."""
    by_label = graph.counts_by_label()
    facts: dict[str, CustomerFacts] = {}
    for record in graph.nodes("Customer"):
        facts[record.business_id] = CustomerFacts(
            risk_level=record.properties["risk_level"])
    sanctioned = pep = alerted = 0
    hr = set(config.high_risk_jurisdictions)
    for cid, f in facts.items():
        key = ("Customer", cid)
        for edge in graph.out_edges(key):
            if edge.edge_type == "OWNS":
                f.accounts += 1
                for performed in graph.out_edges(edge.dst, "PERFORMED"):
                    f.transactions += 1
                    for received in graph.out_edges(performed.dst, "RECEIVED"):
                        if received.dst[0] == "Counterparty" and \
                                graph.node_props(received.dst)["jurisdiction"] in hr:
                            f.high_risk_transactions += 1
            elif edge.edge_type == "MATCHES_SANCTION":
                f.sanctions += 1
            elif edge.edge_type == "LINKED_TO_PEP":
                f.peps += 1
            elif edge.edge_type == "HAS_ALERT":
                f.alerts += 1
        sanctioned += 1 if f.sanctions else 0
        pep += 1 if f.peps else 0
        alerted += 1 if f.alerts else 0
    manifest.customers = facts
    manifest.counts = {
        "customers": by_label.get("Customer", 0),
        "accounts": by_label.get("Account", 0),
        "transactions": by_label.get("Transaction", 0),
        "addresses": by_label.get("Address", 0),
        "phones": by_label.get("Phone", 0),
        "counterparties": by_label.get("Counterparty", 0),
        "sanction_entities": by_label.get("Sanction", 0),
        "pep_entities": by_label.get("PEP", 0),
        "alerts": by_label.get("Alert", 0),
        "cdd_cases": by_label.get("CDDCase", 0),
        "sanctioned_customers": sanctioned,
        "pep_customers": pep,
        "alerted_customers": alerted,
        "planted_rings": len(manifest.rings),
    }


def _next_id(graph: PropertyGraph, label: str) -> str:
    ids = graph.node_ids(label)
    if not ids:
        return schema.format_id(label, 1)
    prefix, _digits = schema.ID_FORMATS[label]
    return schema.format_id(label, int(ids[-1][len(prefix):]) + 1)


def plant_ring(graph: PropertyGraph, members: list, mechanism: str,
               existing: list | None = None, rng: random.Random | None = None,
               epoch: int | None = None) -> RingEntry:
    """Connect ``members`` (customer IDs) through one linking mechanism.

    Members must be distinct existing customers and disjoint from every ring
    in ``existing`` (plants are kept disjoint so recall is unambiguous).
    Returns the manifest entry describing the plant.
    """
    if mechanism not in RING_MECHANISMS:
        raise ValueError(f"unknown ring mechanism {mechanism!r}; expected one "
                         f"of {RING_MECHANISMS}")
    if len(set(members)) != len(members) or len(members) < 2:
        raise ValueError("ring members must be at least 2 distinct customers")
    for cid in members:
        if not graph.has_node("Customer", cid):
            raise NotFoundError(f"no Customer node with id {cid!r}")
    for prior in existing or ():
        overlap = set(prior.members) & set(members)
        if overlap:
            raise ValueError(
                f"ring overlaps planted ring {prior.ring_id} on "
                f"{sorted(overlap)}; planted rings must stay disjoint")
    rng = rng or random.Random(0xA11CE)
    members = sorted(members)
    ring_id = f"ring-{len(existing or []) + 1:03d}-{mechanism}"
    identifier: dict = {}

    if mechanism == "shared-address":
        address_id = _next_id(graph, "Address")
        graph.merge_nodes([NodeMerge("Address", address_id, {
            "street": f"{rng.randint(1, 220)} {rng.choice(vocab.STREETS)}",
            "city": rng.choice(vocab.CITIES),
            "country": rng.choice(vocab.COUNTRIES)})])
        since = _iso_date((epoch or _parse_ts(GenConfig.as_of)) -
                          rng.randint(30, 1200) * _DAY)
        graph.merge_edges([EdgeMerge("LIVES_AT", "Customer", cid,
                                     "Address", address_id, {"since": since})
                           for cid in members])
        _link_all_pairs(graph, members, "SHARES_ADDRESS_WITH")
        identifier = {"address_id": address_id}
    elif mechanism == "shared-phone":
        phone_id = _next_id(graph, "Phone")
        graph.merge_nodes([NodeMerge("Phone", phone_id, {
            "number": f"+1-{rng.randint(200, 989)}-{rng.randint(200, 989)}-"
                      f"{rng.randint(0, 9999):04d}"})])
        graph.merge_edges([EdgeMerge("HAS_PHONE", "Customer", cid,
                                     "Phone", phone_id) for cid in members])
        _link_all_pairs(graph, members, "SHARES_PHONE_WITH")
        identifier = {"phone_id": phone_id}
    else:  # circular-transactions
        epoch = epoch or _parse_ts(GenConfig.as_of)
        first_accounts = {}
        for cid in members:
            owned = [e.dst for e in graph.out_edges(("Customer", cid), "OWNS")]
            if not owned:
                raise KycGraphError(
                    f"circular-transactions ring needs an account for {cid}")
            first_accounts[cid] = sorted(owned)[0]
        txn_ids = []
        hop_edges = []
        for i, cid in enumerate(members):
            nxt = members[(i + 1) % len(members)]
            txn_id = _next_id(graph, "Transaction")
            graph.merge_nodes([NodeMerge("Transaction", txn_id, {
                "amount": round(rng.uniform(900, 9800), 2),
                "currency": "USD",
                "timestamp": _iso_ts(epoch - rng.randint(1, 120) * _DAY
                                     + i),  # keep cycle order stable
                "risk_score": round(rng.uniform(0.55, 0.95), 4),
                "merchant": "INTERNAL TRANSFER"})])
            src_acct = first_accounts[cid]
            dst_acct = first_accounts[nxt]
            hop_edges.append(EdgeMerge("PERFORMED", "Account", src_acct[1],
                                       "Transaction", txn_id))
            hop_edges.append(EdgeMerge("RECEIVED", "Transaction", txn_id,
                                       "Account", dst_acct[1]))
            hop_edges.append(EdgeMerge("TRANSACTED_WITH", "Customer", cid,
                                       "Customer", nxt))
            txn_ids.append(txn_id)
        graph.merge_edges(hop_edges)
        identifier = {"transaction_ids": txn_ids}

    return RingEntry(ring_id=ring_id, mechanism=mechanism,
                     members=list(members), identifier=identifier)


def _link_all_pairs(graph: PropertyGraph, members: list, edge_type: str):
    batch = []
    for i, a in enumerate(members):
        for b in members[i + 1:]:
            batch.append(EdgeMerge(edge_type, "Customer", a, "Customer", b))
    graph.merge_edges(batch)  # symmetric type: both directions materialize


def derive_shared_identifier_edges(graph: PropertyGraph) -> int:
    """Materialize SHARES_ADDRESS_WITH / SHARES_PHONE_WITH between every
    customer pair with a common Address / Phone node.  Symmetric, no
    self-edges, idempotent.  Returns the number of stored edges added."""
    added = 0
    for hub_label, via, derived in (("Address", "LIVES_AT",
                                     "SHARES_ADDRESS_WITH"),
                                    ("Phone", "HAS_PHONE",
                                     "SHARES_PHONE_WITH")):
        batch = []
        for hub in graph.nodes(hub_label):
            residents = sorted({src for e in graph.in_edges(hub.key, via)
                                for src in (e.src,)})
            for i, a in enumerate(residents):
                for b in residents[i + 1:]:
                    batch.append(EdgeMerge(derived, "Customer", a[1],
                                           "Customer", b[1]))
        if batch:
            added += graph.merge_edges(batch).created
    return added


def derive_transacted_with(graph: PropertyGraph) -> int:
    """Materialize TRANSACTED_WITH(A -> B) whenever a transaction performed
    by one of A's accounts was received by one of B's accounts (A != B)."""
    pairs = set()
    for txn in graph.nodes("Transaction"):
        sources = [e.src for e in graph.in_edges(txn.key, "PERFORMED")]
        targets = [e.dst for e in graph.out_edges(txn.key, "RECEIVED")
                   if e.dst[0] == "Account"]
        if not targets or not sources:
            continue
        src_owners = {e.src[1] for acct in sources
                      for e in graph.in_edges(acct, "OWNS")}
        dst_owners = {e.src[1] for acct in targets
                      for e in graph.in_edges(acct, "OWNS")}
        for a in src_owners:
            for b in dst_owners:
                if a != b:
                    pairs.add((a, b))
    if not pairs:
        return 0
    batch = [EdgeMerge("TRANSACTED_WITH", "Customer", a, "Customer", b)
             for a, b in sorted(pairs)]
    return graph.merge_edges(batch).created
