/** In-memory stand-in for the tool server, shape-faithful to the Python
 * dispatcher: canonical envelopes, tool payload wrappers, a request log.
 */

import type { FetchLike } from "../src/rpc.js";

const CATALOG_NAMES = [
  "execute_cypher", "text_to_cypher", "get_customer_profile",
  "get_customer_risk_summary", "get_customer_accounts",
  "get_customer_sanctions", "find_customer_rings",
  "extract_customer_transactions", "trace_shared_accounts",
  "find_mutual_counterparties", "aggregate_customer_transactions",
  "summarize_customer_risk_profile",
];

type Json = Record<string, unknown>;

function canonical(value: unknown): string {
  if (value === null || typeof value !== "object") {
    return JSON.stringify(value);
  }
  if (Array.isArray(value)) {
    return `[${value.map(canonical).join(",")}]`;
  }
  const keys = Object.keys(value as Json).sort();
  const body = keys.map((key) =>
    `${JSON.stringify(key)}:${canonical((value as Json)[key])}`);
  return `{${body.join(",")}}`;
}

export class FakeServer {
  readonly requestLog: { method: string }[] = [];
  missingCustomers = new Set<string>();

  handle(request: Json): Json {
    const method = request.method as string;
    this.requestLog.push({ method });
    const id = request.id as number;
    if (method === "list_tools") {
      return { jsonrpc: "2.0", id, result: { tools: CATALOG_NAMES.map(
        (name) => ({ name, description: name, params_schema: {},
                     result: "" })) } };
    }
    if (method === "server_info") {
      return { jsonrpc: "2.0", id, result: {
        version: "0.1.0", nodes: 100, edges: 300, by_label: { Customer: 10 },
        latest_transaction: "2025-06-29T00:00:00Z",
        high_risk_jurisdictions: ["IR"], read_only: true } };
    }
    if (!CATALOG_NAMES.includes(method)) {
      return { jsonrpc: "2.0", id,
               error: { code: -32601, message: `unknown method '${method}'` } };
    }
    const params = (request.params ?? {}) as Json;
    const cid = (params.customer_id ??
                 (params.params as Json | undefined)?.id ??
                 (params.customer_ids as string[] | undefined)?.[0]) as
                 string | undefined;
    if (cid && this.missingCustomers.has(cid)) {
      return { jsonrpc: "2.0", id, error: {
        code: 1001, message: `no Customer node with id '${cid}'` } };
    }
    return { jsonrpc: "2.0", id, result: {
      tool: method, duration_ms: 1.5, truncated: false,
      payload: this.payload(method, params),
      record_ids: cid ? [cid] : [] } };
  }

  private payload(method: string, params: Json): unknown {
    const cid = (params.customer_id as string) ?? "CUST000001";
    switch (method) {
      case "execute_cypher": {
        const query = params.query as string;
        if (query.includes("nationality")) {
          return { columns: ["nationality"], rows: [["DE"]],
                   summary: { rows_returned: 1, nodes_touched: 1 },
                   touched_ids: [this.queryId(params)] };
        }
        if (query.includes("SHARES_ADDRESS_WITH")) {
          return { columns: ["customer_id"],
                   rows: [["CUST000033"], ["CUST000044"]],
                   summary: { rows_returned: 2, nodes_touched: 3 },
                   touched_ids: [this.queryId(params), "CUST000033",
                                 "CUST000044"] };
        }
        if (query.includes("-[r]-(n)")) {
          const centerId = this.queryId(params);
          return { columns: ["r", "n"], rows: [
            [{ kind: "edge", type: "OWNS", src: `Customer:${centerId}`,
               dst: "Account:ACC00000001", props: {} },
             { kind: "node", label: "Account", id: "ACC00000001",
               props: { balance: 10.5 } }],
            [{ kind: "edge", type: "RELATED_TO", src: `Customer:${centerId}`,
               dst: "Customer:CUST000044", props: {} },
             { kind: "node", label: "Customer", id: "CUST000044",
               props: { name: "Iris Berg" } }],
          ], summary: { rows_returned: 2, nodes_touched: 3 },
             touched_ids: [centerId, "ACC00000001", "CUST000044"] };
        }
        return { columns: ["count(c)"], rows: [[100]],
                 summary: { rows_returned: 1, nodes_touched: 100 },
                 touched_ids: [] };
      }
      case "get_customer_risk_summary":
        return { customer_id: cid, name: "Ava Keller", risk_level: "MEDIUM",
                 risk_factors: ["sanction-list match",
                                "open compliance alert"],
                 sanctions: [{ entity_name: "Ava K" }], peps: [],
                 open_alert_count: 1, alert_count: 5,
                 high_risk_jurisdiction_txn_count: 2,
                 declared_high_risk_jurisdiction_count: 2 };
      case "get_customer_accounts":
        return { customer_id: cid, name: "Ava Keller", total_accounts: 2,
                 accounts: [
                   { account_number: "ACC00000001", type: "CHECKING",
                     balance: 1250.75, status: "OPEN", products: [] },
                   { account_number: "ACC00000002", type: "SAVINGS",
                     balance: 90.5, status: "OPEN", products: [] }] };
      case "get_customer_sanctions":
        return { customer_id: cid,
                 sanction_matches: [
                   { sanction_id: "SANC00001", list_name: "OFAC_SDN",
                     entity_name: "Ava K", match_score: 0.91,
                     matched_name: "Ava Keller" }],
                 pep_links: [{ pep_id: "PEP00001", name: "P. Official",
                               position: "mayor", country: "DE",
                               link_type: "family-member" }],
                 watchlist_total: 2 };
      case "extract_customer_transactions":
        return { customer_id: cid,
                 window: { since: "2025-03-01T00:00:00Z",
                           now: "2025-06-29T00:00:00Z" },
                 transactions: [
                   { txn_id: "TXN000000001", timestamp: "2025-04-01T10:00:00Z",
                     amount: 120.5, currency: "USD", risk_score: 0.2,
                     merchant: "Harbor Light Foods",
                     account_number: "ACC00000001", counterparties: [] }],
                 summary: { count: 7, total_amount: 934.21,
                            mean_amount: 133.46, max_amount: 410.0,
                            high_risk_count: 1,
                            high_risk_score_threshold: 0.7 } };
      case "trace_shared_accounts":
        return { customer_id: cid, shared_account_count: 1,
                 co_holders: [{ account_number: "ACC00000001",
                                customer_id: "CUST000077",
                                name: "Noah Silva", risk_level: "LOW",
                                sanction_match_count: 0, pep_link_count: 0,
                                flagged: false }] };
      case "find_customer_rings":
        return { ring_count: 1, min_size: params.min_size ?? 3,
                 mechanisms_searched: ["SHARES_ADDRESS_WITH"],
                 rings: [{ ring_id: "ring-001", size: 3,
                           members: ["CUST000010", "CUST000011",
                                     "CUST000012"],
                           mechanisms: ["SHARES_ADDRESS_WITH"],
                           shared_addresses: ["ADDR000009"],
                           shared_phones: [], earliest_link: "2024-01-01" }] };
      case "find_mutual_counterparties":
        return { customer_ids: params.customer_ids,
                 window: { since: "2023-06-29T00:00:00Z",
                           now: "2025-06-29T00:00:00Z" },
                 mutual_counterparties: [
                   { counterparty_id: "CPTY000003",
                     name: "Meridian Payments", jurisdiction: "US",
                     customers: params.customer_ids as string[],
                     customer_count: 2 }] };
      case "summarize_customer_risk_profile":
        return { customer_id: cid, profile: {}, risk: {},
                 transaction_summary: { count: 7, total_amount: 934.21 },
                 monthly_activity: [], shared_accounts: { co_holders: [] },
                 rings: [], related_party_count: 3 };
      default:
        return {};
    }
  }

  private queryId(params: Json): string {
    return ((params.params as Json | undefined)?.id as string) ??
      "CUST000001";
  }

  fetch(): FetchLike {
    return async (_url, init) => {
      const request = JSON.parse(String(init?.body ?? "{}")) as Json;
      const response = this.handle(request);
      const text = canonical(response);
      return { status: 200, text: async () => text };
    };
  }
}
