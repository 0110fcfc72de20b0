/** Live acceptance checks against a running tool server.
 *
 * Skipped unless KYCGRAPH_SERVER is set, e.g.:
 *   kycgraph serve --snapshot ./snapshot --port 7688 &
 *   KYCGRAPH_SERVER=http://127.0.0.1:7688 KYCGRAPH_SNAPSHOT=./snapshot \
 *     npx vitest run tests/live.test.ts
 *
 * Covers the two console acceptance criteria: evidence traceability over
 * 20 scripted investigations with only cataloged methods in the server
 * request log, and byte-equality of raw-query results with the CLI.
 */

import { execFileSync } from "node:child_process";
import { describe, expect, it } from "vitest";

import { runInvestigation, verifyTraceability } from "../src/agent.js";
import { extractPayloadText, RpcClient } from "../src/rpc.js";

const SERVER = process.env.KYCGRAPH_SERVER;
const SNAPSHOT = process.env.KYCGRAPH_SNAPSHOT;
const live = SERVER ? describe : describe.skip;

const FIXED_QUERIES = [
  "MATCH (c:Customer) RETURN count(c)",
  "MATCH (c:Customer) RETURN c.risk_level, count(c) ORDER BY c.risk_level",
  "MATCH (c:Customer {customer_id: 'CUST000001'}) RETURN c",
  "MATCH (c:Customer {customer_id: 'CUST000001'})-[:OWNS]->(a:Account) " +
    "RETURN a.account_number, a.balance ORDER BY a.account_number",
  "MATCH (c:Customer)-[:MATCHES_SANCTION]->(s:Sanction) " +
    "RETURN c.customer_id, s.entity_name ORDER BY c.customer_id LIMIT 5",
  "MATCH (a:Customer)-[:SHARES_ADDRESS_WITH]->(b:Customer) " +
    "RETURN a.customer_id, b.customer_id ORDER BY a.customer_id LIMIT 10",
  "MATCH (t:Transaction) RETURN min(t.amount), max(t.amount), " +
    "sum(t.amount), avg(t.amount)",
  "MATCH (c:Customer) WHERE c.high_risk_jurisdiction_count > 0 " +
    "RETURN count(c)",
  "MATCH (x:Counterparty) RETURN x.jurisdiction, count(x) " +
    "ORDER BY count(x) DESC LIMIT 8",
  "MATCH (c:Customer)-[:HAS_ALERT]->(al:Alert) RETURN al.alert_type, " +
    "count(al) ORDER BY al.alert_type",
];

async function sampleCustomerIds(client: RpcClient): Promise<string[]> {
  const response = await client.call("execute_cypher", {
    query: "MATCH (c:Customer) RETURN c.customer_id ORDER BY c.customer_id " +
           "LIMIT 2",
    params: {},
  });
  const payload = (response.result as {
    payload: { rows: string[][] };
  }).payload;
  return payload.rows.map((row) => row[0]);
}

live("console against a live server", () => {
  it("20 scripted investigations: full traceability, cataloged methods " +
     "only", async () => {
    const client = new RpcClient(SERVER!);
    const logBefore = (await (await fetch(`${SERVER}/requestlog?limit=100000`))
      .json() as { method: string }[]).length;
    const [c1, c2] = await sampleCustomerIds(client);
    const questions = [
      `What is the risk profile of ${c1}?`,
      `What is the nationality of customer ${c1}?`,
      `List all accounts owned by customer ${c1}.`,
      `Which customers share an address with customer ${c1}?`,
      `Which sanction list entries does customer ${c1} match?`,
      `How many transactions did customer ${c1} perform in the last 90 days?`,
      `Who shares accounts with customer ${c1}?`,
      `Summarize the risk profile of customer ${c1} based on transactions, ` +
        `related parties, and watchlist matches.`,
      `What is the risk profile of ${c2}?`,
      `What is the nationality of customer ${c2}?`,
      `List all accounts owned by customer ${c2}.`,
      `Which customers share an address with customer ${c2}?`,
      `Which sanction list entries does customer ${c2} match?`,
      `How many transactions did customer ${c2} perform in the last 365 days?`,
      `Who shares accounts with customer ${c2}?`,
      `Summarize the risk profile of customer ${c2} based on transactions, ` +
        `related parties, and watchlist matches.`,
      "Find customer rings of size at least 3.",
      "Find customer rings of size at least 2.",
      `Which counterparties did customers ${c1} and ${c2} both transact ` +
        `with?`,
      `How many transactions did customer ${c1} perform in the last 720 days?`,
    ];
    expect(questions).toHaveLength(20);
    for (const question of questions) {
      const transcript = await runInvestigation(question, client);
      const problems = verifyTraceability(transcript);
      expect(problems, `${question}: ${problems.join("; ")}`).toEqual([]);
    }
    const log = await (await fetch(`${SERVER}/requestlog?limit=100000`))
      .json() as { method: string }[];
    const catalog = new Set((await client.listTools()).map((t) => t.name));
    for (const entry of log.slice(logBefore)) {
      const allowed = catalog.has(entry.method) ||
        entry.method === "list_tools" || entry.method === "server_info";
      expect(allowed, entry.method).toBe(true);
    }
  }, 120_000);

  it("raw-query results byte-match the CLI for 10 fixed queries",
     async () => {
    const client = new RpcClient(SERVER!);
    for (const query of FIXED_QUERIES) {
      const { rawText } = await client.callRaw("execute_cypher",
                                               { query, params: {} });
      const consoleBytes = extractPayloadText(rawText);
      expect(consoleBytes).not.toBeNull();
      const args = ["query", query, "--canonical"];
      if (SERVER) {
        args.push("--server", SERVER);
      } else if (SNAPSHOT) {
        args.push("--snapshot", SNAPSHOT);
      }
      const cliBytes = execFileSync("kycgraph", args, { encoding: "utf-8" })
        .trimEnd();
      expect(consoleBytes, query).toBe(cliBytes);
    }
  }, 120_000);
});
