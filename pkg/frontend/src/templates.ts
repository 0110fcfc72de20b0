/** Scripted question templates for the console backend.
 *
 * Each template maps a recognized analyst question to a plan of cataloged
 * tool calls and builds the final answer exclusively from the returned
 * payloads, so every rendered value can link back to a raw response.
 */

import type { AnswerView, Claim, ResultTable, StepRecord } from "./types.js";

export interface PlanStep {
  tool: string;
  params: Record<string, unknown>;
}

export interface ConsoleTemplate {
  id: string;
  example: string;
  match(question: string): Record<string, string> | null;
  plan(slots: Record<string, string>): PlanStep[];
  answer(slots: Record<string, string>, steps: StepRecord[]): AnswerView;
}

function payloadOf(step: StepRecord): Record<string, unknown> {
  const result = step.response.result as { payload?: unknown } | undefined;
  return (result?.payload ?? {}) as Record<string, unknown>;
}

function tableOf(step: StepRecord): ResultTable {
  return payloadOf(step) as unknown as ResultTable;
}

function claim(label: string, value: unknown, stepIndex: number): Claim {
  return { label, value: String(value), stepIndex };
}

function matcher(pattern: RegExp) {
  return (question: string) => {
    const hit = pattern.exec(question.trim());
    return hit ? { ...(hit.groups ?? {}) } : null;
  };
}

const CID = String.raw`(?<cid>CUST\d{6})`;

export const CONSOLE_TEMPLATES: ConsoleTemplate[] = [
  {
    id: "risk_profile",
    example: "What is the risk profile of CUST000001?",
    match: matcher(new RegExp(
      `^What is the risk profile of (customer )?${CID}\\?$`, "i")),
    plan: (slots) => [
      { tool: "get_customer_risk_summary", params: { customer_id: slots.cid } },
    ],
    answer: (slots, steps) => {
      const risk = payloadOf(steps[0]) as {
        risk_level: string; risk_factors: string[]; open_alert_count: number;
        alert_count: number; high_risk_jurisdiction_txn_count: number;
        sanctions: unknown[]; peps: unknown[];
      };
      const details: Claim[] = [
        claim("risk_level", risk.risk_level, 0),
        claim("alert_count", risk.alert_count, 0),
        claim("high_risk_jurisdiction_txn_count",
              risk.high_risk_jurisdiction_txn_count, 0),
      ];
      for (const factor of risk.risk_factors) {
        details.push(claim("risk_factor", factor, 0));
      }
      return {
        direct: `Customer ${slots.cid} has a ${risk.risk_level} risk level.`,
        details,
        findings: risk.risk_factors.length
          ? [`${risk.risk_factors.length} high-risk factor(s) present`]
          : ["no high-risk factors on record"],
      };
    },
  },
  {
    id: "nationality",
    example: "What is the nationality of customer CUST000001?",
    match: matcher(new RegExp(
      `^What is the nationality of (customer )?${CID}\\?$`, "i")),
    plan: (slots) => [{
      tool: "execute_cypher",
      params: {
        query: "MATCH (c:Customer {customer_id: $id}) " +
               "RETURN c.nationality AS nationality",
        params: { id: slots.cid },
      },
    }],
    answer: (slots, steps) => {
      const table = tableOf(steps[0]);
      const value = table.rows.length ? String(table.rows[0][0]) : null;
      if (value === null) {
        return {
          direct: `Customer ${slots.cid} was not found in the graph.`,
          details: [],
          findings: ["no matching customer node; nothing inferred"],
        };
      }
      return {
        direct: `Customer ${slots.cid} has nationality ${value}.`,
        details: [claim("nationality", value, 0)],
        findings: ["single attribute lookup"],
      };
    },
  },
  {
    id: "accounts",
    example: "List all accounts owned by customer CUST000001.",
    match: matcher(new RegExp(
      `^List all accounts owned by (customer )?${CID}\\.?$`, "i")),
    plan: (slots) => [
      { tool: "get_customer_accounts", params: { customer_id: slots.cid } },
    ],
    answer: (slots, steps) => {
      const listing = payloadOf(steps[0]) as {
        total_accounts: number;
        accounts: { account_number: string; type: string; balance: number;
                    status: string }[];
      };
      const details = listing.accounts.map((account) =>
        claim("account", account.account_number, 0));
      details.push(claim("total_accounts", listing.total_accounts, 0));
      return {
        direct: `Customer ${slots.cid} owns ${listing.total_accounts} ` +
                `account(s).`,
        details,
        findings: [`account types: ${[...new Set(
          listing.accounts.map((account) => account.type))].join(", ") ||
          "none"}`],
      };
    },
  },
  {
    id: "shared_address",
    example: "Which customers share an address with customer CUST000001?",
    match: matcher(new RegExp(
      `^Which customers share an address with (customer )?${CID}\\?$`, "i")),
    plan: (slots) => [{
      tool: "execute_cypher",
      params: {
        query: "MATCH (c:Customer {customer_id: $id})-" +
               "[:SHARES_ADDRESS_WITH]->(o:Customer) " +
               "RETURN o.customer_id AS customer_id ORDER BY customer_id",
        params: { id: slots.cid },
      },
    }],
    answer: (slots, steps) => {
      const table = tableOf(steps[0]);
      const sharers = table.rows.map((row) => String(row[0]));
      return {
        direct: `Customer ${slots.cid} shares an address with ` +
                `${sharers.length} customer(s).`,
        details: sharers.map((other) => claim("address_sharer", other, 0)),
        findings: sharers.length
          ? ["shared-identifier link present"]
          : ["no address sharing recorded"],
      };
    },
  },
  {
    id: "sanctions",
    example: "Which sanction list entries does customer CUST000001 match?",
    match: matcher(new RegExp(
      `^Which sanction list entries does (customer )?${CID} match\\?$`, "i")),
    plan: (slots) => [
      { tool: "get_customer_sanctions", params: { customer_id: slots.cid } },
    ],
    answer: (slots, steps) => {
      const exposure = payloadOf(steps[0]) as {
        sanction_matches: { entity_name: string; list_name: string }[];
        pep_links: { name: string }[];
        watchlist_total: number;
      };
      const details: Claim[] = [];
      for (const hit of exposure.sanction_matches) {
        details.push(claim("sanction_entity", hit.entity_name, 0));
        details.push(claim("sanction_list", hit.list_name, 0));
      }
      for (const pep of exposure.pep_links) {
        details.push(claim("pep_link", pep.name, 0));
      }
      return {
        direct: `Customer ${slots.cid} matches ` +
                `${exposure.sanction_matches.length} sanction entr(y/ies).`,
        details,
        findings: exposure.watchlist_total
          ? ["watchlist exposure present"]
          : ["no watchlist exposure"],
      };
    },
  },
  {
    id: "txn_count",
    example: "How many transactions did customer CUST000001 perform in the " +
             "last 90 days?",
    match: matcher(new RegExp(
      `^How many transactions did (customer )?${CID} perform in the last ` +
      String.raw`(?<days>\d+) days\?$`, "i")),
    plan: (slots) => [{
      tool: "extract_customer_transactions",
      params: { customer_id: slots.cid,
                lookback_days: parseInt(slots.days, 10) },
    }],
    answer: (slots, steps) => {
      const extract = payloadOf(steps[0]) as {
        summary: { count: number; total_amount: number };
      };
      return {
        direct: `Customer ${slots.cid} performed ${extract.summary.count} ` +
                `transaction(s) in the last ${slots.days} days.`,
        details: [
          claim("txn_count", extract.summary.count, 0),
          claim("total_amount", extract.summary.total_amount, 0),
        ],
        findings: ["window anchored at the newest transaction in the graph"],
      };
    },
  },
  {
    id: "co_holders",
    example: "Who shares accounts with customer CUST000001?",
    match: matcher(new RegExp(
      `^Who shares accounts with (customer )?${CID}\\?$`, "i")),
    plan: (slots) => [
      { tool: "trace_shared_accounts", params: { customer_id: slots.cid } },
    ],
    answer: (slots, steps) => {
      const trace = payloadOf(steps[0]) as {
        co_holders: { customer_id: string; flagged: boolean }[];
      };
      return {
        direct: `${trace.co_holders.length} customer(s) share accounts ` +
                `with ${slots.cid}.`,
        details: trace.co_holders.map((holder) =>
          claim("co_holder", holder.customer_id, 0)),
        findings: trace.co_holders.some((holder) => holder.flagged)
          ? ["a co-holder carries watchlist exposure"]
          : ["no flagged co-holders"],
      };
    },
  },
  {
    id: "rings",
    example: "Find customer rings of size at least 3.",
    match: matcher(new RegExp(
      String.raw`^Find customer rings of size at least (?<min>\d+)\.?$`, "i")),
    plan: (slots) => [{
      tool: "find_customer_rings",
      params: { min_size: parseInt(slots.min, 10) },
    }],
    answer: (slots, steps) => {
      const report = payloadOf(steps[0]) as {
        ring_count: number;
        rings: { ring_id: string; size: number; members: string[] }[];
      };
      const details: Claim[] = [claim("ring_count", report.ring_count, 0)];
      for (const ring of report.rings) {
        for (const member of ring.members) {
          details.push(claim(`${ring.ring_id} member`, member, 0));
        }
      }
      return {
        direct: `${report.ring_count} ring(s) of size >= ${slots.min} found.`,
        details,
        findings: report.rings.map((ring) =>
          `${ring.ring_id}: ${ring.size} members`),
      };
    },
  },
  {
    id: "mutual_counterparties",
    example: "Which counterparties did customers CUST000001 and CUST000002 " +
             "both transact with?",
    match: matcher(new RegExp(
      String.raw`^Which counterparties did customers (?<c1>CUST\d{6}) and ` +
      String.raw`(?<c2>CUST\d{6}) both transact with\?$`, "i")),
    plan: (slots) => [{
      tool: "find_mutual_counterparties",
      params: { customer_ids: [slots.c1, slots.c2], window_days: 730 },
    }],
    answer: (slots, steps) => {
      const result = payloadOf(steps[0]) as {
        mutual_counterparties: { counterparty_id: string; name: string }[];
      };
      return {
        direct: `${result.mutual_counterparties.length} mutual ` +
                `counterpart(y/ies) link ${slots.c1} and ${slots.c2}.`,
        details: result.mutual_counterparties.map((entry) =>
          claim("mutual_counterparty", entry.name, 0)),
        findings: result.mutual_counterparties.length
          ? ["shared transactional links found"]
          : ["no shared counterparties in the window"],
      };
    },
  },
  {
    id: "full_summary",
    example: "Summarize the risk profile of customer CUST000001 based on " +
             "transactions, related parties, and watchlist matches.",
    match: matcher(new RegExp(
      `^Summarize the risk profile of (customer )?${CID} based on ` +
      `transactions, related parties, and watchlist matches\\.?$`, "i")),
    plan: (slots) => [
      { tool: "get_customer_risk_summary", params: { customer_id: slots.cid } },
      { tool: "summarize_customer_risk_profile",
        params: { customer_id: slots.cid } },
    ],
    answer: (slots, steps) => {
      const risk = payloadOf(steps[0]) as {
        risk_level: string; alert_count: number;
      };
      const summary = payloadOf(steps[1]) as {
        transaction_summary: { count: number; total_amount: number };
        related_party_count: number;
        rings: unknown[];
      };
      return {
        direct: `Customer ${slots.cid} has risk level ${risk.risk_level} ` +
                `with ${summary.transaction_summary.count} transaction(s) ` +
                `in the last year.`,
        details: [
          claim("risk_level", risk.risk_level, 0),
          claim("alert_count", risk.alert_count, 0),
          claim("txn_count", summary.transaction_summary.count, 1),
          claim("total_amount", summary.transaction_summary.total_amount, 1),
          claim("related_party_count", summary.related_party_count, 1),
          claim("ring_membership_count", summary.rings.length, 1),
        ],
        findings: summary.rings.length
          ? ["customer appears in a detected ring"]
          : ["no ring membership detected"],
      };
    },
  },
];

export function matchTemplate(question: string):
    { template: ConsoleTemplate; slots: Record<string, string> } | null {
  for (const template of CONSOLE_TEMPLATES) {
    const slots = template.match(question);
    if (slots) {
      return { template, slots };
    }
  }
  return null;
}
