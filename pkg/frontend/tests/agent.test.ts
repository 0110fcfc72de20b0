import { describe, expect, it } from "vitest";

import { runInvestigation, UnsupportedQuestionError, verifyTraceability }
  from "../src/agent.js";
import { RpcClient } from "../src/rpc.js";
import { CONSOLE_TEMPLATES, matchTemplate } from "../src/templates.js";
import type { StepRecord } from "../src/types.js";
import { FakeServer } from "./fake-server.js";

const CATALOG = new Set([
  "execute_cypher", "text_to_cypher", "get_customer_profile",
  "get_customer_risk_summary", "get_customer_accounts",
  "get_customer_sanctions", "find_customer_rings",
  "extract_customer_transactions", "trace_shared_accounts",
  "find_mutual_counterparties", "aggregate_customer_transactions",
  "summarize_customer_risk_profile",
]);
const PROTOCOL = new Set(["list_tools", "server_info"]);

function twentyQuestions(): string[] {
  const questions: string[] = [];
  const ids = ["CUST000001", "CUST000002"];
  for (const cid of ids) {
    questions.push(`What is the risk profile of ${cid}?`);
    questions.push(`What is the nationality of customer ${cid}?`);
    questions.push(`List all accounts owned by customer ${cid}.`);
    questions.push(`Which customers share an address with customer ${cid}?`);
    questions.push(`Which sanction list entries does customer ${cid} match?`);
    questions.push(`How many transactions did customer ${cid} perform in ` +
                   `the last 90 days?`);
    questions.push(`Who shares accounts with customer ${cid}?`);
    questions.push(`Summarize the risk profile of customer ${cid} based on ` +
                   `transactions, related parties, and watchlist matches.`);
  }
  questions.push("Find customer rings of size at least 3.");
  questions.push("Find customer rings of size at least 2.");
  questions.push("Which counterparties did customers CUST000001 and " +
                 "CUST000002 both transact with?");
  questions.push("How many transactions did customer CUST000001 perform " +
                 "in the last 720 days?");
  return questions;
}

describe("scripted console investigations", () => {
  it("matches every supported template example", () => {
    for (const template of CONSOLE_TEMPLATES) {
      const matched = matchTemplate(template.example);
      expect(matched?.template.id, template.example).toBe(template.id);
    }
  });

  it("runs 20 investigations with full evidence traceability and only " +
     "cataloged methods", async () => {
    const fake = new FakeServer();
    const client = new RpcClient("http://test", fake.fetch());
    const questions = twentyQuestions();
    expect(questions).toHaveLength(20);
    for (const question of questions) {
      const transcript = await runInvestigation(question, client);
      expect(transcript.failed, question).toBe(false);
      expect(transcript.answer?.direct).toBeTruthy();
      const problems = verifyTraceability(transcript);
      expect(problems, `${question}: ${problems.join("; ")}`).toEqual([]);
    }
    // the server-side request log saw only cataloged tool methods
    for (const entry of fake.requestLog) {
      expect(CATALOG.has(entry.method) || PROTOCOL.has(entry.method),
             entry.method).toBe(true);
    }
    const toolCalls = fake.requestLog.filter(
      (entry) => CATALOG.has(entry.method));
    expect(toolCalls.length).toBeGreaterThanOrEqual(20);
  });

  it("streams steps live through the onStep callback", async () => {
    const fake = new FakeServer();
    const client = new RpcClient("http://test", fake.fetch());
    const seen: StepRecord[] = [];
    await runInvestigation(
      "Summarize the risk profile of customer CUST000001 based on " +
      "transactions, related parties, and watchlist matches.",
      client, { onStep: (step) => seen.push(step) });
    expect(seen.map((step) => step.tool)).toEqual([
      "get_customer_risk_summary", "summarize_customer_risk_profile"]);
  });

  it("renders a not-found answer without fabricating fields", async () => {
    const fake = new FakeServer();
    fake.missingCustomers.add("CUST000404");
    const client = new RpcClient("http://test", fake.fetch());
    const transcript = await runInvestigation(
      "What is the risk profile of CUST000404?", client);
    expect(transcript.failed).toBe(true);
    expect(transcript.answer?.direct).toContain("not found");
    expect(transcript.answer?.details).toEqual([]);
  });

  it("rejects questions without a template, loudly", async () => {
    const fake = new FakeServer();
    const client = new RpcClient("http://test", fake.fetch());
    await expect(runInvestigation("please speculate freely", client))
      .rejects.toThrow(UnsupportedQuestionError);
    expect(fake.requestLog).toEqual([]);  // nothing was issued
  });
});
