/** Page wiring: settings, investigation tab, network explorer, raw query. */

import { runInvestigation, UnsupportedQuestionError } from "./agent.js";
import { GraphModel } from "./graph.js";
import { RpcClient } from "./rpc.js";
import { ConsoleSession } from "./session.js";
import { CONSOLE_TEMPLATES } from "./templates.js";
import type { ResultTable, StepRecord } from "./types.js";
import { renderAnswer, renderGraph, renderStep, renderTable } from "./views.js";

const session = new ConsoleSession(window.localStorage);

function byId<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

function client(): RpcClient {
  return new RpcClient(session.settings.serverUrl);
}

function setBanner(text: string, kind: "info" | "error" = "info"): void {
  const banner = byId<HTMLDivElement>("banner");
  banner.textContent = text;
  banner.className = text ? `banner banner-${kind}` : "banner hidden";
}

async function refreshServerInfo(): Promise<void> {
  try {
    const info = await client().serverInfo();
    byId<HTMLSpanElement>("server-status").textContent =
      `${info.nodes} nodes / ${info.edges} edges, ` +
      `latest txn ${info.latest_transaction}` +
      (info.read_only ? " (read-only)" : "");
    setBanner("");
  } catch (error) {
    setBanner(`server unreachable: ${String(error)} (retry after checking ` +
              `the URL in settings)`, "error");
  }
}

// -- investigate tab ----------------------------------------------------------

async function investigate(): Promise<void> {
  const question = byId<HTMLInputElement>("question-input").value.trim();
  if (!question) {
    return;
  }
  const stepsHost = byId<HTMLDivElement>("steps-host");
  const answerHost = byId<HTMLDivElement>("answer-host");
  stepsHost.textContent = "";
  answerHost.textContent = "";
  setBanner("investigating...");
  try {
    const transcript = await runInvestigation(question, client(), {
      onStep: (step: StepRecord) => renderStep(step, stepsHost),
    });
    session.record(transcript);
    renderAnswer(transcript, answerHost);
    setBanner(transcript.failed ? "finished with tool errors" : "");
  } catch (error) {
    if (error instanceof UnsupportedQuestionError) {
      setBanner(`${error.message}; supported shapes are listed below`,
                "error");
    } else {
      setBanner(String(error), "error");
    }
  }
}

// -- network explorer -----------------------------------------------------------

const model = new GraphModel();

function selectedEdgeTypes(): Set<string> {
  const picks = new Set<string>();
  document.querySelectorAll<HTMLInputElement>(".edge-filter:checked")
    .forEach((box) => picks.add(box.value));
  return picks;
}

async function expandCustomer(customerId: string): Promise<void> {
  const table = await client().call("execute_cypher", {
    query: "MATCH (c:Customer {customer_id: $id})-[r]-(n) RETURN r, n",
    params: { id: customerId },
  });
  if (table.error) {
    setBanner(table.error.message, "error");
    return;
  }
  const payload = (table.result as { payload: ResultTable }).payload;
  model.addNeighborhood(customerId, "Customer", payload, selectedEdgeTypes());
  renderGraph(model, networkSvg(),
              (id) => {
                if (id.startsWith("CUST")) {
                  void expandCustomer(id);
                }
              });
}

async function exploreNetwork(): Promise<void> {
  const customerId = byId<HTMLInputElement>("explore-input").value.trim();
  if (!customerId) {
    return;
  }
  model.clear();
  await expandCustomer(customerId);
}

async function overlayRings(): Promise<void> {
  const response = await client().call("find_customer_rings",
                                       { min_size: 2, limit: 50 });
  if (response.error) {
    setBanner(response.error.message, "error");
    return;
  }
  const payload = (response.result as {
    payload: { rings: { members: string[] }[] };
  }).payload;
  const members = payload.rings.flatMap((ring) => ring.members);
  model.highlight(members);
  renderGraph(model, networkSvg(),
              (id) => void expandCustomer(id));
}

// -- raw query tab ----------------------------------------------------------------

async function runQuery(): Promise<void> {
  const text = byId<HTMLTextAreaElement>("query-input").value.trim();
  if (!text) {
    return;
  }
  const explain = byId<HTMLInputElement>("explain-toggle").checked;
  const query = explain && !/^explain\s/i.test(text)
    ? `EXPLAIN ${text}` : text;
  const { response, rawText } = await client().callRaw("execute_cypher",
                                                       { query, params: {} });
  const host = byId<HTMLDivElement>("query-result");
  if (response.error) {
    host.textContent = "";
    const message = document.createElement("pre");
    message.className = "query-error";
    message.textContent =
      `error ${response.error.code}: ${response.error.message}`;
    host.appendChild(message);
    return;
  }
  const payload = (response.result as { payload: ResultTable }).payload;
  renderTable(payload, host);
  byId<HTMLTextAreaElement>("canonical-output").value =
    (await import("./rpc.js")).extractPayloadText(rawText) ?? "";
}

// -- wiring --------------------------------------------------------------------------

function showTab(name: string): void {
  document.querySelectorAll<HTMLElement>(".tab-body").forEach((panel) => {
    panel.classList.toggle("hidden", panel.id !== `tab-${name}`);
  });
  document.querySelectorAll<HTMLButtonElement>(".tab-button")
    .forEach((button) => {
      button.classList.toggle("active", button.dataset.tab === name);
    });
}

function init(): void {
  byId<HTMLInputElement>("server-url").value = session.settings.serverUrl;
  byId<HTMLSelectElement>("backend-select").value = session.settings.backend;
  byId<HTMLInputElement>("server-url").addEventListener("change", (event) => {
    session.saveSettings({
      serverUrl: (event.target as HTMLInputElement).value,
    });
    void refreshServerInfo();
  });
  byId<HTMLSelectElement>("backend-select").addEventListener("change",
    (event) => {
      const backend = (event.target as HTMLSelectElement).value as
        "scripted" | "remote";
      session.saveSettings({ backend });
      if (backend === "remote") {
        setBanner("remote backend runs through the CLI agent; the console " +
                  "scripted backend stays active here", "info");
      }
    });
  byId<HTMLButtonElement>("ask-button").addEventListener("click",
    () => void investigate());
  byId<HTMLButtonElement>("explore-button").addEventListener("click",
    () => void exploreNetwork());
  byId<HTMLButtonElement>("rings-button").addEventListener("click",
    () => void overlayRings());
  byId<HTMLButtonElement>("query-button").addEventListener("click",
    () => void runQuery());
  document.querySelectorAll<HTMLButtonElement>(".tab-button")
    .forEach((button) => {
      button.addEventListener("click", () => showTab(button.dataset.tab!));
    });
  const examples = byId<HTMLUListElement>("example-questions");
  for (const template of CONSOLE_TEMPLATES) {
    const item = document.createElement("li");
    const link = document.createElement("a");
    link.textContent = template.example;
    link.href = "#";
    link.addEventListener("click", (event) => {
      event.preventDefault();
      byId<HTMLInputElement>("question-input").value = template.example;
    });
    item.appendChild(link);
    examples.appendChild(item);
  }
  showTab("investigate");
  void refreshServerInfo();
}

document.addEventListener("DOMContentLoaded", init);

function networkSvg(): SVGSVGElement {
  const node = document.getElementById("network-svg");
  if (!(node instanceof SVGSVGElement)) {
    throw new Error("missing #network-svg");
  }
  return node;
}
