/** DOM rendering: transcript panel, result tables, network SVG.
 *
 * Every value displayed in an answer is an anchor to the raw tool response
 * that evidences it; clicking scrolls to and expands that step.
 */

import { GraphModel, runLayout } from "./graph.js";
import { extractPayloadText } from "./rpc.js";
import type { ResultTable, StepRecord, Transcript } from "./types.js";

function el<K extends keyof HTMLElementTagNameMap>(
    tag: K, className = "", text = ""): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text) {
    node.textContent = text;
  }
  return node;
}

export function renderStep(step: StepRecord, host: HTMLElement): void {
  const card = el("details", "step-card");
  card.id = `step-${step.index}`;
  const summary = el("summary", "",
    `#${step.index} ${step.tool} (${step.elapsedMs.toFixed(0)} ms` +
    `${step.response.error ? ", ERROR" : ""})`);
  card.appendChild(summary);
  const params = el("pre", "step-params",
                    JSON.stringify(step.params, null, 1));
  card.appendChild(params);
  const body = el("pre", "step-body");
  body.textContent = extractPayloadText(step.rawText) ??
    JSON.stringify(step.response.error ?? {}, null, 1);
  card.appendChild(body);
  host.appendChild(card);
}

export function renderAnswer(transcript: Transcript,
                             host: HTMLElement): void {
  if (!transcript.answer) {
    return;
  }
  const panel = el("div", "answer-panel");
  panel.appendChild(el("h3", "", "Direct Answer"));
  panel.appendChild(el("p", "direct-answer", transcript.answer.direct));
  panel.appendChild(el("h3", "", "Supporting Details"));
  const list = el("ul", "detail-list");
  for (const detail of transcript.answer.details) {
    const item = el("li");
    item.appendChild(el("span", "detail-label", `${detail.label} = `));
    if (detail.stepIndex !== null) {
      const link = el("a", "evidence-link", detail.value);
      link.href = `#step-${detail.stepIndex}`;
      link.title = `evidence: step ${detail.stepIndex}`;
      link.addEventListener("click", () => {
        const card = document.getElementById(`step-${detail.stepIndex}`);
        if (card instanceof HTMLDetailsElement) {
          card.open = true;
        }
      });
      item.appendChild(link);
    } else {
      item.appendChild(el("span", "", detail.value));
    }
    list.appendChild(item);
  }
  panel.appendChild(list);
  panel.appendChild(el("h3", "", "Key Findings"));
  const findings = el("ul", "finding-list");
  for (const finding of transcript.answer.findings) {
    findings.appendChild(el("li", "", finding));
  }
  panel.appendChild(findings);
  host.appendChild(panel);
}

export function renderTable(table: ResultTable, host: HTMLElement): void {
  host.textContent = "";
  if (table.plan_text) {
    host.appendChild(el("pre", "plan-text", table.plan_text));
    return;
  }
  const grid = el("table", "result-table");
  const head = el("tr");
  for (const column of table.columns) {
    head.appendChild(el("th", "", column));
  }
  grid.appendChild(head);
  for (const row of table.rows.slice(0, 200)) {
    const tr = el("tr");
    for (const cell of row) {
      const text = typeof cell === "object" && cell !== null
        ? JSON.stringify(cell) : String(cell);
      tr.appendChild(el("td", "", text));
    }
    grid.appendChild(tr);
  }
  host.appendChild(grid);
  host.appendChild(el("p", "table-summary",
    `${table.summary.rows_returned} row(s), ` +
    `${table.summary.nodes_touched} node(s) touched`));
}

const SVG_NS = "http://www.w3.org/2000/svg";

export function renderGraph(model: GraphModel, svg: SVGSVGElement,
                            onNodeClick: (id: string) => void): void {
  runLayout(model);
  svg.textContent = "";
  for (const link of model.links.values()) {
    const a = model.nodes.get(link.source);
    const b = model.nodes.get(link.target);
    if (!a || !b) {
      continue;
    }
    const line = document.createElementNS(SVG_NS, "line");
    line.setAttribute("x1", String(a.x));
    line.setAttribute("y1", String(a.y));
    line.setAttribute("x2", String(b.x));
    line.setAttribute("y2", String(b.y));
    line.setAttribute("class", `edge edge-${link.type.toLowerCase()}`);
    const title = document.createElementNS(SVG_NS, "title");
    title.textContent = link.type;
    line.appendChild(title);
    svg.appendChild(line);
  }
  for (const node of model.nodes.values()) {
    const group = document.createElementNS(SVG_NS, "g");
    group.setAttribute("class",
      `node node-${node.label.toLowerCase()}` +
      (node.highlighted ? " ring-member" : ""));
    const circle = document.createElementNS(SVG_NS, "circle");
    circle.setAttribute("cx", String(node.x));
    circle.setAttribute("cy", String(node.y));
    circle.setAttribute("r", node.label === "Customer" ? "11" : "7");
    group.appendChild(circle);
    const text = document.createElementNS(SVG_NS, "text");
    text.setAttribute("x", String(node.x + 12));
    text.setAttribute("y", String(node.y + 4));
    text.textContent = node.caption;
    group.appendChild(text);
    group.addEventListener("click", () => onNodeClick(node.id));
    svg.appendChild(group);
  }
}
