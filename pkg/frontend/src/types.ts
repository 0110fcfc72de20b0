/** Wire types for the kycgraph JSON-RPC surface. */

export interface RpcError {
  code: number;
  message: string;
  data?: unknown;
}

export interface ToolResult {
  tool: string;
  duration_ms: number;
  truncated: boolean;
  payload: unknown;
  record_ids: string[];
}

export interface RpcResponse {
  jsonrpc: "2.0";
  id: number | string | null;
  result?: ToolResult | Record<string, unknown>;
  error?: RpcError;
}

export interface CatalogEntry {
  name: string;
  description: string;
  params_schema: Record<string, unknown>;
  result: string;
}

export interface ServerInfo {
  version: string;
  nodes: number;
  edges: number;
  by_label: Record<string, number>;
  latest_transaction: string;
  high_risk_jurisdictions: string[];
  read_only: boolean;
}

export interface ResultTable {
  columns: string[];
  rows: unknown[][];
  summary: { rows_returned: number; nodes_touched: number };
  touched_ids: string[];
  plan_text?: string;
}

export interface NodeCell {
  kind: "node";
  label: string;
  id: string;
  props: Record<string, unknown>;
}

/** One tool call made during an investigation, with its raw response. */
export interface StepRecord {
  index: number;
  tool: string;
  params: Record<string, unknown>;
  response: RpcResponse;
  rawText: string;
  elapsedMs: number;
}

/** A value shown in the answer, linked to the step that evidences it. */
export interface Claim {
  label: string;
  value: string;
  stepIndex: number | null;
}

export interface AnswerView {
  direct: string;
  details: Claim[];
  findings: string[];
}

export interface Transcript {
  question: string;
  steps: StepRecord[];
  answer: AnswerView | null;
  failed: boolean;
}

export function isNodeCell(cell: unknown): cell is NodeCell {
  return typeof cell === "object" && cell !== null &&
    (cell as { kind?: string }).kind === "node";
}
