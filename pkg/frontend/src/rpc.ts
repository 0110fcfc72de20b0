/** JSON-RPC client over fetch, plus raw-byte payload extraction.
 *
 * The console talks only to the public /rpc surface. For byte-level
 * comparisons with the CLI, the raw response text is kept and the payload
 * substring is extracted without re-serializing (JSON number formatting
 * differs between runtimes, raw bytes do not lie).
 */

import type { CatalogEntry, RpcResponse, ServerInfo } from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) =>
  Promise<{ status: number; text(): Promise<string> }>;

export class RpcClient {
  private nextId = 1;
  readonly issuedMethods: string[] = [];

  constructor(readonly baseUrl: string,
              private readonly fetchImpl: FetchLike =
              (url, init) => fetch(url, init)) {}

  async callRaw(method: string, params?: Record<string, unknown>):
      Promise<{ response: RpcResponse; rawText: string }> {
    const request: Record<string, unknown> = {
      jsonrpc: "2.0",
      id: this.nextId++,
      method,
    };
    if (params !== undefined) {
      request.params = params;
    }
    this.issuedMethods.push(method);
    const http = await this.fetchImpl(`${this.baseUrl}/rpc`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(request),
    });
    const rawText = await http.text();
    if (http.status !== 200) {
      throw new Error(`tool server HTTP ${http.status}: ${rawText.slice(0, 200)}`);
    }
    return { response: JSON.parse(rawText) as RpcResponse, rawText };
  }

  async call(method: string, params?: Record<string, unknown>):
      Promise<RpcResponse> {
    return (await this.callRaw(method, params)).response;
  }

  async listTools(): Promise<CatalogEntry[]> {
    const response = await this.call("list_tools");
    const result = response.result as { tools: CatalogEntry[] };
    return result.tools;
  }

  async serverInfo(): Promise<ServerInfo> {
    const response = await this.call("server_info");
    return response.result as unknown as ServerInfo;
  }
}

/**
 * Extract the exact bytes of the `"payload":` value from a raw response,
 * honoring strings and nesting. Returns null when no payload is present.
 */
export function extractPayloadText(rawText: string): string | null {
  const marker = '"payload":';
  const start = rawText.indexOf(marker);
  if (start < 0) {
    return null;
  }
  let i = start + marker.length;
  while (i < rawText.length && rawText[i] === " ") {
    i++;
  }
  const open = rawText[i];
  if (open !== "{" && open !== "[") {
    // scalar payload: scan to the next unquoted , or }
    let j = i;
    if (open === '"') {
      j++;
      while (j < rawText.length) {
        if (rawText[j] === "\\") {
          j += 2;
          continue;
        }
        if (rawText[j] === '"') {
          return rawText.slice(i, j + 1);
        }
        j++;
      }
      return null;
    }
    while (j < rawText.length && !",}".includes(rawText[j])) {
      j++;
    }
    return rawText.slice(i, j);
  }
  const close = open === "{" ? "}" : "]";
  let depth = 0;
  let inString = false;
  for (let j = i; j < rawText.length; j++) {
    const ch = rawText[j];
    if (inString) {
      if (ch === "\\") {
        j++;
      } else if (ch === '"') {
        inString = false;
      }
      continue;
    }
    if (ch === '"') {
      inString = true;
    } else if (ch === open) {
      depth++;
    } else if (ch === close) {
      depth--;
      if (depth === 0) {
        return rawText.slice(i, j + 1);
      }
    }
  }
  return null;
}
