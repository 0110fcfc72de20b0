import { describe, expect, it } from "vitest";

import { extractPayloadText, RpcClient } from "../src/rpc.js";
import { FakeServer } from "./fake-server.js";

describe("RpcClient", () => {
  it("forms JSON-RPC 2.0 requests with incrementing ids", async () => {
    const seen: unknown[] = [];
    const client = new RpcClient("http://test", async (_url, init) => {
      const body = JSON.parse(String(init?.body));
      seen.push(body);
      return { status: 200, text: async () =>
        JSON.stringify({ jsonrpc: "2.0", id: body.id, result: {} }) };
    });
    await client.call("server_info");
    await client.call("get_customer_accounts",
                      { customer_id: "CUST000001" });
    expect(seen).toEqual([
      { jsonrpc: "2.0", id: 1, method: "server_info" },
      { jsonrpc: "2.0", id: 2, method: "get_customer_accounts",
        params: { customer_id: "CUST000001" } },
    ]);
    expect(client.issuedMethods).toEqual(["server_info",
                                          "get_customer_accounts"]);
  });

  it("lists tools and reads server info from the fake server", async () => {
    const fake = new FakeServer();
    const client = new RpcClient("http://test", fake.fetch());
    const tools = await client.listTools();
    expect(tools).toHaveLength(12);
    const info = await client.serverInfo();
    expect(info.read_only).toBe(true);
  });

  it("raises on transport-level failures", async () => {
    const client = new RpcClient("http://test", async () =>
      ({ status: 503, text: async () => "overloaded" }));
    await expect(client.call("server_info")).rejects.toThrow("HTTP 503");
  });
});

describe("extractPayloadText", () => {
  it("extracts nested objects without re-serializing", () => {
    const raw = '{"id":1,"result":{"payload":{"rows":[[1,2.50]],' +
      '"note":"a\\"b{}"},"tool":"x"}}';
    expect(extractPayloadText(raw)).toBe(
      '{"rows":[[1,2.50]],"note":"a\\"b{}"}');
  });

  it("handles arrays, strings and scalars", () => {
    expect(extractPayloadText('{"payload":[1,{"x":"}"}],"z":0}'))
      .toBe('[1,{"x":"}"}]');
    expect(extractPayloadText('{"payload":"plain, text","z":0}'))
      .toBe('"plain, text"');
    expect(extractPayloadText('{"payload":42,"z":0}')).toBe("42");
    expect(extractPayloadText('{"payload":null}')).toBe("null");
  });

  it("returns null when there is no payload", () => {
    expect(extractPayloadText('{"error":{"code":1001}}')).toBeNull();
  });

  it("preserves number formatting exactly", () => {
    const raw = '{"payload":{"v":[0.30000000000000004,1e-07,123.450]}}';
    expect(extractPayloadText(raw))
      .toBe('{"v":[0.30000000000000004,1e-07,123.450]}');
  });
});
