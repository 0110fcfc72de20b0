"""Tool-server clients: in-process (hermetic tests, local CLI) and HTTP.

Both expose the same surface the agent loop needs: call / list_tools /
server_info.
"""

from __future__ import annotations

import itertools
import json

import httpx

from .dispatcher import Dispatcher
from ..errors import TransportError


class LocalToolClient:
    """Direct dispatch against an in-process Dispatcher."""

    def __init__(self, dispatcher: Dispatcher):
        self.dispatcher = dispatcher
        self._ids = itertools.count(1)

    def call(self, method: str, params: dict | None = None) -> dict:
        request = {"jsonrpc": "2.0", "id": next(self._ids), "method": method}
        if params is not None:
            request["params"] = params
        response = self.dispatcher.dispatch(request)
        assert response is not None
        return response

    def list_tools(self) -> list:
        return self.call("list_tools")["result"]["tools"]

    def server_info(self) -> dict:
        return self.call("server_info")["result"]


class HttpToolClient:
    """Thin JSON-RPC-over-HTTP client for a running tool server."""

    def __init__(self, base_url: str, *, timeout: float = 60.0,
                 client: httpx.Client | None = None):
        self.base_url = base_url.rstrip("/")
        self._client = client or httpx.Client(timeout=timeout)
        self._ids = itertools.count(1)

    def call(self, method: str, params: dict | None = None) -> dict:
        request = {"jsonrpc": "2.0", "id": next(self._ids), "method": method}
        if params is not None:
            request["params"] = params
        try:
            response = self._client.post(f"{self.base_url}/rpc", json=request)
        except httpx.HTTPError as exc:
            raise TransportError(f"tool server unreachable: {exc}") from exc
        if response.status_code != 200:
            raise TransportError(
                f"tool server HTTP {response.status_code}: "
                f"{response.text[:300]}")
        try:
            return response.json()
        except json.JSONDecodeError as exc:
            raise TransportError(f"tool server sent invalid JSON: {exc}") \
                from exc

    def list_tools(self) -> list:
        return self.call("list_tools")["result"]["tools"]

    def server_info(self) -> dict:
        return self.call("server_info")["result"]

    def healthz(self) -> dict:
        response = self._client.get(f"{self.base_url}/healthz")
        response.raise_for_status()
        return response.json()
