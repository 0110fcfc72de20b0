"""Transport-independent JSON-RPC 2.0 dispatch for the tool server.

Both the HTTP route and the stdio loop feed frames through one dispatcher,
so the same call returns byte-identical payloads on either transport.

Error codes: the JSON-RPC reserved set (-32700 parse, -32600 invalid
request, -32601 unknown method, -32602 invalid params) plus application
codes 1001 not-found, 1002 query error, 1003 resource cap exceeded,
1004 backend unavailable.
"""

from __future__ import annotations

import json
import threading
import time
from datetime import datetime, timezone

import jsonschema

from .catalog import CATALOG_BY_NAME, TOOL_CATALOG
from .. import __version__
from ..errors import (BackendUnavailableError, InvalidParamsError,
                      KycGraphError, MissingParameterError, NotFoundError,
                      QueryExecutionError, QuerySyntaxError, ReadOnlyError,
                      ResourceLimitError, TranslationError,
                      UnsupportedQuestionError)
from ..tools import ToolKit

PARSE_ERROR = -32700
INVALID_REQUEST = -32600
METHOD_NOT_FOUND = -32601
INVALID_PARAMS = -32602
INTERNAL_ERROR = -32603
NOT_FOUND = 1001
QUERY_ERROR = 1002
RESOURCE_CAP = 1003
BACKEND_UNAVAILABLE = 1004

PAYLOAD_CAP_BYTES = 2 * 1024 * 1024
TRUNCATED_PREVIEW_BYTES = 64 * 1024

_PROTOCOL_METHODS = ("list_tools", "server_info")


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _error(code: int, message: str, data=None) -> dict:
    err = {"code": code, "message": message}
    if data is not None:
        err["data"] = data
    return err


def _classify(exc: Exception) -> dict:
    if isinstance(exc, InvalidParamsError):
        data = {"field": exc.field} if exc.field else None
        return _error(INVALID_PARAMS, str(exc), data)
    if isinstance(exc, NotFoundError):
        return _error(NOT_FOUND, str(exc))
    if isinstance(exc, ResourceLimitError):
        return _error(RESOURCE_CAP, str(exc))
    if isinstance(exc, BackendUnavailableError):
        return _error(BACKEND_UNAVAILABLE, str(exc))
    if isinstance(exc, (QuerySyntaxError, QueryExecutionError,
                        MissingParameterError, ReadOnlyError,
                        TranslationError, UnsupportedQuestionError)):
        return _error(QUERY_ERROR, str(exc),
                      {"kind": type(exc).__name__})
    if isinstance(exc, KycGraphError):
        return _error(INTERNAL_ERROR, str(exc))
    return _error(INTERNAL_ERROR, f"{type(exc).__name__}: {exc}")


class Dispatcher:
    """Validates envelopes, dispatches to the ToolKit, audits requests."""

    def __init__(self, kit: ToolKit, *, log_path: str | None = None,
                 max_pending: int = 256):
        self.kit = kit
        self.request_log: list[dict] = []
        self._log_lock = threading.Lock()
        self._log_path = log_path
        self._slots = threading.BoundedSemaphore(max_pending)
        self._graph_info = None

    # -- public entry points -----------------------------------------------------

    def dispatch_line(self, line: str) -> str | None:
        """One stdio frame in, one frame out (None for notifications)."""
        try:
            request = json.loads(line)
        except json.JSONDecodeError as exc:
            return dumps({"jsonrpc": "2.0", "id": None,
                          "error": _error(PARSE_ERROR,
                                          f"invalid JSON: {exc.msg}")})
        response = self.dispatch(request)
        return dumps(response) if response is not None else None

    def dispatch(self, request) -> dict | None:
        """Dispatch one parsed request object; None for notifications."""
        if not self._slots.acquire(blocking=False):
            rid = request.get("id") if isinstance(request, dict) else None
            return {"jsonrpc": "2.0", "id": rid,
                    "error": _error(RESOURCE_CAP, "server queue full")}
        try:
            return self._dispatch_inner(request)
        finally:
            self._slots.release()

    # -- internals ------------------------------------------------------------------

    def _dispatch_inner(self, request) -> dict | None:
        started = time.perf_counter()
        if not isinstance(request, dict):
            return {"jsonrpc": "2.0", "id": None,
                    "error": _error(INVALID_REQUEST,
                                    "request must be a JSON object")}
        rid = request.get("id")
        is_notification = "id" not in request
        if request.get("jsonrpc") != "2.0":
            response = {"jsonrpc": "2.0", "id": rid,
                        "error": _error(INVALID_REQUEST,
                                        "jsonrpc field must be '2.0'")}
            return None if is_notification else response
        method = request.get("method")
        if not isinstance(method, str):
            response = {"jsonrpc": "2.0", "id": rid,
                        "error": _error(INVALID_REQUEST,
                                        "method must be a string")}
            return None if is_notification else response
        params = request.get("params")
        if params is None:
            params = {}
        if not isinstance(params, dict):
            response = {"jsonrpc": "2.0", "id": rid,
                        "error": _error(INVALID_PARAMS,
                                        "params must be an object")}
            self._log(method, started, INVALID_PARAMS, rid)
            return None if is_notification else response

        error = None
        result = None
        if method == "list_tools":
            result = {"tools": TOOL_CATALOG}
        elif method == "server_info":
            result = self.server_info()
        elif method in CATALOG_BY_NAME:
            error, result = self._call_tool(method, params, started)
        else:
            error = _error(METHOD_NOT_FOUND, f"unknown method {method!r}")

        self._log(method, started,
                  error["code"] if error else None, rid)
        if is_notification:
            return None
        if error:
            return {"jsonrpc": "2.0", "id": rid, "error": error}
        return {"jsonrpc": "2.0", "id": rid, "result": result}

    def _call_tool(self, method: str, params: dict, started: float):
        entry = CATALOG_BY_NAME[method]
        try:
            jsonschema.validate(params, entry["params_schema"])
        except jsonschema.ValidationError as exc:
            path = ".".join(str(p) for p in exc.absolute_path)
            return _error(INVALID_PARAMS, exc.message,
                          {"field": path or None}), None
        try:
            payload, record_ids = self.kit.call_with_provenance(method, params)
        except Exception as exc:  # mapped to the fixed error-code table
            return _classify(exc), None
        body = dumps(payload)
        truncated = False
        if len(body) > PAYLOAD_CAP_BYTES:
            truncated = True
            payload = {"preview": body[:TRUNCATED_PREVIEW_BYTES],
                       "full_bytes": len(body)}
        duration_ms = round((time.perf_counter() - started) * 1000.0, 3)
        return None, {"tool": method, "duration_ms": duration_ms,
                      "truncated": truncated, "payload": payload,
                      "record_ids": record_ids}

    def server_info(self) -> dict:
        if self._graph_info is None:
            graph = self.kit.graph
            self._graph_info = {
                "version": __version__,
                "nodes": graph.node_count,
                "edges": graph.edge_count,
                "by_label": graph.counts_by_label(),
                "latest_transaction": self.kit.now,
                "high_risk_jurisdictions": list(
                    self.kit.high_risk_jurisdictions),
                "read_only": not self.kit.allow_writes,
            }
        return self._graph_info

    def _log(self, method, started, error_code, rid) -> None:
        entry = {
            "ts": datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%S.%fZ"),
            "method": method,
            "duration_ms": round((time.perf_counter() - started) * 1000.0, 3),
            "error_code": error_code,
            "id": rid,
        }
        with self._log_lock:
            self.request_log.append(entry)
            if self._log_path:
                with open(self._log_path, "a", encoding="utf-8") as fh:
                    fh.write(dumps(entry))
                    fh.write("\n")
