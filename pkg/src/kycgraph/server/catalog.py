"""Tool catalog: what the server advertises to agents.

Exactly the twelve tools, stable order, with JSON-Schema parameter
contracts used both for advertisement and server-side validation.
"""

from __future__ import annotations

_CUSTOMER_ID = {"type": "string", "pattern": "^CUST[0-9]{6}$"}
_TIMESTAMP = {"type": "string",
              "pattern": "^[0-9]{4}-[0-9]{2}-[0-9]{2}T[0-9]{2}:[0-9]{2}:"
                         "[0-9]{2}Z$"}

TOOL_CATALOG = [
    {
        "name": "execute_cypher",
        "description": "Execute an explicit graph query with optional "
                       "parameters and return the raw result table.",
        "params_schema": {
            "type": "object",
            "properties": {
                "query": {"type": "string"},
                "params": {"type": "object"},
            },
            "required": ["query"],
            "additionalProperties": False,
        },
        "result": "result table {columns, rows, summary, touched_ids}",
    },
    {
        "name": "text_to_cypher",
        "description": "Translate a natural-language question into a graph "
                       "query, execute it, and return both.",
        "params_schema": {
            "type": "object",
            "properties": {"question": {"type": "string"}},
            "required": ["question"],
            "additionalProperties": False,
        },
        "result": "{query, params, result}",
    },
    {
        "name": "get_customer_profile",
        "description": "Comprehensive customer dossier: identity, addresses, "
                       "accounts, related parties, sanctions/PEP exposure, "
                       "alerts, high-risk transaction count.",
        "params_schema": {
            "type": "object",
            "properties": {"customer_id": _CUSTOMER_ID},
            "required": ["customer_id"],
            "additionalProperties": False,
        },
        "result": "dossier object",
    },
    {
        "name": "get_customer_risk_summary",
        "description": "Focused risk snapshot: overall level, high-risk "
                       "factors, sanctions and PEP details, high-risk "
                       "jurisdiction transaction counts.",
        "params_schema": {
            "type": "object",
            "properties": {"customer_id": _CUSTOMER_ID},
            "required": ["customer_id"],
            "additionalProperties": False,
        },
        "result": "risk snapshot object",
    },
    {
        "name": "get_customer_accounts",
        "description": "Customer identification plus per-account number, "
                       "type, balance, status and products.",
        "params_schema": {
            "type": "object",
            "properties": {"customer_id": _CUSTOMER_ID},
            "required": ["customer_id"],
            "additionalProperties": False,
        },
        "result": "account listing object",
    },
    {
        "name": "get_customer_sanctions",
        "description": "Sanctions, PEP and watchlist exposure with matched "
                       "entities and supporting evidence.",
        "params_schema": {
            "type": "object",
            "properties": {"customer_id": _CUSTOMER_ID},
            "required": ["customer_id"],
            "additionalProperties": False,
        },
        "result": "exposure object",
    },
    {
        "name": "find_customer_rings",
        "description": "Detect customer rings connected through shared "
                       "addresses, phones, transactions or relationships; "
                       "returns metadata and member lists.",
        "params_schema": {
            "type": "object",
            "properties": {
                "min_size": {"type": "integer", "minimum": 2, "default": 3},
                "mechanisms": {
                    "type": "array",
                    "items": {"enum": ["SHARES_ADDRESS_WITH",
                                       "SHARES_PHONE_WITH",
                                       "TRANSACTED_WITH", "RELATED_TO"]},
                },
                "limit": {"type": "integer", "minimum": 1, "default": 20},
            },
            "additionalProperties": False,
        },
        "result": "ring report list",
    },
    {
        "name": "extract_customer_transactions",
        "description": "Transaction records over a look-back window with "
                       "risk scores, merchant details, account context and "
                       "summary statistics.",
        "params_schema": {
            "type": "object",
            "properties": {
                "customer_id": _CUSTOMER_ID,
                "lookback_days": {"type": "integer", "minimum": 0,
                                  "default": 90},
                "now": _TIMESTAMP,
            },
            "required": ["customer_id"],
            "additionalProperties": False,
        },
        "result": "transaction extract object",
    },
    {
        "name": "trace_shared_accounts",
        "description": "Other customers sharing accounts with the target, "
                       "flagged with their sanctions/PEP exposure.",
        "params_schema": {
            "type": "object",
            "properties": {"customer_id": _CUSTOMER_ID},
            "required": ["customer_id"],
            "additionalProperties": False,
        },
        "result": "co-holder list",
    },
    {
        "name": "find_mutual_counterparties",
        "description": "Counterparties that transacted with at least two of "
                       "the given customers inside a time window.",
        "params_schema": {
            "type": "object",
            "properties": {
                "customer_ids": {"type": "array", "items": _CUSTOMER_ID,
                                 "minItems": 2},
                "window_days": {"type": "integer", "minimum": 0,
                                "default": 365},
                "now": _TIMESTAMP,
            },
            "required": ["customer_ids"],
            "additionalProperties": False,
        },
        "result": "mutual counterparty list",
    },
    {
        "name": "aggregate_customer_transactions",
        "description": "Transaction totals and counts bucketed by day, week "
                       "or month over a look-back window (empty buckets "
                       "included).",
        "params_schema": {
            "type": "object",
            "properties": {
                "customer_id": _CUSTOMER_ID,
                "interval": {"enum": ["daily", "weekly", "monthly"],
                             "default": "monthly"},
                "lookback_days": {"type": "integer", "minimum": 0,
                                  "default": 365},
                "now": _TIMESTAMP,
            },
            "required": ["customer_id"],
            "additionalProperties": False,
        },
        "result": "bucket series",
    },
    {
        "name": "summarize_customer_risk_profile",
        "description": "All-in-one risk summary combining account activity, "
                       "relational links, transaction behavior and "
                       "compliance signals.",
        "params_schema": {
            "type": "object",
            "properties": {"customer_id": _CUSTOMER_ID},
            "required": ["customer_id"],
            "additionalProperties": False,
        },
        "result": "composite summary object",
    },
]

CATALOG_BY_NAME = {entry["name"]: entry for entry in TOOL_CATALOG}
