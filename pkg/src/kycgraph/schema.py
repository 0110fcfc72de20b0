"""Graph schema: node labels, edge types, ID formats and property contracts.

All structural rules the store enforces live here so that the generator,
query planner and tool layer agree on a single vocabulary.
"""

from __future__ import annotations

import re

# Node labels, in canonical order.
LABELS = (
    "Customer",
    "Account",
    "Transaction",
    "Address",
    "Phone",
    "Sanction",
    "PEP",
    "Alert",
    "CDDCase",
    "Counterparty",
)

# Business-ID prefix and digit count per label.  The Customer/Account/
# Transaction formats are fixed; the rest are artifact conventions.
ID_FORMATS: dict[str, tuple[str, int]] = {
    "Customer": ("CUST", 6),
    "Account": ("ACC", 8),
    "Transaction": ("TXN", 9),
    "Address": ("ADDR", 6),
    "Phone": ("PHON", 6),
    "Sanction": ("SANC", 5),
    "PEP": ("PEP", 5),
    "Alert": ("ALRT", 7),
    "CDDCase": ("CASE", 6),
    "Counterparty": ("CPTY", 6),
}

ID_PATTERNS: dict[str, re.Pattern] = {
    label: re.compile(rf"^{prefix}\d{{{digits}}}$")
    for label, (prefix, digits) in ID_FORMATS.items()
}

# Name of the property that mirrors the business ID on each node, so that
# queries can filter on it and the planner can turn property-map lookups
# into index seeks.
ID_PROPERTY: dict[str, str] = {
    "Customer": "customer_id",
    "Account": "account_number",
    "Transaction": "txn_id",
    "Address": "address_id",
    "Phone": "phone_id",
    "Sanction": "sanction_id",
    "PEP": "pep_id",
    "Alert": "alert_id",
    "CDDCase": "case_id",
    "Counterparty": "counterparty_id",
}

# Properties that must be present when a node is first created.  The ID
# property is implicitly required everywhere and injected by the store.
REQUIRED_PROPS: dict[str, tuple[str, ...]] = {
    "Customer": ("name", "risk_level", "nationality", "date_of_birth",
                 "occupation", "high_risk_jurisdiction_count"),
    "Account": ("account_number", "type", "balance", "status"),
    "Transaction": ("amount", "currency", "timestamp", "risk_score", "merchant"),
    "Address": ("street", "city", "country"),
    "Phone": ("number",),
    "Sanction": ("list_name", "entity_name"),
    "PEP": ("name", "position", "country"),
    "Alert": ("alert_type", "status", "created_date"),
    "CDDCase": ("status", "opened_date"),
    "Counterparty": ("name", "jurisdiction"),
}

# Edge types with their permitted (source labels, destination labels).
EDGE_ENDPOINTS: dict[str, tuple[tuple[str, ...], tuple[str, ...]]] = {
    "OWNS": (("Customer",), ("Account",)),
    "PERFORMED": (("Account",), ("Transaction",)),
    "RECEIVED": (("Transaction",), ("Account", "Counterparty")),
    "LIVES_AT": (("Customer",), ("Address",)),
    "HAS_PHONE": (("Customer",), ("Phone",)),
    "MATCHES_SANCTION": (("Customer",), ("Sanction",)),
    "LINKED_TO_PEP": (("Customer",), ("PEP",)),
    "HAS_ALERT": (("Customer",), ("Alert",)),
    "SUBJECT_OF": (("Customer",), ("CDDCase",)),
    "RELATED_TO": (("Customer",), ("Customer",)),
    "SHARES_ADDRESS_WITH": (("Customer",), ("Customer",)),
    "SHARES_PHONE_WITH": (("Customer",), ("Customer",)),
    "TRANSACTED_WITH": (("Customer",), ("Customer",)),
}

EDGE_TYPES = tuple(EDGE_ENDPOINTS)

# Sharing is mutual: merging one direction materializes the reverse too.
SYMMETRIC_EDGE_TYPES = frozenset({"SHARES_ADDRESS_WITH", "SHARES_PHONE_WITH"})

# Customer-to-customer edge types eligible as ring-linking mechanisms.
RING_EDGE_TYPES = ("SHARES_ADDRESS_WITH", "SHARES_PHONE_WITH",
                   "TRANSACTED_WITH", "RELATED_TO")

_DATE_RE = re.compile(r"^\d{4}-\d{2}-\d{2}$")
_TIMESTAMP_RE = re.compile(r"^\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}Z$")

_SCALARS = (str, bool, int, float)


def is_iso_date(value) -> bool:
    return isinstance(value, str) and bool(_DATE_RE.match(value))


def is_iso_timestamp(value) -> bool:
    """UTC, second precision: 2025-03-01T14:05:00Z."""
    return isinstance(value, str) and bool(_TIMESTAMP_RE.match(value))


def check_property_value(name: str, value) -> str | None:
    """Return an error string if ``value`` is not a legal property value.

    Legal values: str, bool, int, 64-bit float, or a homogeneous list of
    those (no nested lists, no None elements).  Dates and timestamps are
    carried as ISO-8601 strings; their fixed lexical form makes string
    comparison agree with chronological order.
    """
    if isinstance(value, _SCALARS):
        return None
    if isinstance(value, list):
        if not value:
            return None
        kinds = set()
        for item in value:
            if isinstance(item, bool):
                kinds.add(bool)
            elif isinstance(item, (int, float)):
                kinds.add(float)
            elif isinstance(item, str):
                kinds.add(str)
            else:
                return f"property {name!r}: list element {item!r} is not a scalar"
        if len(kinds) > 1:
            return f"property {name!r}: list elements are not homogeneous"
        return None
    return f"property {name!r}: unsupported value type {type(value).__name__}"


def check_business_id(label: str, business_id: str) -> str | None:
    """Return an error string if the ID does not match the label's format."""
    if label not in ID_PATTERNS:
        return f"unknown label {label!r}"
    if not isinstance(business_id, str) or not ID_PATTERNS[label].match(business_id):
        prefix, digits = ID_FORMATS[label]
        return (f"malformed {label} id {business_id!r}: "
                f"expected {prefix} followed by {digits} digits")
    return None


def format_id(label: str, n: int) -> str:
    """Render the n-th business ID for a label, e.g. format_id('Customer', 1)."""
    prefix, digits = ID_FORMATS[label]
    return f"{prefix}{n:0{digits}d}"


def label_for_id(business_id: str) -> str | None:
    """Infer the node label from an ID's prefix, or None if no format matches."""
    for label, pattern in ID_PATTERNS.items():
        if pattern.match(business_id or ""):
            return label
    return None
