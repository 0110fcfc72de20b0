"""In-memory typed property graph with idempotent merge ingestion.

Nodes are keyed by (label, business_id); edges by (type, src, dst).  Merging
the same batch twice leaves the graph unchanged.  Writes are validated in
full before any mutation, applied under an exclusive lock, and serialized;
readers take a shared lock so they observe either the pre-batch or the
post-batch state, never a partial one.

Snapshots are two JSONL files, ``nodes.jsonl`` and ``edges.jsonl``, with
sorted keys and sorted record order so identical graphs produce identical
bytes.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
from dataclasses import dataclass, field
from typing import Iterator

from . import schema
from .errors import NotFoundError, SchemaError, SnapshotFormatError

NodeKey = tuple[str, str]  # (label, business_id)
EdgeKey = tuple[str, NodeKey, NodeKey]  # (type, src, dst)


@dataclass(frozen=True)
class NodeRecord:
    label: str
    business_id: str
    properties: dict

    @property
    def key(self) -> NodeKey:
        return (self.label, self.business_id)


@dataclass(frozen=True)
class EdgeRecord:
    edge_type: str
    src: NodeKey
    dst: NodeKey
    properties: dict

    @property
    def key(self) -> EdgeKey:
        return (self.edge_type, self.src, self.dst)


@dataclass(frozen=True)
class NodeMerge:
    label: str
    business_id: str
    properties: dict = field(default_factory=dict)


@dataclass(frozen=True)
class EdgeMerge:
    edge_type: str
    src_label: str
    src_id: str
    dst_label: str
    dst_id: str
    properties: dict = field(default_factory=dict)


@dataclass
class MergeSummary:
    created: int = 0
    updated: int = 0

    def as_dict(self) -> dict:
        return {"created": self.created, "updated": self.updated}


class _RWLock:
    """Readers-writer lock: many concurrent readers, one exclusive writer."""

    def __init__(self):
        self._cond = threading.Condition()
        self._readers = 0
        self._writer = False

    def acquire_read(self):
        with self._cond:
            while self._writer:
                self._cond.wait()
            self._readers += 1

    def release_read(self):
        with self._cond:
            self._readers -= 1
            if self._readers == 0:
                self._cond.notify_all()

    def acquire_write(self):
        with self._cond:
            while self._writer or self._readers:
                self._cond.wait()
            self._writer = True

    def release_write(self):
        with self._cond:
            self._writer = False
            self._cond.notify_all()


class _ReadView:
    def __init__(self, lock: _RWLock):
        self._lock = lock

    def __enter__(self):
        self._lock.acquire_read()
        return self

    def __exit__(self, *exc):
        self._lock.release_read()
        return False


class PropertyGraph:
    """The single source of truth: typed nodes and edges with property maps."""

    def __init__(self):
        # label -> id -> props (props always carries the label's ID property)
        self._nodes: dict[str, dict[str, dict]] = {label: {} for label in schema.LABELS}
        # node key -> edge type -> other key -> props (shared dict with _in)
        self._out: dict[NodeKey, dict[str, dict[NodeKey, dict]]] = {}
        self._in: dict[NodeKey, dict[str, dict[NodeKey, dict]]] = {}
        self._edge_count = 0
        self._lock = _RWLock()

    # -- locking ----------------------------------------------------------

    def read_view(self) -> _ReadView:
        """Shared-lock context for multi-step reads (executor scans)."""
        return _ReadView(self._lock)

    # -- basic lookups ----------------------------------------------------

    @property
    def node_count(self) -> int:
        return sum(len(ids) for ids in self._nodes.values())

    @property
    def edge_count(self) -> int:
        """Stored directed edges; a symmetric pair counts as two."""
        return self._edge_count

    def counts_by_label(self) -> dict[str, int]:
        return {label: len(ids) for label in schema.LABELS
                if (ids := self._nodes[label])}

    def counts_by_edge_type(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for by_type in self._out.values():
            for etype, targets in by_type.items():
                counts[etype] = counts.get(etype, 0) + len(targets)
        return {etype: counts[etype] for etype in schema.EDGE_TYPES if etype in counts}

    def has_node(self, label: str, business_id: str) -> bool:
        return business_id in self._nodes.get(label, ())

    def get_node(self, label: str, business_id: str) -> NodeRecord:
        try:
            props = self._nodes[label][business_id]
        except KeyError:
            raise NotFoundError(f"no {label} node with id {business_id!r}") from None
        return NodeRecord(label, business_id, props)

    def find_node(self, business_id: str) -> NodeRecord | None:
        """Resolve a node from its business ID alone via the ID prefix."""
        label = schema.label_for_id(business_id)
        if label is None or business_id not in self._nodes[label]:
            return None
        return NodeRecord(label, business_id, self._nodes[label][business_id])

    def node_props(self, key: NodeKey) -> dict:
        return self._nodes[key[0]][key[1]]

    def nodes(self, label: str | None = None) -> Iterator[NodeRecord]:
        """All nodes, sorted by (label, business_id)."""
        labels = (label,) if label else schema.LABELS
        for lab in labels:
            store = self._nodes.get(lab)
            if store is None:
                raise SchemaError(f"unknown label {lab!r}")
            for business_id in sorted(store):
                yield NodeRecord(lab, business_id, store[business_id])

    def node_ids(self, label: str) -> list[str]:
        return sorted(self._nodes[label])

    def has_edge(self, edge_type: str, src: NodeKey, dst: NodeKey) -> bool:
        return dst in self._out.get(src, {}).get(edge_type, ())

    def edges(self) -> Iterator[EdgeRecord]:
        """All stored edges, sorted by (type, src, dst)."""
        flat = []
        for src, by_type in self._out.items():
            for etype, targets in by_type.items():
                for dst in targets:
                    flat.append((etype, src, dst))
        flat.sort()
        for etype, src, dst in flat:
            yield EdgeRecord(etype, src, dst, self._out[src][etype][dst])

    def out_edges(self, key: NodeKey, edge_type: str | None = None) -> list[EdgeRecord]:
        by_type = self._out.get(key, {})
        types = (edge_type,) if edge_type else sorted(by_type)
        out = []
        for etype in types:
            for dst in sorted(by_type.get(etype, ())):
                out.append(EdgeRecord(etype, key, dst, by_type[etype][dst]))
        return out

    def in_edges(self, key: NodeKey, edge_type: str | None = None) -> list[EdgeRecord]:
        by_type = self._in.get(key, {})
        types = (edge_type,) if edge_type else sorted(by_type)
        out = []
        for etype in types:
            for src in sorted(by_type.get(etype, ())):
                out.append(EdgeRecord(etype, src, key, by_type[etype][src]))
        return out

    def neighbors(self, key: NodeKey, direction: str = "both",
                  edge_types: frozenset | set | None = None
                  ) -> list[tuple[EdgeRecord, NodeRecord]]:
        """Incident edges with their far endpoints.

        Sorted by (edge_type, far endpoint business_id, far endpoint label);
        for direction="both" an outgoing edge sorts before an incoming one on
        a full tie.  The node must exist.
        """
        if direction not in ("out", "in", "both"):
            raise ValueError(f"bad direction {direction!r}")
        label, business_id = key
        if not self.has_node(label, business_id):
            raise NotFoundError(f"no {label} node with id {business_id!r}")
        entries: list[tuple[tuple, EdgeRecord, NodeRecord]] = []
        if direction in ("out", "both"):
            for etype, targets in self._out.get(key, {}).items():
                if edge_types and etype not in edge_types:
                    continue
                for dst, props in targets.items():
                    far = NodeRecord(dst[0], dst[1], self._nodes[dst[0]][dst[1]])
                    entries.append(((etype, dst[1], dst[0], 0),
                                    EdgeRecord(etype, key, dst, props), far))
        if direction in ("in", "both"):
            for etype, sources in self._in.get(key, {}).items():
                if edge_types and etype not in edge_types:
                    continue
                for src, props in sources.items():
                    far = NodeRecord(src[0], src[1], self._nodes[src[0]][src[1]])
                    entries.append(((etype, src[1], src[0], 1),
                                    EdgeRecord(etype, src, key, props), far))
        entries.sort(key=lambda item: item[0])
        return [(edge, node) for _, edge, node in entries]

    # -- merge ingestion ----------------------------------------------------

    def merge_nodes(self, instructions: list[NodeMerge]) -> MergeSummary:
        """Apply node merges: create when absent, overwrite listed properties
        when present (unlisted existing properties are retained).

        The whole batch is validated before anything is applied; a schema
        violation rejects the batch and reports the offending index.
        """
        staged = []
        will_exist: set[NodeKey] = set()
        for i, ins in enumerate(instructions):
            err = self._check_node_merge(ins, will_exist)
            if err:
                raise SchemaError(f"instruction {i}: {err}", index=i)
            will_exist.add((ins.label, ins.business_id))
            staged.append(ins)

        summary = MergeSummary()
        self._lock.acquire_write()
        try:
            for ins in staged:
                store = self._nodes[ins.label]
                existing = store.get(ins.business_id)
                if existing is None:
                    props = dict(ins.properties)
                    props[schema.ID_PROPERTY[ins.label]] = ins.business_id
                    store[ins.business_id] = props
                    summary.created += 1
                else:
                    existing.update(ins.properties)
                    existing[schema.ID_PROPERTY[ins.label]] = ins.business_id
                    summary.updated += 1
        finally:
            self._lock.release_write()
        return summary

    def _check_node_merge(self, ins: NodeMerge, will_exist: set[NodeKey]) -> str | None:
        if ins.label not in self._nodes:
            return f"unknown label {ins.label!r}"
        err = schema.check_business_id(ins.label, ins.business_id)
        if err:
            return err
        id_prop = schema.ID_PROPERTY[ins.label]
        declared = ins.properties.get(id_prop)
        if declared is not None and declared != ins.business_id:
            return (f"property {id_prop}={declared!r} contradicts "
                    f"business id {ins.business_id!r}")
        for name, value in ins.properties.items():
            err = schema.check_property_value(name, value)
            if err:
                return err
        key = (ins.label, ins.business_id)
        is_create = ins.business_id not in self._nodes[ins.label] and key not in will_exist
        if is_create:
            have = set(ins.properties) | {id_prop}
            missing = [p for p in schema.REQUIRED_PROPS[ins.label] if p not in have]
            if missing:
                return (f"create of {ins.label} {ins.business_id} missing "
                        f"required properties: {', '.join(missing)}")
        return None

    def merge_edges(self, instructions: list[EdgeMerge]) -> MergeSummary:
        """Apply edge merges keyed by (type, src, dst); symmetric types
        materialize both directions.  Endpoints must already exist."""
        for i, ins in enumerate(instructions):
            err = self._check_edge_merge(ins)
            if err:
                raise SchemaError(f"instruction {i}: {err}", index=i)

        summary = MergeSummary()
        self._lock.acquire_write()
        try:
            for ins in instructions:
                src = (ins.src_label, ins.src_id)
                dst = (ins.dst_label, ins.dst_id)
                n = self._merge_one_edge(ins.edge_type, src, dst, ins.properties)
                summary.created += n
                if n == 0:
                    summary.updated += 1
                if ins.edge_type in schema.SYMMETRIC_EDGE_TYPES and src != dst:
                    n = self._merge_one_edge(ins.edge_type, dst, src, ins.properties)
                    summary.created += n
        finally:
            self._lock.release_write()
        return summary

    def _check_edge_merge(self, ins: EdgeMerge) -> str | None:
        if ins.edge_type not in schema.EDGE_ENDPOINTS:
            return f"unknown edge type {ins.edge_type!r}"
        src_labels, dst_labels = schema.EDGE_ENDPOINTS[ins.edge_type]
        if ins.src_label not in src_labels:
            return (f"{ins.edge_type} source must be one of {src_labels}, "
                    f"got {ins.src_label}")
        if ins.dst_label not in dst_labels:
            return (f"{ins.edge_type} destination must be one of {dst_labels}, "
                    f"got {ins.dst_label}")
        if not self.has_node(ins.src_label, ins.src_id):
            return f"dangling endpoint: no {ins.src_label} {ins.src_id}"
        if not self.has_node(ins.dst_label, ins.dst_id):
            return f"dangling endpoint: no {ins.dst_label} {ins.dst_id}"
        if ins.src_label == ins.dst_label and ins.src_id == ins.dst_id:
            return f"self-edge {ins.edge_type} on {ins.src_id} not allowed"
        for name, value in ins.properties.items():
            err = schema.check_property_value(name, value)
            if err:
                return err
        return None

    def _merge_one_edge(self, etype: str, src: NodeKey, dst: NodeKey,
                        properties: dict) -> int:
        targets = self._out.setdefault(src, {}).setdefault(etype, {})
        existing = targets.get(dst)
        if existing is None:
            props = dict(properties)
            targets[dst] = props
            self._in.setdefault(dst, {}).setdefault(etype, {})[src] = props
            self._edge_count += 1
            return 1
        existing.update(properties)
        return 0

    def apply_batch(self, nodes: list[NodeMerge], edges: list[EdgeMerge]) -> dict:
        """Merge nodes then edges; returns both summaries."""
        ns = self.merge_nodes(nodes)
        es = self.merge_edges(edges)
        return {"nodes": ns.as_dict(), "edges": es.as_dict()}

    # -- deletion -----------------------------------------------------------

    def delete_node(self, label: str, business_id: str) -> int:
        """Remove a node and all incident edges atomically.

        Returns the number of stored edges removed.
        """
        if not self.has_node(label, business_id):
            raise NotFoundError(f"no {label} node with id {business_id!r}")
        key = (label, business_id)
        self._lock.acquire_write()
        try:
            removed = 0
            for etype, targets in self._out.pop(key, {}).items():
                for dst in list(targets):
                    del self._in[dst][etype][key]
                    removed += 1
            for etype, sources in self._in.pop(key, {}).items():
                for src in list(sources):
                    del self._out[src][etype][key]
                    removed += 1
            del self._nodes[label][business_id]
            self._edge_count -= removed
            return removed
        finally:
            self._lock.release_write()

    # -- snapshots ------------------------------------------------------------

    def save_snapshot(self, directory: str) -> None:
        """Write nodes.jsonl and edges.jsonl with reproducible bytes."""
        os.makedirs(directory, exist_ok=True)
        with open(os.path.join(directory, "nodes.jsonl"), "w", encoding="utf-8") as fh:
            for record in self.nodes():
                fh.write(_dumps({"id": record.business_id, "label": record.label,
                                 "props": record.properties}))
                fh.write("\n")
        with open(os.path.join(directory, "edges.jsonl"), "w", encoding="utf-8") as fh:
            for edge in self.edges():
                fh.write(_dumps({
                    "type": edge.edge_type,
                    "src": f"{edge.src[0]}:{edge.src[1]}",
                    "dst": f"{edge.dst[0]}:{edge.dst[1]}",
                    "props": edge.properties,
                }))
                fh.write("\n")

    @classmethod
    def load_snapshot(cls, directory: str) -> "PropertyGraph":
        graph = cls()
        nodes_path = os.path.join(directory, "nodes.jsonl")
        edges_path = os.path.join(directory, "edges.jsonl")
        node_batch: list[NodeMerge] = []
        for line_no, obj in _read_jsonl(nodes_path):
            try:
                label, business_id, props = obj["label"], obj["id"], obj["props"]
            except (KeyError, TypeError):
                raise SnapshotFormatError(
                    f"line {line_no}: node object missing label/id/props",
                    nodes_path, line_no)
            node_batch.append(NodeMerge(label, business_id, props))
        try:
            graph.merge_nodes(node_batch)
        except SchemaError as exc:
            line = (exc.index or 0) + 1
            raise SnapshotFormatError(f"line {line}: {exc}", nodes_path, line) from exc

        edge_batch: list[EdgeMerge] = []
        for line_no, obj in _read_jsonl(edges_path):
            try:
                etype = obj["type"]
                src_label, src_id = obj["src"].split(":", 1)
                dst_label, dst_id = obj["dst"].split(":", 1)
                props = obj["props"]
            except (KeyError, ValueError, AttributeError, TypeError):
                raise SnapshotFormatError(
                    f"line {line_no}: edge object malformed", edges_path, line_no)
            edge_batch.append(EdgeMerge(etype, src_label, src_id,
                                        dst_label, dst_id, props))
        try:
            graph.merge_edges(edge_batch)
        except SchemaError as exc:
            line = (exc.index or 0) + 1
            raise SnapshotFormatError(f"line {line}: {exc}", edges_path, line) from exc
        return graph

    def digest(self) -> str:
        """SHA-256 over the canonical serialization; equal graphs, equal digest."""
        h = hashlib.sha256()
        for record in self.nodes():
            h.update(_dumps({"id": record.business_id, "label": record.label,
                             "props": record.properties}).encode())
            h.update(b"\n")
        h.update(b"--edges--\n")
        for edge in self.edges():
            h.update(_dumps({"type": edge.edge_type,
                             "src": f"{edge.src[0]}:{edge.src[1]}",
                             "dst": f"{edge.dst[0]}:{edge.dst[1]}",
                             "props": edge.properties}).encode())
            h.update(b"\n")
        return h.hexdigest()

    def structurally_equal(self, other: "PropertyGraph") -> bool:
        return self.digest() == other.digest()

    def check_referential_integrity(self) -> list[str]:
        """Full-scan check that every edge's endpoints exist; [] when sound."""
        problems = []
        for edge in self.edges():
            for endpoint in (edge.src, edge.dst):
                if not self.has_node(*endpoint):
                    problems.append(f"{edge.key}: missing endpoint {endpoint}")
        return problems


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _read_jsonl(path: str):
    try:
        fh = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise SnapshotFormatError(f"cannot open snapshot file: {exc}", path) from exc
    with fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                yield line_no, json.loads(line)
            except json.JSONDecodeError as exc:
                raise SnapshotFormatError(
                    f"line {line_no}: invalid JSON: {exc.msg}", path, line_no) from exc


def snapshot_digest(directory: str) -> str:
    """SHA-256 over the raw bytes of both snapshot files."""
    h = hashlib.sha256()
    for name in ("nodes.jsonl", "edges.jsonl"):
        with open(os.path.join(directory, name), "rb") as fh:
            while chunk := fh.read(1 << 20):
                h.update(chunk)
    return h.hexdigest()
