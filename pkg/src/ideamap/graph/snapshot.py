"""Canonical snapshot serialization and restore.

Snapshots are canonical JSON: fixed schema, sorted keys, sorted node and
edge order, no whitespace. Equal graphs therefore serialize to equal
bytes, which the persistence and export layers rely on.
"""
from __future__ import annotations

import json
import re
import time
from typing import Any, Callable

from ..errors import CorruptDocument, IdeamapError, SchemaVersionMismatch
from .model import EditEvent, FlowGraph, Node, RatingForm, validate_payload

SCHEMA_VERSION = 1

_DOC_KEYS = {"schema_version", "flow_id", "nodes", "edges", "ratings", "edit_log"}
_NODE_KEYS = {"id", "kind", "payload", "created_at", "origin", "deleted"}
_SEQ_ID = re.compile(r"n(\d+)\Z")


def to_document(flow: FlowGraph) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "flow_id": flow.flow_id,
        "nodes": [
            {
                "id": node.id,
                "kind": node.kind,
                "payload": node.payload,
                "created_at": node.created_at,
                "origin": node.origin,
                "deleted": node.deleted,
            }
            for node in sorted(flow.nodes.values(), key=lambda n: n.id)
        ],
        "edges": [
            {"source": e.source, "target": e.target}
            for e in sorted(flow.edges, key=lambda e: (e.source, e.target))
        ],
        "ratings": [
            {"node": r.node, "dimensions": r.dimensions, "submitted_at": r.submitted_at}
            for r in flow.ratings
        ],
        "edit_log": [
            {
                "node": e.node,
                "field_path": e.field_path,
                "old_value": e.old_value,
                "new_value": e.new_value,
                "timestamp": e.timestamp,
            }
            for e in flow.edit_log
        ],
    }


def snapshot(flow: FlowGraph) -> str:
    return json.dumps(to_document(flow), sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def _corrupt(message: str) -> CorruptDocument:
    return CorruptDocument(message)


def restore(
    document: str | bytes | dict,
    flow_id: str | None = None,
    clock: Callable[[], float] = time.time,
) -> FlowGraph:
    """Rebuild a graph from a snapshot document, re-checking every invariant."""
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise _corrupt(f"snapshot is not valid JSON: {exc}") from exc
    if not isinstance(document, dict):
        raise _corrupt("snapshot root must be an object")
    if "schema_version" not in document:
        raise _corrupt("snapshot missing schema_version")
    if document["schema_version"] != SCHEMA_VERSION:
        raise SchemaVersionMismatch(
            f"snapshot schema_version {document['schema_version']!r}, expected {SCHEMA_VERSION}"
        )
    if set(document) != _DOC_KEYS:
        raise _corrupt(f"snapshot keys must be exactly {sorted(_DOC_KEYS)}")
    doc_flow_id = document["flow_id"]
    if not isinstance(doc_flow_id, str) or not doc_flow_id:
        raise _corrupt("flow_id must be nonempty text")
    for key in ("nodes", "edges", "ratings", "edit_log"):
        if not isinstance(document[key], list):
            raise _corrupt(f"{key} must be a list")

    graph = FlowGraph(flow_id or doc_flow_id, clock=clock)
    max_seq = 0
    for entry in document["nodes"]:
        if not isinstance(entry, dict) or set(entry) != _NODE_KEYS:
            raise _corrupt(f"node entries must have keys {sorted(_NODE_KEYS)}")
        node_id = entry["id"]
        if not isinstance(node_id, str) or not node_id:
            raise _corrupt("node id must be nonempty text")
        if node_id in graph.nodes:
            raise _corrupt(f"duplicate node id {node_id!r}")
        if not isinstance(entry["created_at"], (int, float)) or isinstance(entry["created_at"], bool):
            raise _corrupt(f"node {node_id}: created_at must be a number")
        if entry["origin"] not in ("generated", "manual"):
            raise _corrupt(f"node {node_id}: bad origin {entry['origin']!r}")
        if not isinstance(entry["deleted"], bool):
            raise _corrupt(f"node {node_id}: deleted must be a boolean")
        try:
            payload = validate_payload(entry["kind"], entry["payload"])
        except IdeamapError as exc:
            raise _corrupt(f"node {node_id}: {exc}") from exc
        graph.nodes[node_id] = Node(
            id=node_id,
            flow=graph.flow_id,
            kind=entry["kind"],
            payload=payload,
            created_at=float(entry["created_at"]),
            origin=entry["origin"],
            deleted=entry["deleted"],
        )
        match = _SEQ_ID.match(node_id)
        if match:
            max_seq = max(max_seq, int(match.group(1)))
    graph._seq = max_seq

    for entry in document["edges"]:
        if not isinstance(entry, dict) or set(entry) != {"source", "target"}:
            raise _corrupt("edge entries must have keys ['source', 'target']")
        try:
            graph.connect(entry["source"], entry["target"])
        except IdeamapError as exc:
            raise _corrupt(f"edge {entry['source']} -> {entry['target']}: {exc}") from exc

    for entry in document["ratings"]:
        if not isinstance(entry, dict) or set(entry) != {"node", "dimensions", "submitted_at"}:
            raise _corrupt("rating entries must have keys ['dimensions', 'node', 'submitted_at']")
        if not isinstance(entry["submitted_at"], (int, float)) or isinstance(entry["submitted_at"], bool):
            raise _corrupt("rating submitted_at must be a number")
        try:
            graph.record_rating(entry["node"], entry["dimensions"], submitted_at=float(entry["submitted_at"]))
        except IdeamapError as exc:
            raise _corrupt(f"rating on {entry['node']}: {exc}") from exc

    for entry in document["edit_log"]:
        expected = {"node", "field_path", "old_value", "new_value", "timestamp"}
        if not isinstance(entry, dict) or set(entry) != expected:
            raise _corrupt(f"edit entries must have keys {sorted(expected)}")
        if entry["node"] not in graph.nodes:
            raise _corrupt(f"edit references unknown node {entry['node']!r}")
        for key in ("field_path", "old_value", "new_value"):
            if not isinstance(entry[key], str):
                raise _corrupt(f"edit {key} must be text")
        if not isinstance(entry["timestamp"], (int, float)) or isinstance(entry["timestamp"], bool):
            raise _corrupt("edit timestamp must be a number")
        graph.edit_log.append(
            EditEvent(
                node=entry["node"],
                field_path=entry["field_path"],
                old_value=entry["old_value"],
                new_value=entry["new_value"],
                timestamp=float(entry["timestamp"]),
            )
        )
    return graph
