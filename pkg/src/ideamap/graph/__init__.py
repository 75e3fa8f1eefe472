from .model import (
    ALLOWED_EDGE_KINDS,
    CRITIQUE,
    LITERATURE,
    NODE_KINDS,
    PERSONA,
    RATING_DIMENSIONS,
    RQ,
    Edge,
    EditEvent,
    FlowGraph,
    Node,
    RatingForm,
    render_node_text,
    validate_payload,
)
from .snapshot import SCHEMA_VERSION, restore, snapshot, to_document
from .store import FlowStore

__all__ = [
    "ALLOWED_EDGE_KINDS",
    "CRITIQUE",
    "LITERATURE",
    "NODE_KINDS",
    "PERSONA",
    "RATING_DIMENSIONS",
    "RQ",
    "Edge",
    "EditEvent",
    "FlowGraph",
    "Node",
    "RatingForm",
    "render_node_text",
    "validate_payload",
    "SCHEMA_VERSION",
    "restore",
    "snapshot",
    "to_document",
    "FlowStore",
]
