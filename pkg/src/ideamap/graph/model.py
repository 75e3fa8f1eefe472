"""Typed ideation graph: nodes, edges, ratings, edit log, metrics.

The graph is a DAG over four node kinds. Edge kinds form a closed
whitelist; everything generation-related dispatches off it, so it is
enforced here and nowhere else.
"""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Any, Callable

from ..errors import (
    CycleDetected,
    DimensionMismatch,
    DuplicateEdge,
    InvalidEdgeKind,
    NodeInUse,
    OutOfRange,
    PayloadMismatch,
    UnknownField,
    UnknownNode,
    UnknownParent,
)
from ..models import Critique, PaperRecord, PersonaProfile

RQ = "RQ"
PERSONA = "Persona"
LITERATURE = "Literature"
CRITIQUE = "Critique"
NODE_KINDS = (RQ, PERSONA, LITERATURE, CRITIQUE)

ALLOWED_EDGE_KINDS: frozenset[tuple[str, str]] = frozenset(
    {
        (RQ, PERSONA),
        (PERSONA, LITERATURE),
        (LITERATURE, CRITIQUE),
        (CRITIQUE, RQ),
        (LITERATURE, PERSONA),
    }
)

RATING_DIMENSIONS: dict[str, frozenset[str]] = {
    CRITIQUE: frozenset({"relevance", "helpfulness", "informativeness", "insightfulness"}),
    RQ: frozenset({"relevance", "creativity", "feasibility", "specificity"}),
}

NODE_ORIGINS = ("generated", "manual")


@dataclass
class Node:
    id: str
    flow: str
    kind: str
    payload: dict
    created_at: float
    origin: str = "manual"
    deleted: bool = False


@dataclass(frozen=True)
class Edge:
    source: str
    target: str


@dataclass
class RatingForm:
    node: str
    dimensions: dict[str, int]
    submitted_at: float


@dataclass
class EditEvent:
    node: str
    field_path: str
    old_value: str
    new_value: str
    timestamp: float


def value_as_text(value: Any) -> str:
    """EditEvent old/new values are text; non-strings are JSON-encoded."""
    if isinstance(value, str):
        return value
    return json.dumps(value, sort_keys=True)


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise PayloadMismatch(message)


def validate_payload(kind: str, payload: Any) -> dict:
    """Check a payload against its kind's schema and return a normalized copy."""
    if not isinstance(payload, dict):
        raise PayloadMismatch(f"{kind} payload must be an object")
    if kind == RQ:
        allowed = {"question", "favorite", "outline"}
        _require(set(payload) <= allowed, f"RQ payload keys must be within {sorted(allowed)}")
        question = payload.get("question")
        _require(isinstance(question, str) and bool(question.strip()), "RQ question must be nonempty text")
        favorite = payload.get("favorite", False)
        _require(isinstance(favorite, bool), "RQ favorite must be a boolean")
        outline = payload.get("outline")
        _require(outline is None or isinstance(outline, dict), "RQ outline must be an object or null")
        out: dict = {"question": question, "favorite": favorite}
        if outline is not None:
            out["outline"] = json.loads(json.dumps(outline))
        return out
    if kind == PERSONA:
        _require(set(payload) == {"persona"}, "Persona payload must have exactly the 'persona' key")
        try:
            profile = PersonaProfile.from_dict(payload["persona"]).validate()
        except (KeyError, TypeError, AttributeError) as exc:
            raise PayloadMismatch(f"invalid persona profile: {exc}") from exc
        except PayloadMismatch:
            raise
        except Exception as exc:
            raise PayloadMismatch(f"invalid persona profile: {exc}") from exc
        return {"persona": profile.to_dict()}
    if kind == LITERATURE:
        allowed = {"topic", "papers", "error"}
        _require(set(payload) <= allowed, f"Literature payload keys must be within {sorted(allowed)}")
        topic = payload.get("topic")
        _require(isinstance(topic, str) and bool(topic.strip()), "Literature topic must be nonempty text")
        papers_in = payload.get("papers", [])
        _require(isinstance(papers_in, list), "Literature papers must be a list")
        papers: list[dict] = []
        seen: set[str] = set()
        for entry in papers_in:
            try:
                record = PaperRecord.from_dict(entry).validate()
            except Exception as exc:
                raise PayloadMismatch(f"invalid paper record: {exc}") from exc
            _require(record.paper_id not in seen, f"duplicate paper {record.paper_id} in literature node")
            seen.add(record.paper_id)
            papers.append(record.to_dict())
        error = payload.get("error")
        _require(error is None or isinstance(error, str), "Literature error marker must be text or null")
        out = {"topic": topic, "papers": papers}
        if error is not None:
            out["error"] = error
        return out
    if kind == CRITIQUE:
        _require(set(payload) == {"critique"}, "Critique payload must have exactly the 'critique' key")
        entry = payload["critique"]
        _require(isinstance(entry, dict), "critique must be an object")
        try:
            critique = Critique.from_dict(entry).validate()
        except KeyError as exc:
            raise PayloadMismatch(f"critique missing key {exc}") from exc
        except Exception as exc:
            raise PayloadMismatch(f"invalid critique: {exc}") from exc
        return {"critique": critique.to_dict()}
    raise PayloadMismatch(f"unknown node kind {kind!r}")


def render_node_text(node: Node) -> str:
    """One labeled text block per node, used for the {context} binding."""
    payload = node.payload
    if node.kind == RQ:
        return f"Research Question: {payload['question']}"
    if node.kind == PERSONA:
        return "Persona:\n" + PersonaProfile.from_dict(payload["persona"]).to_prompt_text()
    if node.kind == LITERATURE:
        lines = [f"Literature ({payload['topic']}):"]
        for entry in payload["papers"]:
            year = entry.get("year")
            suffix = f" ({year})" if year is not None else ""
            lines.append(f"- {entry['title']}{suffix}")
        return "\n".join(lines)
    if node.kind == CRITIQUE:
        c = payload["critique"]
        return f"Critique ({c['critique_aspect']}): {c['critique_detail']}"
    raise PayloadMismatch(f"unknown node kind {node.kind!r}")


class FlowGraph:
    """One flow's nodes, edges, ratings, and append-only edit log."""

    def __init__(self, flow_id: str, clock: Callable[[], float] = time.time):
        self.flow_id = flow_id
        self.clock = clock
        self.nodes: dict[str, Node] = {}
        self.edges: list[Edge] = []
        self.ratings: list[RatingForm] = []
        self.edit_log: list[EditEvent] = []
        self._edge_set: set[tuple[str, str]] = set()
        self._children: dict[str, list[str]] = {}
        self._parents: dict[str, list[str]] = {}
        self._seq = 0

    # -- node/edge lookups ------------------------------------------------

    def node(self, node_id: str) -> Node:
        found = self.nodes.get(node_id)
        if found is None:
            raise UnknownNode(f"no node {node_id!r} in flow {self.flow_id!r}")
        return found

    def children_of(self, node_id: str) -> list[str]:
        return list(self._children.get(node_id, ()))

    def parents_of(self, node_id: str) -> list[str]:
        return list(self._parents.get(node_id, ()))

    def live_nodes(self) -> list[Node]:
        return [n for n in self.nodes.values() if not n.deleted]

    def _mint_node_id(self) -> str:
        while True:
            self._seq += 1
            node_id = f"n{self._seq:04d}"
            if node_id not in self.nodes:
                return node_id

    # -- mutations ---------------------------------------------------------

    def add_node(
        self,
        kind: str,
        payload: Any,
        parent: str | None = None,
        origin: str = "manual",
        node_id: str | None = None,
    ) -> str:
        if kind not in NODE_KINDS:
            raise PayloadMismatch(f"unknown node kind {kind!r}")
        if origin not in NODE_ORIGINS:
            raise PayloadMismatch(f"unknown origin {origin!r}")
        normalized = validate_payload(kind, payload)
        if parent is not None:
            parent_node = self.nodes.get(parent)
            if parent_node is None or parent_node.deleted:
                raise UnknownParent(f"no node {parent!r} in flow {self.flow_id!r}")
            if (parent_node.kind, kind) not in ALLOWED_EDGE_KINDS:
                raise InvalidEdgeKind(f"{parent_node.kind} -> {kind} is not an allowed edge")
        if node_id is None:
            node_id = self._mint_node_id()
        elif node_id in self.nodes:
            raise PayloadMismatch(f"node id {node_id!r} already exists")
        node = Node(
            id=node_id,
            flow=self.flow_id,
            kind=kind,
            payload=normalized,
            created_at=self.clock(),
            origin=origin,
        )
        self.nodes[node_id] = node
        if parent is not None:
            self._add_edge(parent, node_id)
        return node_id

    def _add_edge(self, source: str, target: str) -> Edge:
        edge = Edge(source, target)
        self.edges.append(edge)
        self._edge_set.add((source, target))
        self._children.setdefault(source, []).append(target)
        self._parents.setdefault(target, []).append(source)
        return edge

    def connect(self, source: str, target: str) -> Edge:
        src = self.node(source)
        dst = self.node(target)
        if (src.kind, dst.kind) not in ALLOWED_EDGE_KINDS:
            raise InvalidEdgeKind(f"{src.kind} -> {dst.kind} is not an allowed edge")
        if (source, target) in self._edge_set:
            raise DuplicateEdge(f"edge {source} -> {target} already exists")
        if source == target or self._reaches(target, source):
            raise CycleDetected(f"edge {source} -> {target} would close a cycle")
        return self._add_edge(source, target)

    def _reaches(self, start: str, goal: str) -> bool:
        stack = [start]
        seen = {start}
        while stack:
            current = stack.pop()
            if current == goal:
                return True
            for child in self._children.get(current, ()):
                if child not in seen:
                    seen.add(child)
                    stack.append(child)
        return False

    def edit_node(self, node_id: str, field_path: str, new_value: Any) -> EditEvent:
        node = self.node(node_id)
        old_value = _apply_edit(node.kind, node.payload, field_path, new_value)
        event = EditEvent(
            node=node_id,
            field_path=field_path,
            old_value=value_as_text(old_value),
            new_value=value_as_text(new_value),
            timestamp=self.clock(),
        )
        self.edit_log.append(event)
        return event

    def delete_node(self, node_id: str) -> None:
        node = self.node(node_id)
        live_children = [c for c in self._children.get(node_id, ()) if not self.nodes[c].deleted]
        if live_children:
            raise NodeInUse(f"node {node_id} still has children {live_children}")
        node.deleted = True

    def record_rating(self, node_id: str, dimensions: Any, submitted_at: float | None = None) -> RatingForm:
        node = self.node(node_id)
        expected = RATING_DIMENSIONS.get(node.kind)
        if expected is None:
            raise DimensionMismatch(f"{node.kind} nodes do not take ratings")
        if not isinstance(dimensions, dict) or set(dimensions) != expected:
            got = sorted(dimensions) if isinstance(dimensions, dict) else type(dimensions).__name__
            raise DimensionMismatch(f"{node.kind} rating dimensions must be {sorted(expected)}, got {got}")
        for name, value in dimensions.items():
            if isinstance(value, bool) or not isinstance(value, int) or not (1 <= value <= 5):
                raise OutOfRange(f"rating {name!r} must be an integer in 1..5, got {value!r}")
        form = RatingForm(
            node=node_id,
            dimensions=dict(dimensions),
            submitted_at=self.clock() if submitted_at is None else submitted_at,
        )
        self.ratings.append(form)
        return form

    def latest_rating(self, node_id: str) -> RatingForm | None:
        for form in reversed(self.ratings):
            if form.node == node_id:
                return form
        return None

    def set_panel(self, node_id: str, panel: dict | None) -> None:
        """Attach the outline panel document to an RQ node (system write, no EditEvent)."""
        node = self.node(node_id)
        if node.kind != RQ:
            raise PayloadMismatch("outline panels attach to RQ nodes only")
        if panel is None:
            node.payload.pop("outline", None)
        else:
            node.payload["outline"] = json.loads(json.dumps(panel))

    def get_panel(self, node_id: str) -> dict | None:
        node = self.node(node_id)
        if node.kind != RQ:
            raise PayloadMismatch("outline panels attach to RQ nodes only")
        return node.payload.get("outline")

    # -- reads --------------------------------------------------------------

    def compute_metrics(self) -> dict:
        live = self.live_nodes()
        total = len(live)
        used = sum(1 for n in live if self._children.get(n.id))
        edits_by_kind = {kind: 0 for kind in NODE_KINDS}
        for event in self.edit_log:
            node = self.nodes.get(event.node)
            if node is not None:
                edits_by_kind[node.kind] += 1
        return {
            "total_node_count": total,
            "pct_nodes_used": (used / total) if total else 0.0,
            "edits_by_kind": edits_by_kind,
        }

    def ancestors_with_self(self, node_id: str) -> set[str]:
        self.node(node_id)
        closure = {node_id}
        stack = [node_id]
        while stack:
            for parent in self._parents.get(stack.pop(), ()):
                if parent not in closure:
                    closure.add(parent)
                    stack.append(parent)
        return closure

    def ancestry_order(self, node_id: str) -> list[str]:
        """Topological order of the node's ancestor closure (self included).

        Ties are broken by node id so the order is deterministic for a
        given graph regardless of insertion history.
        """
        members = self.ancestors_with_self(node_id)
        pending_parents = {
            m: sum(1 for p in self._parents.get(m, ()) if p in members) for m in members
        }
        ready = sorted(m for m, count in pending_parents.items() if count == 0)
        order: list[str] = []
        while ready:
            current = ready.pop(0)
            order.append(current)
            changed = False
            for child in self._children.get(current, ()):
                if child in members:
                    pending_parents[child] -= 1
                    if pending_parents[child] == 0:
                        ready.append(child)
                        changed = True
            if changed:
                ready.sort()
        return order

    def ancestry_context(self, node_id: str) -> list[str]:
        return [render_node_text(self.nodes[m]) for m in self.ancestry_order(node_id)]

    def nearest_ancestor_of_kind(self, node_id: str, kind: str) -> Node | None:
        """Closest ancestor of the given kind (BFS upward), self excluded."""
        frontier = sorted(self._parents.get(node_id, ()))
        seen = set(frontier)
        while frontier:
            for member in frontier:
                node = self.nodes[member]
                if node.kind == kind:
                    return node
            nxt: list[str] = []
            for member in frontier:
                for parent in self._parents.get(member, ()):
                    if parent not in seen:
                        seen.add(parent)
                        nxt.append(parent)
            frontier = sorted(nxt)
        return None


def _resolve_trait_edit(payload: dict, category: str, trait: str, new_value: Any) -> Any:
    traits = payload["persona"][category]
    if new_value is None:
        if trait not in traits:
            raise UnknownField(f"persona.{category}.{trait} does not exist")
        return traits.pop(trait)
    if not isinstance(new_value, str):
        raise UnknownField(f"persona.{category}.{trait} must be text")
    old = traits.get(trait)
    traits[trait] = new_value
    return old


def _apply_edit(kind: str, payload: dict, field_path: str, new_value: Any) -> Any:
    """Apply one edit in place and return the old value. UnknownField when
    the path is not editable for this node kind."""
    parts = field_path.split(".")
    if kind == RQ:
        if field_path == "question":
            if not isinstance(new_value, str) or not new_value.strip():
                raise UnknownField("question must be nonempty text")
            old = payload["question"]
            payload["question"] = new_value
            return old
        if field_path == "favorite":
            if not isinstance(new_value, bool):
                raise UnknownField("favorite must be a boolean")
            old = payload["favorite"]
            payload["favorite"] = new_value
            return old
        raise UnknownField(f"RQ nodes have no editable field {field_path!r}")
    if kind == PERSONA:
        if field_path == "persona.persona_name":
            if not isinstance(new_value, str) or not new_value.strip():
                raise UnknownField("persona_name must be nonempty text")
            old = payload["persona"]["persona_name"]
            payload["persona"]["persona_name"] = new_value
            return old
        if field_path == "persona.user_instructions":
            if new_value is not None and not isinstance(new_value, str):
                raise UnknownField("user_instructions must be text or null")
            old = payload["persona"].get("user_instructions")
            if new_value is None:
                payload["persona"].pop("user_instructions", None)
            else:
                payload["persona"]["user_instructions"] = new_value
            return old
        if len(parts) == 3 and parts[0] == "persona" and parts[1] in ("role_fields", "background_fields"):
            return _resolve_trait_edit(payload, parts[1], parts[2], new_value)
        raise UnknownField(f"Persona nodes have no editable field {field_path!r}")
    if kind == LITERATURE:
        if field_path == "topic":
            if not isinstance(new_value, str) or not new_value.strip():
                raise UnknownField("topic must be nonempty text")
            old = payload["topic"]
            payload["topic"] = new_value
            return old
        if field_path == "papers":
            refreshed = validate_payload(LITERATURE, {"topic": payload["topic"], "papers": new_value})
            old = payload["papers"]
            payload["papers"] = refreshed["papers"]
            return old
        raise UnknownField(f"Literature nodes have no editable field {field_path!r}")
    if kind == CRITIQUE:
        if field_path in ("critique.critique_aspect", "critique.critique_detail"):
            leaf = parts[1]
            if not isinstance(new_value, str) or not new_value.strip():
                raise UnknownField(f"{leaf} must be nonempty text")
            old = payload["critique"][leaf]
            payload["critique"][leaf] = new_value
            return old
        raise UnknownField(f"Critique nodes have no editable field {field_path!r}")
    raise UnknownField(f"unknown node kind {kind!r}")
