"""In-memory flow registry with per-flow mutation locks.

Mutations on one flow are serialized through its lock; reads take the same
lock briefly to get a consistent view. Flows are fully independent.
"""
from __future__ import annotations

import threading
import time
from typing import Any, Callable

from ..errors import UnknownFlow
from .snapshot import restore as restore_flow, snapshot as render_snapshot, to_document
from .model import EditEvent, Edge, FlowGraph, RatingForm


class FlowStore:
    def __init__(self, clock: Callable[[], float] = time.time):
        self._clock = clock
        self._flows: dict[str, FlowGraph] = {}
        self._locks: dict[str, threading.RLock] = {}
        self._registry = threading.Lock()
        self._seq = 0

    # -- registry -----------------------------------------------------------

    def _mint_flow_id(self) -> str:
        while True:
            self._seq += 1
            flow_id = f"flow-{self._seq:04d}"
            if flow_id not in self._flows:
                return flow_id

    def create_flow(self) -> str:
        with self._registry:
            flow_id = self._mint_flow_id()
            self._flows[flow_id] = FlowGraph(flow_id, clock=self._clock)
            self._locks[flow_id] = threading.RLock()
            return flow_id

    def flow_ids(self) -> list[str]:
        with self._registry:
            return sorted(self._flows)

    def has_flow(self, flow_id: str) -> bool:
        with self._registry:
            return flow_id in self._flows

    def get(self, flow_id: str) -> FlowGraph:
        with self._registry:
            flow = self._flows.get(flow_id)
        if flow is None:
            raise UnknownFlow(f"no flow {flow_id!r}")
        return flow

    def lock(self, flow_id: str) -> threading.RLock:
        with self._registry:
            lock = self._locks.get(flow_id)
        if lock is None:
            raise UnknownFlow(f"no flow {flow_id!r}")
        return lock

    def delete_flow(self, flow_id: str) -> None:
        with self._registry:
            if flow_id not in self._flows:
                raise UnknownFlow(f"no flow {flow_id!r}")
            del self._flows[flow_id]
            del self._locks[flow_id]

    def restore(self, document: str | bytes | dict) -> str:
        """Import a snapshot; keeps its flow id when free, mints one otherwise."""
        graph = restore_flow(document, clock=self._clock)
        with self._registry:
            flow_id = graph.flow_id
            if flow_id in self._flows:
                flow_id = self._mint_flow_id()
                graph = restore_flow(document, flow_id=flow_id, clock=self._clock)
            self._flows[flow_id] = graph
            self._locks[flow_id] = threading.RLock()
            return flow_id

    # -- per-flow operations --------------------------------------------------

    def add_node(
        self,
        flow_id: str,
        kind: str,
        payload: Any,
        parent: str | None = None,
        origin: str = "manual",
    ) -> str:
        flow = self.get(flow_id)
        with self.lock(flow_id):
            return flow.add_node(kind, payload, parent=parent, origin=origin)

    def connect(self, flow_id: str, source: str, target: str) -> Edge:
        flow = self.get(flow_id)
        with self.lock(flow_id):
            return flow.connect(source, target)

    def edit_node(self, flow_id: str, node_id: str, field_path: str, new_value: Any) -> EditEvent:
        flow = self.get(flow_id)
        with self.lock(flow_id):
            return flow.edit_node(node_id, field_path, new_value)

    def delete_node(self, flow_id: str, node_id: str) -> None:
        flow = self.get(flow_id)
        with self.lock(flow_id):
            flow.delete_node(node_id)

    def record_rating(self, flow_id: str, node_id: str, dimensions: Any) -> RatingForm:
        flow = self.get(flow_id)
        with self.lock(flow_id):
            return flow.record_rating(node_id, dimensions)

    def set_panel(self, flow_id: str, node_id: str, panel: dict | None) -> None:
        flow = self.get(flow_id)
        with self.lock(flow_id):
            flow.set_panel(node_id, panel)

    def get_panel(self, flow_id: str, node_id: str) -> dict | None:
        flow = self.get(flow_id)
        with self.lock(flow_id):
            return flow.get_panel(node_id)

    def compute_metrics(self, flow_id: str) -> dict:
        flow = self.get(flow_id)
        with self.lock(flow_id):
            return flow.compute_metrics()

    def ancestry_context(self, flow_id: str, node_id: str) -> list[str]:
        flow = self.get(flow_id)
        with self.lock(flow_id):
            return flow.ancestry_context(node_id)

    def document(self, flow_id: str) -> dict:
        flow = self.get(flow_id)
        with self.lock(flow_id):
            return to_document(flow)

    def snapshot(self, flow_id: str) -> str:
        flow = self.get(flow_id)
        with self.lock(flow_id):
            return render_snapshot(flow)
