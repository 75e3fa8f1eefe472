"""Headless ideation loop: seed RQ through personas, literature, critiques,
and revised RQs without a human in the loop."""
from __future__ import annotations

from ..errors import PreconditionError
from ..graph.model import CRITIQUE, LITERATURE, PERSONA, RQ, render_node_text
from ..retrieval.embeddings import cosine
from .runtime import Runtime

SELECT_MODES = ("first", "similarity")


def _select(runtime: Runtime, flow_id: str, node_ids: list[str], seed_rq: str, mode: str) -> str:
    if not node_ids:
        raise PreconditionError("generation returned no nodes to select from")
    ordered = sorted(node_ids)
    if mode == "first":
        return ordered[0]
    flow = runtime.store.get(flow_id)
    reference = runtime.embedder.embed(seed_rq)

    def score(node_id: str) -> float:
        text = render_node_text(flow.node(node_id))
        if not text.strip():
            return -1.0
        return cosine(runtime.embedder.embed(text), reference)

    # Highest similarity wins; id order breaks ties deterministically.
    return min(ordered, key=lambda nid: (-score(nid), nid))


def run_pipeline(runtime: Runtime, rq: str, iterations: int = 1, select: str = "first") -> str:
    """Run the automated loop and return the id of the flow it built."""
    if not isinstance(rq, str) or not rq.strip():
        raise PreconditionError("pipeline needs a nonempty research question")
    if not isinstance(iterations, int) or isinstance(iterations, bool) or iterations < 0:
        raise PreconditionError("iterations must be a non-negative integer")
    if select not in SELECT_MODES:
        raise PreconditionError(f"select must be one of {SELECT_MODES}")

    flow_id = runtime.create_flow()
    current = runtime.store.add_node(flow_id, RQ, {"question": rq.strip()}, origin="manual")
    runtime.persist(flow_id)

    for _ in range(iterations):
        personas = runtime.generate(flow_id, current, PERSONA)
        persona = _select(runtime, flow_id, personas, rq, select)
        topics = runtime.generate(flow_id, persona, LITERATURE)
        topic = _select(runtime, flow_id, topics, rq, select)
        critiques = runtime.generate(flow_id, topic, CRITIQUE)
        critique = _select(runtime, flow_id, critiques, rq, select)
        revised = runtime.generate(flow_id, critique, RQ)
        current = _select(runtime, flow_id, revised, rq, select)
    return flow_id
