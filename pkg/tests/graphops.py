"""Random-operation driver for the flow graph, with naive structural oracles.

Used by the unit suite (small runs) and the acceptance suite (10k ops).
"""
from __future__ import annotations

import json
import random
from collections import defaultdict, deque

from ideamap.errors import IdeamapError
from ideamap.graph.model import ALLOWED_EDGE_KINDS, NODE_KINDS, RATING_DIMENSIONS, FlowGraph

PAYLOADS = {
    "RQ": lambda rng: {"question": f"Question {rng.randrange(10**6)}?"},
    "Persona": lambda rng: {
        "persona": {
            "persona_name": f"Expert {rng.randrange(10**6)}",
            "role_fields": {"Role": "Researcher", "Goal": "Study"},
            "background_fields": {"Domain": "Field"},
        }
    },
    "Literature": lambda rng: {"topic": f"topic {rng.randrange(10**6)}", "papers": []},
    "Critique": lambda rng: {
        "critique": {"critique_aspect": "Aspect", "critique_detail": f"detail {rng.randrange(10**6)}"}
    },
}

EDITS = {
    "RQ": [
        ("question", lambda rng: f"Revised {rng.randrange(10**6)}?"),
        ("favorite", lambda rng: bool(rng.getrandbits(1))),
    ],
    "Persona": [
        ("persona.persona_name", lambda rng: f"Renamed Expert {rng.randrange(10**6)}"),
        ("persona.background_fields.Domain", lambda rng: f"Domain {rng.randrange(10**6)}"),
    ],
    "Literature": [("topic", lambda rng: f"retitled {rng.randrange(10**6)}")],
    "Critique": [
        ("critique.critique_detail", lambda rng: f"sharper detail {rng.randrange(10**6)}")
    ],
}


def oracle_is_acyclic(flow: FlowGraph) -> bool:
    indegree = {nid: 0 for nid in flow.nodes}
    out = defaultdict(list)
    for edge in flow.edges:
        out[edge.source].append(edge.target)
        indegree[edge.target] += 1
    ready = deque(nid for nid, deg in indegree.items() if deg == 0)
    seen = 0
    while ready:
        nid = ready.popleft()
        seen += 1
        for nxt in out[nid]:
            indegree[nxt] -= 1
            if indegree[nxt] == 0:
                ready.append(nxt)
    return seen == len(flow.nodes)


def oracle_edges_whitelisted(flow: FlowGraph) -> bool:
    return all(
        (flow.nodes[e.source].kind, flow.nodes[e.target].kind) in ALLOWED_EDGE_KINDS
        for e in flow.edges
    )


def descendant_payload_fingerprint(flow: FlowGraph, root: str) -> str:
    """Canonical hash input of every payload strictly below root."""
    below = set()
    frontier = [root]
    children = defaultdict(list)
    for e in flow.edges:
        children[e.source].append(e.target)
    while frontier:
        for child in children[frontier.pop()]:
            if child not in below:
                below.add(child)
                frontier.append(child)
    payloads = {nid: flow.nodes[nid].payload for nid in sorted(below)}
    return json.dumps(payloads, sort_keys=True, default=str)


def run_random_ops(flow: FlowGraph, rng: random.Random, n_ops: int, check_every: int = 25) -> dict:
    """Apply n_ops random operations; assert invariants as we go."""
    from oracles import recount_metrics
    from ideamap.graph.snapshot import to_document

    counts = defaultdict(int)
    if not flow.nodes:
        flow.add_node("RQ", PAYLOADS["RQ"](rng))

    for step in range(n_ops):
        node_ids = list(flow.nodes)
        op = rng.choice(("add", "add", "add", "connect", "edit", "edit", "delete", "rate"))
        try:
            if op == "add":
                kind = rng.choice(NODE_KINDS)
                parent = rng.choice(node_ids + [None])
                flow.add_node(kind, PAYLOADS[kind](rng), parent=parent)
            elif op == "connect":
                flow.connect(rng.choice(node_ids), rng.choice(node_ids))
            elif op == "edit":
                nid = rng.choice(node_ids)
                node = flow.nodes[nid]
                path, maker = rng.choice(EDITS[node.kind])
                before = descendant_payload_fingerprint(flow, nid)
                flow.edit_node(nid, path, maker(rng))
                after = descendant_payload_fingerprint(flow, nid)
                assert before == after, f"edit of {nid} cascaded to descendants"
            elif op == "delete":
                flow.delete_node(rng.choice(node_ids))
            elif op == "rate":
                nid = rng.choice(node_ids)
                dims = RATING_DIMENSIONS.get(flow.nodes[nid].kind)
                if dims:
                    flow.record_rating(nid, {d: rng.randint(1, 5) for d in dims})
        except IdeamapError:
            counts["rejected"] += 1
        else:
            counts[op] += 1

        if step % check_every == 0 or step == n_ops - 1:
            assert oracle_is_acyclic(flow), "cycle appeared"
            assert oracle_edges_whitelisted(flow), "edge outside whitelist"
            metrics = flow.compute_metrics()
            expected = recount_metrics(to_document(flow))
            assert metrics["total_node_count"] == expected["total_node_count"]
            assert abs(metrics["pct_nodes_used"] - expected["pct_nodes_used"]) < 1e-12
            for kind in NODE_KINDS:
                assert metrics["edits_by_kind"][kind] == expected["edits_by_kind"].get(kind, 0)
    return dict(counts)
