"""
One full ideation iteration on the deterministic mock stack
===========================================================

Seeds a research question, then walks the generation chain the service
exposes: personas, literature collections, critiques, and revised
research questions. Everything runs in process, no network, no keys.
"""
from ideamap.service.config import Config
from ideamap.service.runtime import Runtime

# The mock provider and mock scholar are the defaults; throttling is
# pointless against in-process fakes, so turn it off.
runtime = Runtime(Config(rate_limit_rps=0.0))

flow_id = runtime.create_flow()
seed = runtime.store.add_node(
    flow_id,
    "RQ",
    {"question": "How do gamified badges affect long-term retention in online learning?"},
)
print(f"flow {flow_id}, seed node {seed}")
print()

# Step 1: three personas voiced from the seed question.
persona_ids = runtime.generate(flow_id, seed)
flow = runtime.store.get(flow_id)
print("personas:")
for nid in persona_ids:
    persona = flow.node(nid).payload["persona"]
    print(f"  {nid}  {persona['persona_name']}")
    print(f"        role: {persona['role_fields']['Role']}")
print()

# Step 2: the first persona suggests literature; each topic carries the
# papers that survived dense re-ranking against the seed question.
literature_ids = runtime.generate(flow_id, persona_ids[0])
print("literature topics from the first persona:")
for nid in literature_ids:
    payload = flow.node(nid).payload
    print(f"  {nid}  {payload['topic']}  ({len(payload['papers'])} papers)")
    for entry in payload["papers"][:2]:
        print(f"        {entry['title']} ({entry['year']})")
print()

# Step 3: critiques of the seed question, voiced by the same persona.
critique_ids = runtime.generate(flow_id, literature_ids[0])
print("critiques:")
for nid in critique_ids:
    critique = flow.node(nid).payload["critique"]
    print(f"  {nid}  [{critique['critique_aspect']}] {critique['critique_detail']}")
print()

# Step 4: revised research questions that answer the critique.
revised_ids = runtime.generate(flow_id, critique_ids[0])
print("revised research questions:")
for nid in revised_ids:
    print(f"  {nid}  {flow.node(nid).payload['question']}")
print()

metrics = flow.compute_metrics()
print(f"nodes: {metrics['total_node_count']}, expanded: {metrics['pct_nodes_used']:.0%}")
runtime.close()
