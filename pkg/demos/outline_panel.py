"""
Research outline panel for a refined question
=============================================

Grows one branch down to a revised research question, then renders the
five-section outline panel for it: question, literature review,
scenario, outline table, and expected outcomes.
"""
from ideamap.models import OutlinePanelState
from ideamap.outline import panel_to_markdown
from ideamap.service.config import Config
from ideamap.service.runtime import Runtime

runtime = Runtime(Config(rate_limit_rps=0.0))

flow_id = runtime.create_flow()
seed = runtime.store.add_node(
    flow_id,
    "RQ",
    {"question": "Can conversational agents reduce medication errors in home care?"},
)

# Walk one branch: persona, literature, critique, revised question.
persona = runtime.generate(flow_id, seed)[0]
literature = runtime.generate(flow_id, persona)[0]
critique = runtime.generate(flow_id, literature)[0]
revised = runtime.generate(flow_id, critique)[0]

flow = runtime.store.get(flow_id)
print(f"outline target: {revised}  {flow.node(revised).payload['question']}")
print()

# The panel needs literature and a critique in the node's ancestry,
# which the branch above provides.
document = runtime.generate_outline(flow_id, revised)
print(panel_to_markdown(OutlinePanelState.from_dict(document)))

# The panel is stored on the node, so a reload sees the same document.
assert runtime.store.get_panel(flow_id, revised) == document
runtime.close()
