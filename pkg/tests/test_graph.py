import random

import pytest

from ideamap.errors import (
    CycleDetected,
    DimensionMismatch,
    DuplicateEdge,
    InvalidEdgeKind,
    NodeInUse,
    OutOfRange,
    PayloadMismatch,
    UnknownField,
    UnknownFlow,
    UnknownNode,
    UnknownParent,
)
from ideamap.graph.model import (
    ALLOWED_EDGE_KINDS,
    RATING_DIMENSIONS,
    FlowGraph,
    render_node_text,
    validate_payload,
)
from ideamap.graph.store import FlowStore
from graphops import run_random_ops

RQ_PAYLOAD = {"question": "How can AR glasses aid recall?"}
PERSONA_PAYLOAD = {
    "persona": {
        "persona_name": "Memory Expert",
        "role_fields": {"Role": "Cognitive Scientist", "Goal": "Understand memory"},
        "background_fields": {"Domain": "Cognitive psychology"},
    }
}
LIT_PAYLOAD = {"topic": "wearable memory aids", "papers": []}
CRIT_PAYLOAD = {"critique": {"critique_aspect": "Feasibility", "critique_detail": "Sample unclear."}}

PAYLOAD_BY_KIND = {
    "RQ": RQ_PAYLOAD,
    "Persona": PERSONA_PAYLOAD,
    "Literature": LIT_PAYLOAD,
    "Critique": CRIT_PAYLOAD,
}


def build_chain(flow):
    """RQ -> Persona -> Literature -> Critique; returns the four ids."""
    rq = flow.add_node("RQ", RQ_PAYLOAD)
    persona = flow.add_node("Persona", PERSONA_PAYLOAD, parent=rq)
    lit = flow.add_node("Literature", LIT_PAYLOAD, parent=persona)
    crit = flow.add_node("Critique", CRIT_PAYLOAD, parent=lit)
    return rq, persona, lit, crit


@pytest.fixture
def flow():
    return FlowGraph(flow_id="flow-0001")


class TestPayloadValidation:
    def test_rq_defaults_favorite(self):
        normalized = validate_payload("RQ", {"question": "Q?"})
        assert normalized == {"question": "Q?", "favorite": False}

    @pytest.mark.parametrize("bad", [
        {}, {"question": ""}, {"question": "  "}, {"question": 4},
        {"question": "ok", "unexpected": 1},
    ])
    def test_rq_rejects(self, bad):
        with pytest.raises(PayloadMismatch):
            validate_payload("RQ", bad)

    def test_persona_exact_keys(self):
        with pytest.raises(PayloadMismatch):
            validate_payload("Persona", {"persona": PERSONA_PAYLOAD["persona"], "extra": 1})

    def test_persona_profile_checked(self):
        with pytest.raises(PayloadMismatch):
            validate_payload("Persona", {"persona": {"persona_name": "", "role_fields": {}, "background_fields": {}}})

    def test_literature_duplicate_papers_rejected(self):
        paper = {
            "paper_id": "p1", "title": "T", "abstract": None, "authors": [],
            "year": 2020, "venue": "", "citation_count": 0, "url": "",
        }
        normalized = validate_payload("Literature", {"topic": "t", "papers": [paper]})
        assert len(normalized["papers"]) == 1
        with pytest.raises(PayloadMismatch):
            validate_payload("Literature", {"topic": "t", "papers": [paper, dict(paper)]})

    def test_critique_requires_nonempty(self):
        with pytest.raises(PayloadMismatch):
            validate_payload("Critique", {"critique": {"critique_aspect": "", "critique_detail": "d"}})

    def test_unknown_kind(self):
        with pytest.raises(PayloadMismatch):
            validate_payload("Widget", {})


class TestNodesAndEdges:
    def test_ids_sequential(self, flow):
        assert flow.add_node("RQ", RQ_PAYLOAD) == "n0001"
        assert flow.add_node("RQ", RQ_PAYLOAD) == "n0002"

    def test_add_with_parent_creates_edge(self, flow):
        rq, persona, lit, crit = build_chain(flow)
        assert [(e.source, e.target) for e in flow.edges] == [
            (rq, persona), (persona, lit), (lit, crit),
        ]

    def test_unknown_parent(self, flow):
        with pytest.raises(UnknownParent):
            flow.add_node("Persona", PERSONA_PAYLOAD, parent="n9999")

    def test_deleted_parent_rejected(self, flow):
        rq = flow.add_node("RQ", RQ_PAYLOAD)
        flow.delete_node(rq)
        with pytest.raises(UnknownParent):
            flow.add_node("Persona", PERSONA_PAYLOAD, parent=rq)

    def test_whitelist_enforced_on_add(self, flow):
        rq = flow.add_node("RQ", RQ_PAYLOAD)
        with pytest.raises(InvalidEdgeKind):
            flow.add_node("Literature", LIT_PAYLOAD, parent=rq)

    @pytest.mark.parametrize("src_kind,dst_kind", sorted(ALLOWED_EDGE_KINDS))
    def test_every_whitelisted_pair_connectable(self, flow, src_kind, dst_kind):
        a = flow.add_node(src_kind, PAYLOAD_BY_KIND[src_kind])
        b = flow.add_node(dst_kind, PAYLOAD_BY_KIND[dst_kind])
        edge = flow.connect(a, b)
        assert (edge.source, edge.target) == (a, b)

    def test_connect_unknown_node_precedes_kind_check(self, flow):
        rq = flow.add_node("RQ", RQ_PAYLOAD)
        with pytest.raises(UnknownNode):
            flow.connect(rq, "n9999")

    def test_duplicate_edge(self, flow):
        rq, persona, *_ = build_chain(flow)
        with pytest.raises(DuplicateEdge):
            flow.connect(rq, persona)

    def test_self_loop_rejected(self, flow):
        # No kind pairs itself in the whitelist, so the kind check fires first.
        rq = flow.add_node("RQ", RQ_PAYLOAD)
        with pytest.raises(InvalidEdgeKind):
            flow.connect(rq, rq)

    def test_two_step_cycle_rejected(self, flow):
        lit = flow.add_node("Literature", LIT_PAYLOAD)
        persona = flow.add_node("Persona", PERSONA_PAYLOAD, parent=lit)
        with pytest.raises(CycleDetected):
            flow.connect(persona, lit)

    def test_cycle_detected_around_loop(self, flow):
        rq, persona, lit, crit = build_chain(flow)
        # Critique -> RQ is allowed by kind, but this RQ is crit's ancestor.
        with pytest.raises(CycleDetected):
            flow.connect(crit, rq)

    def test_literature_to_persona_edge_allowed(self, flow):
        _, _, lit, _ = build_chain(flow)
        persona2 = flow.add_node("Persona", PERSONA_PAYLOAD)
        flow.connect(lit, persona2)

    def test_delete_requires_no_live_children(self, flow):
        rq, persona, lit, crit = build_chain(flow)
        with pytest.raises(NodeInUse):
            flow.delete_node(lit)
        flow.delete_node(crit)
        flow.delete_node(lit)  # children now tombstoned
        assert flow.nodes[lit].deleted

    def test_deleted_nodes_leave_live_set(self, flow):
        rq = flow.add_node("RQ", RQ_PAYLOAD)
        flow.delete_node(rq)
        assert flow.live_nodes() == []
        assert flow.node(rq).deleted  # tombstone still addressable


class TestEditing:
    def test_edit_appends_event_with_text_values(self, flow):
        rq = flow.add_node("RQ", RQ_PAYLOAD)
        event = flow.edit_node(rq, "question", "Sharper question?")
        assert flow.nodes[rq].payload["question"] == "Sharper question?"
        assert event.old_value == RQ_PAYLOAD["question"]
        assert event.new_value == "Sharper question?"
        assert flow.edit_log == [event]

    def test_edit_favorite_serializes_bool(self, flow):
        rq = flow.add_node("RQ", RQ_PAYLOAD)
        event = flow.edit_node(rq, "favorite", True)
        assert event.new_value == "true"

    def test_persona_trait_add_modify_remove(self, flow):
        _, persona, *_ = build_chain(flow)
        flow.edit_node(persona, "persona.background_fields.Skills", "Eye tracking")
        assert flow.nodes[persona].payload["persona"]["background_fields"]["Skills"] == "Eye tracking"
        flow.edit_node(persona, "persona.background_fields.Skills", "Field studies")
        flow.edit_node(persona, "persona.background_fields.Skills", None)
        assert "Skills" not in flow.nodes[persona].payload["persona"]["background_fields"]

    def test_remove_missing_trait(self, flow):
        _, persona, *_ = build_chain(flow)
        with pytest.raises(UnknownField):
            flow.edit_node(persona, "persona.background_fields.Nope", None)

    def test_unknown_field_path(self, flow):
        rq = flow.add_node("RQ", RQ_PAYLOAD)
        with pytest.raises(UnknownField):
            flow.edit_node(rq, "outline", {"x": 1})

    def test_critique_fields_editable(self, flow):
        *_, crit = build_chain(flow)
        flow.edit_node(crit, "critique.critique_detail", "Much more specific.")
        assert flow.nodes[crit].payload["critique"]["critique_detail"] == "Much more specific."

    def test_no_cascade(self, flow):
        rq, persona, lit, crit = build_chain(flow)
        child_payloads = [flow.nodes[n].payload.copy() for n in (persona, lit)]
        deep = flow.nodes[crit].payload["critique"].copy()
        flow.edit_node(rq, "question", "Entirely new directions?")
        assert [flow.nodes[n].payload for n in (persona, lit)] == child_payloads
        assert flow.nodes[crit].payload["critique"] == deep


class TestRatings:
    def test_rq_and_critique_dimension_sets(self, flow):
        rq, _, _, crit = build_chain(flow)
        flow.record_rating(rq, {"relevance": 5, "creativity": 4, "feasibility": 3, "specificity": 2})
        flow.record_rating(crit, {"relevance": 1, "helpfulness": 2, "informativeness": 3, "insightfulness": 4})
        assert len(flow.ratings) == 2

    def test_wrong_dimension_set(self, flow):
        rq = flow.add_node("RQ", RQ_PAYLOAD)
        with pytest.raises(DimensionMismatch):
            flow.record_rating(rq, {"relevance": 5, "helpfulness": 4, "informativeness": 3, "insightfulness": 2})

    def test_non_rateable_kind(self, flow):
        _, persona, *_ = build_chain(flow)
        with pytest.raises(DimensionMismatch):
            flow.record_rating(persona, {"relevance": 3})

    @pytest.mark.parametrize("value", [0, 6, -1, 2.5, "3", True])
    def test_out_of_range_values(self, flow, value):
        rq = flow.add_node("RQ", RQ_PAYLOAD)
        dims = {d: 3 for d in RATING_DIMENSIONS["RQ"]}
        dims["relevance"] = value
        with pytest.raises(OutOfRange):
            flow.record_rating(rq, dims)

    def test_append_only_latest_wins(self, flow):
        rq = flow.add_node("RQ", RQ_PAYLOAD)
        first = {d: 1 for d in RATING_DIMENSIONS["RQ"]}
        second = {d: 5 for d in RATING_DIMENSIONS["RQ"]}
        flow.record_rating(rq, first)
        flow.record_rating(rq, second)
        assert len(flow.ratings) == 2
        assert flow.latest_rating(rq).dimensions == second


class TestMetricsAndAncestry:
    def test_example_half_used(self, flow):
        rq, persona, lit, crit = build_chain(flow)
        del crit
        metrics = flow.compute_metrics()
        assert metrics["total_node_count"] == 4
        assert metrics["pct_nodes_used"] == pytest.approx(3 / 4)

    def test_empty_flow_pct_zero(self, flow):
        metrics = flow.compute_metrics()
        assert metrics["total_node_count"] == 0
        assert metrics["pct_nodes_used"] == 0

    def test_edits_by_kind_counts(self, flow):
        rq, persona, *_ = build_chain(flow)
        flow.edit_node(rq, "question", "Other?")
        flow.edit_node(persona, "persona.persona_name", "Renamed One")
        flow.edit_node(rq, "favorite", True)
        metrics = flow.compute_metrics()
        assert metrics["edits_by_kind"]["RQ"] == 2
        assert metrics["edits_by_kind"]["Persona"] == 1
        assert metrics["edits_by_kind"]["Critique"] == 0

    def test_ancestry_order_topological_and_sorted(self, flow):
        rq, persona, lit, crit = build_chain(flow)
        order = flow.ancestry_order(crit)
        assert order == [rq, persona, lit, crit]

    def test_ancestry_context_labels(self, flow):
        rq, persona, lit, crit = build_chain(flow)
        blocks = flow.ancestry_context(crit)
        assert blocks[0].startswith("Research Question: ")
        assert blocks[1].startswith("Persona:")
        assert blocks[2].startswith("Literature (wearable memory aids):")
        assert blocks[3].startswith("Critique (Feasibility):")

    def test_nearest_ancestor(self, flow):
        rq, persona, lit, crit = build_chain(flow)
        assert flow.nearest_ancestor_of_kind(crit, "Persona").id == persona
        assert flow.nearest_ancestor_of_kind(crit, "RQ").id == rq
        assert flow.nearest_ancestor_of_kind(rq, "Persona") is None

    def test_render_node_text_literature_lists_papers(self, flow):
        paper = {
            "paper_id": "p1", "title": "Recall Study", "abstract": "We test recall.",
            "authors": [{"name": "A. Li", "author_id": "a1"}], "year": 2021,
            "venue": "CHI", "citation_count": 4, "url": "",
        }
        lit = flow.add_node("Literature", {"topic": "aids", "papers": [paper]})
        text = render_node_text(flow.nodes[lit])
        assert "Recall Study" in text and "2021" in text


class TestFlowStore:
    def test_create_and_get(self):
        store = FlowStore()
        fid = store.create_flow()
        assert fid == "flow-0001"
        assert store.get(fid).flow_id == fid
        assert store.flow_ids() == [fid]

    def test_unknown_flow(self):
        store = FlowStore()
        with pytest.raises(UnknownFlow):
            store.get("flow-9999")

    def test_delete_flow(self):
        store = FlowStore()
        fid = store.create_flow()
        store.delete_flow(fid)
        assert store.flow_ids() == []
        with pytest.raises(UnknownFlow):
            store.get(fid)

    def test_operations_delegate(self):
        store = FlowStore()
        fid = store.create_flow()
        rq = store.add_node(fid, "RQ", RQ_PAYLOAD)
        store.edit_node(fid, rq, "question", "New?")
        assert store.compute_metrics(fid)["edits_by_kind"]["RQ"] == 1


class TestRandomOperations:
    def test_driver_short_run(self):
        flow = FlowGraph(flow_id="flow-0001")
        counts = run_random_ops(flow, random.Random(42), 400)
        assert counts.get("add", 0) > 20
        assert counts.get("rejected", 0) > 0  # the mix includes invalid attempts
