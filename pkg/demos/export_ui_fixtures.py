"""Regenerate the JSON flow documents the web client tests render.

Each fixture is a flow document exactly as ``GET /flows/{flow_id}``
returns it, produced by the mock stack so the files are stable:

* ``small.json``       - a seed question plus its three personas.
* ``walkthrough.json`` - one full ideation loop with an outline panel,
                         a couple of ratings, and persona edits.
* ``large.json``       - a five-iteration pipeline run (61 nodes), used
                         for the layout smoke test.

Run from the repository root::

    python3 demos/export_ui_fixtures.py
"""

from __future__ import annotations

import json
from pathlib import Path

from ideamap.graph.model import CRITIQUE, LITERATURE, PERSONA, RQ
from ideamap.graph.snapshot import to_document
from ideamap.service.config import Config
from ideamap.service.pipeline import run_pipeline
from ideamap.service.runtime import Runtime

FIXTURES = Path(__file__).resolve().parent.parent / "frontend" / "tests" / "fixtures"

SEED = "How do gamified badges affect long-term retention in online learning?"


def document(runtime: Runtime, flow_id: str) -> dict:
    return to_document(runtime.store.get(flow_id))


def build_small(runtime: Runtime) -> dict:
    """Seed RQ plus one persona generation: 4 nodes, 3 edges."""
    flow_id = runtime.create_flow()
    seed = runtime.store.add_node(flow_id, RQ, {"question": SEED}, origin="manual")
    runtime.generate(flow_id, seed, PERSONA)
    return document(runtime, flow_id)


def build_walkthrough(runtime: Runtime) -> dict:
    """One full loop, then decorate it with the interactive artifacts."""
    flow_id = runtime.create_flow()
    seed = runtime.store.add_node(flow_id, RQ, {"question": SEED}, origin="manual")
    personas = runtime.generate(flow_id, seed, PERSONA)
    literature = runtime.generate(flow_id, personas[0], LITERATURE)
    critiques = runtime.generate(flow_id, literature[0], CRITIQUE)
    revised = runtime.generate(flow_id, critiques[0], RQ)

    # Persona edits so the customizer panel has a history to show.
    runtime.store.edit_node(
        flow_id, personas[0], "persona.background_fields.Discipline", "Learning Science"
    )
    runtime.store.edit_node(
        flow_id, personas[1], "persona.user_instructions", "Focus on longitudinal studies."
    )

    # Ratings on the two ratable kinds.
    runtime.store.record_rating(
        flow_id,
        critiques[0],
        {"relevance": 4, "helpfulness": 4, "informativeness": 3, "insightfulness": 3},
    )
    runtime.store.record_rating(
        flow_id,
        revised[0],
        {"relevance": 5, "creativity": 3, "feasibility": 4, "specificity": 4},
    )

    runtime.store.edit_node(flow_id, revised[0], "favorite", True)
    runtime.generate_outline(flow_id, revised[0])
    return document(runtime, flow_id)


def build_large(runtime: Runtime) -> dict:
    """Five pipeline iterations: 1 + 12 * 5 = 61 nodes."""
    flow_id = run_pipeline(runtime, SEED, iterations=5)
    return document(runtime, flow_id)


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    runtime = Runtime(Config(rate_limit_rps=0.0))
    try:
        for name, build in (
            ("small", build_small),
            ("walkthrough", build_walkthrough),
            ("large", build_large),
        ):
            doc = build(runtime)
            path = FIXTURES / f"{name}.json"
            path.write_text(json.dumps(doc, indent=2) + "\n")
            print(f"{path.name}: {len(doc['nodes'])} nodes, {len(doc['edges'])} edges")
    finally:
        runtime.close()


if __name__ == "__main__":
    main()
