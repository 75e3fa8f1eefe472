"""ideamap: persona-guided research ideation over a typed node graph.

The package splits into gateway (prompt templates and payload contracts),
graph (the flow model with snapshots), retrieval (two-stage scholarly
search), personas (synthesis engine), outline (research outline assembly),
and service (HTTP API, CLI, persistence).
"""
from . import errors
from .models import (
    Critique,
    LiteratureReview,
    LiteratureSummary,
    OutlinePanelState,
    OutlineSection,
    PaperRecord,
    PersonaProfile,
    RankedPaper,
    ScenarioSuggestion,
    SearchQuery,
)

__version__ = "0.1.0"

__all__ = [
    "Critique",
    "LiteratureReview",
    "LiteratureSummary",
    "OutlinePanelState",
    "OutlineSection",
    "PaperRecord",
    "PersonaProfile",
    "RankedPaper",
    "ScenarioSuggestion",
    "SearchQuery",
    "errors",
    "__version__",
]
