"""Research outline outputs: revised RQs, literature review, scenarios,
the outline table, and the hypothetical abstract, assembled into the
five-section panel."""
from __future__ import annotations

import json
import warnings
from typing import Sequence

from .errors import ContractViolation, PreconditionError
from .gateway.core import Gateway
from .models import (
    SCENARIO_WORD_LIMIT,
    Critique,
    LiteratureReview,
    OutlinePanelState,
    OutlineSection,
    PaperRecord,
    PersonaProfile,
    ScenarioSuggestion,
)

FIRST_SECTION_TITLE = "Motivation and Research Gap"
BANNED_SECTION_TITLES = frozenset({"introduction", "literature review", "conclusion", "references"})


def render_critiques(critiques: Sequence[Critique]) -> str:
    return "\n".join(f"- {c.critique_aspect}: {c.critique_detail}" for c in critiques)


def render_abstracts(papers: Sequence[PaperRecord]) -> str:
    """Abstracts with citation metadata so reviews can cite Author et al. (Year)(URL)."""
    blocks = []
    for paper in papers:
        if not paper.abstract or not paper.abstract.strip():
            continue
        first_author = paper.authors[0].name if paper.authors else "Unknown"
        year = paper.year if paper.year is not None else "n.d."
        header = f"{first_author} et al. ({year})({paper.url or 'no url'}): {paper.title}"
        blocks.append(f"{header}\n{paper.abstract}")
    return "\n\n".join(blocks)


def _join_abstracts(abstracts: Sequence[str] | str) -> str:
    if isinstance(abstracts, str):
        text = abstracts
    else:
        text = "\n\n".join(a for a in abstracts if a and a.strip())
    if not text.strip():
        raise PreconditionError("at least one nonempty abstract is required")
    return text


def revised_rqs(
    gateway: Gateway,
    persona: PersonaProfile,
    context: str,
    rq: str,
    critiques: Sequence[Critique],
) -> list[str]:
    if not critiques:
        raise PreconditionError("at least one critique is required to revise an RQ")
    payload = gateway.generate(
        "revised_rqs",
        {
            "persona": persona.to_prompt_text(),
            "context": context,
            "rq": rq,
            "critiques": render_critiques(critiques),
        },
    )
    return list(payload.value)


def literature_review(
    gateway: Gateway,
    abstracts: Sequence[str] | str,
    rq: str,
    context: str,
) -> LiteratureReview:
    text = _join_abstracts(abstracts)
    payload = gateway.generate(
        "literature_review",
        {"context": context, "abstracts": text, "rq": rq},
    )
    return payload.value


def research_scenarios(
    gateway: Gateway,
    abstracts: Sequence[str] | str,
    rq: str,
    context: str,
) -> list[ScenarioSuggestion]:
    if not rq.strip():
        raise PreconditionError("rq must be nonempty")
    payload = gateway.generate(
        "research_scenarios",
        {"context": context, "abstracts": _join_abstracts(abstracts), "rq": rq},
    )
    suggestions: list[ScenarioSuggestion] = payload.value
    for suggestion in suggestions:
        if suggestion.word_count > SCENARIO_WORD_LIMIT:
            warnings.warn(
                f"scenario exceeds {SCENARIO_WORD_LIMIT} words ({suggestion.word_count}): "
                f"{suggestion.text[:60]!r}",
                stacklevel=2,
            )
    return suggestions


def validate_outline(sections: Sequence[OutlineSection]) -> list[OutlineSection]:
    if not sections:
        raise ContractViolation("outline table must have at least one section")
    first = sections[0].title.strip()
    if first != FIRST_SECTION_TITLE:
        raise ContractViolation(f"outline must start with {FIRST_SECTION_TITLE!r}, got {first!r}")
    for section in sections:
        title = section.title.strip()
        if not title:
            raise ContractViolation("outline section titles must be nonempty")
        if title.lower() in BANNED_SECTION_TITLES:
            raise ContractViolation(f"outline section title {title!r} is not allowed")
        if not section.description.strip():
            raise ContractViolation(f"outline section {title!r} has an empty description")
    return list(sections)


def outline_table(
    gateway: Gateway,
    persona: PersonaProfile,
    context: str,
    rq: str,
    scenario: str,
    critique: str,
    literature: str = "",
) -> list[OutlineSection]:
    for name, value in (("context", context), ("rq", rq), ("scenario", scenario), ("critique", critique)):
        if not value.strip():
            raise PreconditionError(f"{name} must be nonempty")
    payload = gateway.generate(
        "outline_table",
        {
            "persona": persona.to_prompt_text(),
            "context": context,
            "rq": rq,
            "scenario": scenario,
            "critiqueNode": critique,
            "literature": literature,
        },
    )
    return validate_outline(payload.value)


def table_data(sections: Sequence[OutlineSection]) -> str:
    """Canonical JSON rendering of an outline table, used as the {tableData} binding."""
    return json.dumps(
        [s.to_dict() for s in sections],
        sort_keys=True,
        separators=(",", ":"),
        ensure_ascii=False,
    )


def hypothetical_abstract(
    gateway: Gateway,
    persona: PersonaProfile,
    context: str,
    rq: str,
    scenario: str,
    literature: str,
    table: Sequence[OutlineSection],
    critique: str,
) -> str:
    if not table:
        raise PreconditionError("an outline table is required before the abstract")
    payload = gateway.generate(
        "hypothetical_abstract",
        {
            "persona": persona.to_prompt_text(),
            "context": context,
            "rq": rq,
            "scenario": scenario,
            "literature": literature,
            "tableData": table_data(table),
            "critiqueNode": critique,
        },
    )
    return payload.value


def build_panel(
    rq: str,
    review: LiteratureReview,
    scenario: str,
    table: Sequence[OutlineSection],
    abstract: str,
) -> OutlinePanelState:
    return OutlinePanelState(
        research_question=rq,
        literature_review=review,
        research_scenario=scenario,
        outline_table=validate_outline(table),
        expected_outcomes=abstract,
    )


def panel_to_markdown(panel: OutlinePanelState) -> str:
    review = panel.literature_review
    lines = [
        "# Research Outline",
        "",
        "## Research Question",
        panel.research_question,
        "",
        "## Literature Review",
        f"**Relevant Past Findings:** {review.relevant_past_findings}",
        "",
        f"**Existing Methods:** {review.existing_methods}",
        "",
        f"**Contributions from Prior Works:** {review.contributions_from_prior_works}",
        "",
        f"**Research Gap and Motivation:** {review.research_gap_and_motivation}",
        "",
        "## Research Scenario",
        panel.research_scenario,
        "",
        "## Outline",
    ]
    for section in panel.outline_table:
        lines.extend([f"### {section.title}", section.description, ""])
    lines.extend(["## Expected Outcomes", panel.expected_outcomes, ""])
    return "\n".join(lines)
