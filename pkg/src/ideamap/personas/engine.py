"""Persona synthesis: from a research question, from summarized literature,
and from author profiles, plus trait customization and persona-voiced
critiques."""
from __future__ import annotations

import re
import time
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ..errors import (
    ContractViolation,
    NoAbstracts,
    PreconditionError,
    UnknownTrait,
)
from ..gateway.core import Gateway
from ..gateway.payloads import parse_json_object
from ..graph.model import EditEvent, value_as_text
from ..models import Critique, LiteratureSummary, PaperRecord, PersonaProfile
from ..retrieval.embeddings import Embedder, cosine
from ..retrieval.scholar import ScholarClient
from .classifier import KeywordSentenceClassifier, SentenceClassifier

# The {persona} binding for root-level generation calls, where no persona
# exists yet: a fixed meta-profile for a generic assistant.
DEFAULT_META_PERSONA = PersonaProfile(
    persona_name="Research Assistant",
    role_fields={"Role": "research assistant", "Goal": "assist research ideation"},
)

# Names that must never be used for personas; the generation contract says
# "Do NOT use real names". Deny-list hits hard-fail, lookalikes only warn.
KNOWN_REAL_NAMES = frozenset(
    {
        "geoffrey hinton",
        "yann lecun",
        "yoshua bengio",
        "andrew ng",
        "fei-fei li",
        "ilya sutskever",
        "demis hassabis",
        "alan turing",
        "albert einstein",
        "marie curie",
        "ada lovelace",
        "noam chomsky",
        "richard feynman",
        "john mccarthy",
        "claude shannon",
        "donald knuth",
    }
)

_ROLE_WORDS = frozenset(
    {
        "expert",
        "researcher",
        "scientist",
        "professor",
        "engineer",
        "analyst",
        "specialist",
        "designer",
        "scholar",
        "practitioner",
        "psychologist",
        "economist",
        "clinician",
        "ethicist",
    }
)

_PERSON_LIKE = re.compile(r"^[A-Z][a-z]+(?: [A-Z]\.)? [A-Z][a-z]+$")


def check_persona_name(name: str) -> str:
    """Real-name guard: deny-list is a hard failure, lookalike shape a warning."""
    normalized = " ".join(name.split()).lower()
    if normalized in KNOWN_REAL_NAMES:
        raise ContractViolation(f"persona name {name!r} is a real person's name")
    if _PERSON_LIKE.match(name.strip()) and not (
        set(word.lower() for word in name.split()) & _ROLE_WORDS
    ):
        warnings.warn(f"persona name {name!r} looks like a personal name", stacklevel=2)
    return name


@dataclass(frozen=True)
class TraitEdit:
    op: str  # add | remove | modify
    category: str  # role | background
    trait: str
    value: str | None = None


_SUMMARIZE_PROMPT = """You are a research assistant condensing labeled sentences that were
extracted from several paper abstracts.

Background sentences:
{background}

Method sentences:
{method}

Conclusion sentences:
{conclusion}

Write a concise synthesis of each group. Reply with only JSON in this format:
{{"background": "...", "methodology": "...", "conclusion": "..."}}"""


class PersonaEngine:
    def __init__(
        self,
        gateway: Gateway,
        classifier: SentenceClassifier | None = None,
        scholar: ScholarClient | None = None,
        embedder: Embedder | None = None,
        author_similarity_threshold: float = 0.65,
        author_top_papers: int = 3,
        max_authors: int = 3,
        author_paper_limit: int = 100,
        meta_persona: PersonaProfile = DEFAULT_META_PERSONA,
        clock: Callable[[], float] = time.time,
    ):
        self.gateway = gateway
        self.classifier = classifier or KeywordSentenceClassifier()
        self.scholar = scholar
        self.embedder = embedder
        self.author_similarity_threshold = author_similarity_threshold
        self.author_top_papers = author_top_papers
        self.max_authors = max_authors
        self.author_paper_limit = author_paper_limit
        self.meta_persona = meta_persona
        self.clock = clock

    # -- scenario 1: from a research question --------------------------------

    def personas_from_rq(self, rq: str, history: Sequence[PersonaProfile] = ()) -> list[PersonaProfile]:
        if not rq.strip():
            raise PreconditionError("rq must be nonempty")
        history_text = "\n".join(f"- {p.persona_name}" for p in history) or "None"
        payload = self.gateway.generate(
            "personas_from_rq",
            {
                "persona": self.meta_persona.to_prompt_text(),
                "history_personas": history_text,
                "rq": rq,
            },
        )
        return self._vet_personas(payload.value, history)

    # -- scenario 2: from summarized literature ------------------------------

    def classify_abstract_sentences(self, abstract: str):
        return self.classifier.classify(abstract)

    def summarize_literature(self, papers: Sequence[PaperRecord]) -> LiteratureSummary:
        with_abstracts = [p for p in papers if p.abstract and p.abstract.strip()]
        if not with_abstracts:
            raise NoAbstracts("at least one paper must have an abstract")
        pools: dict[str, list[str]] = {"Background": [], "Method": [], "Conclusion": []}
        for paper in with_abstracts:
            for labeled in self.classifier.classify(paper.abstract):
                if labeled.label in pools:
                    pools[labeled.label].append(labeled.sentence)
        prompt = _SUMMARIZE_PROMPT.format(
            background="\n".join(pools["Background"]) or "(none)",
            method="\n".join(pools["Method"]) or "(none)",
            conclusion="\n".join(pools["Conclusion"]) or "(none)",
        )
        raw = self.gateway.complete_text(prompt)
        data = parse_json_object(raw, ("background", "methodology", "conclusion"))
        return LiteratureSummary(
            background=data["background"],
            methodology=data["methodology"],
            conclusion=data["conclusion"],
            source_paper_ids=[p.paper_id for p in with_abstracts],
        ).validate()

    def personas_from_literature(
        self, summary: LiteratureSummary, history: Sequence[PersonaProfile] = ()
    ) -> list[PersonaProfile]:
        summary.validate()
        payload = self.gateway.generate(
            "personas_from_literature",
            {
                "persona": self.meta_persona.to_prompt_text(),
                "summary": summary.to_prompt_text(),
            },
        )
        return self._vet_personas(payload.value, history)

    # -- scenario 3: from author profiles ------------------------------------

    def personas_from_authors(self, papers: Sequence[PaperRecord]) -> list[PersonaProfile]:
        """One persona per qualifying first author of the seed papers.

        Authors are considered in descending seed-paper citation order and
        capped; per author, papers with centroid similarity >= threshold
        qualify and the top three are summarized into a persona.
        """
        if self.scholar is None or self.embedder is None:
            raise PreconditionError("author profiling needs a scholar client and an embedder")
        seed_authors: dict[str, int] = {}
        for paper in papers:
            if not paper.authors:
                continue
            first = paper.authors[0]
            if not first.author_id:
                continue
            best = seed_authors.get(first.author_id, -1)
            seed_authors[first.author_id] = max(best, paper.citation_count)
        if not seed_authors:
            raise PreconditionError("no seed paper carries a first-author id")
        ordered = sorted(seed_authors.items(), key=lambda kv: (-kv[1], kv[0]))
        selected_authors = [author_id for author_id, _count in ordered[: self.max_authors]]

        centroid = np.mean([self.embedder.embed(p.embedding_text()) for p in papers], axis=0)
        profiles: list[PersonaProfile] = []
        for author_id in selected_authors:
            candidates = self.scholar.author_papers(author_id, limit=self.author_paper_limit)
            top = self.select_author_papers(candidates, centroid)
            if not top:
                continue
            try:
                summary = self.summarize_literature(top)
            except NoAbstracts:
                continue
            # The literature prompt carries no history, so the same name can
            # come back for two authors; keep the first fresh one per batch.
            taken = {p.persona_name.casefold() for p in profiles}
            for candidate in self.personas_from_literature(summary):
                if candidate.persona_name.casefold() not in taken:
                    profiles.append(candidate)
                    break
        return profiles

    def select_author_papers(self, candidates: Sequence[PaperRecord], centroid: np.ndarray) -> list[PaperRecord]:
        """Qualifying papers (similarity >= threshold), top-n, ties by paper id."""
        scored = []
        for paper in candidates:
            score = cosine(self.embedder.embed(paper.embedding_text()), centroid)
            if score >= self.author_similarity_threshold:
                scored.append((score, paper))
        scored.sort(key=lambda pair: (-pair[0], pair[1].paper_id))
        return [paper for _score, paper in scored[: self.author_top_papers]]

    # -- critiques ------------------------------------------------------------

    def generate_critiques(self, persona: PersonaProfile, rq: str, lits: str = "") -> list[Critique]:
        persona.validate()
        if not rq.strip():
            raise PreconditionError("rq must be nonempty")
        payload = self.gateway.generate(
            "critiques",
            {"persona": persona.to_prompt_text(), "rq": rq, "lits": lits},
        )
        return [critique.validate() for critique in payload.value]

    # -- customization ----------------------------------------------------------

    def apply_customization(
        self,
        profile: PersonaProfile,
        edits: Sequence[TraitEdit],
        store=None,
        flow_id: str | None = None,
        node_id: str | None = None,
    ) -> tuple[PersonaProfile, list[EditEvent]]:
        """Apply trait operations, yielding a new profile plus one EditEvent each.

        With a flow store, events route through the store (the node payload
        is updated in place); otherwise detached events are returned.
        """
        updated = PersonaProfile.from_dict(profile.to_dict())
        events: list[EditEvent] = []
        for edit in edits:
            if edit.category not in ("role", "background"):
                raise PreconditionError(f"unknown trait category {edit.category!r}")
            field_name = f"{edit.category}_fields"
            traits = getattr(updated, field_name)
            if edit.op == "add":
                if edit.trait in traits:
                    raise PreconditionError(f"trait {edit.trait!r} already exists; use modify")
                if not isinstance(edit.value, str) or not edit.value.strip():
                    raise PreconditionError("add needs a nonempty value")
                old, new = None, edit.value
                traits[edit.trait] = edit.value
            elif edit.op == "modify":
                if edit.trait not in traits:
                    raise UnknownTrait(f"no {edit.category} trait {edit.trait!r}")
                if not isinstance(edit.value, str) or not edit.value.strip():
                    raise PreconditionError("modify needs a nonempty value")
                old, new = traits[edit.trait], edit.value
                traits[edit.trait] = edit.value
            elif edit.op == "remove":
                if edit.trait not in traits:
                    raise UnknownTrait(f"no {edit.category} trait {edit.trait!r}")
                old, new = traits.pop(edit.trait), None
            else:
                raise PreconditionError(f"unknown trait operation {edit.op!r}")
            field_path = f"persona.{field_name}.{edit.trait}"
            if store is not None:
                if flow_id is None or node_id is None:
                    raise PreconditionError("routing edits needs flow_id and node_id")
                events.append(store.edit_node(flow_id, node_id, field_path, new))
            else:
                events.append(
                    EditEvent(
                        node=node_id or "",
                        field_path=field_path,
                        old_value=value_as_text(old),
                        new_value=value_as_text(new),
                        timestamp=self.clock(),
                    )
                )
        updated.validate()
        return updated, events

    # -- shared vetting -----------------------------------------------------------

    def _vet_personas(
        self, profiles: list[PersonaProfile], history: Sequence[PersonaProfile]
    ) -> list[PersonaProfile]:
        taken = {p.persona_name.casefold() for p in history}
        for profile in profiles:
            profile.validate()
            check_persona_name(profile.persona_name)
            key = profile.persona_name.casefold()
            if key in taken:
                raise ContractViolation(f"persona name {profile.persona_name!r} repeats an existing name")
            taken.add(key)
        return profiles
