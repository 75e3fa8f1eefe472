"""Domain records shared between the graph, generation, and retrieval layers.

These are plain value objects with `to_dict`/`from_dict` JSON mappings; the
wire key names follow the generation contracts exactly (snake_case keys for
our own documents, the prompt's verbatim key names where a record crosses
the LLM boundary).
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import PreconditionError

# Trait names the system itself generates; users may add arbitrary extras.
CANONICAL_ROLE_TRAITS = ("Role", "Goal", "Functional Role", "Social Identity", "Social Status")
CANONICAL_BACKGROUND_TRAITS = ("Domain", "Experience", "Skills", "Method", "Education", "Knowledge")


@dataclass
class PersonaProfile:
    """A simulated expert: a name plus ordered role/background trait maps."""

    persona_name: str
    role_fields: dict[str, str] = field(default_factory=dict)
    background_fields: dict[str, str] = field(default_factory=dict)
    user_instructions: str | None = None

    def validate(self) -> "PersonaProfile":
        if not self.persona_name.strip():
            raise PreconditionError("persona_name must be nonempty")
        if not self.role_fields and not self.background_fields:
            raise PreconditionError("persona needs at least one role or background trait")
        return self

    def to_prompt_text(self) -> str:
        """Human-readable rendering used for the {persona} prompt binding."""
        lines = [f"Name: {self.persona_name}"]
        for trait, value in self.role_fields.items():
            lines.append(f"{trait}: {value}")
        for trait, value in self.background_fields.items():
            lines.append(f"{trait}: {value}")
        if self.user_instructions:
            lines.append(f"User instructions: {self.user_instructions}")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        d = {
            "persona_name": self.persona_name,
            "role_fields": dict(self.role_fields),
            "background_fields": dict(self.background_fields),
        }
        if self.user_instructions is not None:
            d["user_instructions"] = self.user_instructions
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "PersonaProfile":
        return cls(
            persona_name=d["persona_name"],
            role_fields=dict(d.get("role_fields") or {}),
            background_fields=dict(d.get("background_fields") or {}),
            user_instructions=d.get("user_instructions"),
        )


@dataclass(frozen=True)
class Critique:
    critique_aspect: str
    critique_detail: str

    def validate(self) -> "Critique":
        if not self.critique_aspect.strip() or not self.critique_detail.strip():
            raise PreconditionError("critique aspect and detail must be nonempty")
        return self

    def to_dict(self) -> dict:
        return {"critique_aspect": self.critique_aspect, "critique_detail": self.critique_detail}

    @classmethod
    def from_dict(cls, d: dict) -> "Critique":
        return cls(d["critique_aspect"], d["critique_detail"])


@dataclass(frozen=True)
class PaperAuthor:
    name: str
    author_id: str | None = None

    def to_dict(self) -> dict:
        return {"name": self.name, "author_id": self.author_id}

    @classmethod
    def from_dict(cls, d: dict) -> "PaperAuthor":
        return cls(name=d.get("name", ""), author_id=d.get("author_id"))


#: Publication years outside this range are treated as data errors.
MIN_PLAUSIBLE_YEAR = 1800
MAX_PLAUSIBLE_YEAR = 2100


@dataclass
class PaperRecord:
    """Scholarly publication metadata as shown in literature panels."""

    paper_id: str
    title: str
    abstract: str | None = None
    authors: list[PaperAuthor] = field(default_factory=list)
    year: int | None = None
    venue: str = ""
    citation_count: int = 0
    url: str = ""

    def validate(self) -> "PaperRecord":
        if not self.paper_id:
            raise PreconditionError("paper_id must be nonempty")
        if self.year is not None and not (MIN_PLAUSIBLE_YEAR <= self.year <= MAX_PLAUSIBLE_YEAR):
            raise PreconditionError(f"implausible publication year {self.year}")
        if self.citation_count < 0:
            raise PreconditionError("citation_count must be >= 0")
        return self

    def embedding_text(self) -> str:
        """Text embedded for re-ranking: title, newline, abstract when present."""
        if self.abstract:
            return f"{self.title}\n{self.abstract}"
        return self.title

    def to_dict(self) -> dict:
        return {
            "paper_id": self.paper_id,
            "title": self.title,
            "abstract": self.abstract,
            "authors": [a.to_dict() for a in self.authors],
            "year": self.year,
            "venue": self.venue,
            "citation_count": self.citation_count,
            "url": self.url,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PaperRecord":
        return cls(
            paper_id=d["paper_id"],
            title=d.get("title", ""),
            abstract=d.get("abstract"),
            authors=[PaperAuthor.from_dict(a) for a in d.get("authors") or []],
            year=d.get("year"),
            venue=d.get("venue", ""),
            citation_count=int(d.get("citation_count") or 0),
            url=d.get("url", ""),
        )


@dataclass(frozen=True)
class RankedPaper:
    paper: PaperRecord
    score: float


@dataclass(frozen=True)
class SearchQuery:
    text: str

    def validate(self) -> "SearchQuery":
        if not self.text.strip():
            raise PreconditionError("search query must be nonempty")
        if "\n" in self.text:
            raise PreconditionError("search query must be a single line")
        return self


@dataclass(frozen=True)
class QueryBreakdown:
    search_query: str
    rationale: str

    def validate(self) -> "QueryBreakdown":
        if not self.search_query.strip() or not self.rationale.strip():
            raise PreconditionError("breakdown query and rationale must be nonempty")
        return self


SENTENCE_LABELS = ("Background", "Method", "Conclusion", "Other")


@dataclass(frozen=True)
class LabeledSentence:
    sentence: str
    label: str

    def validate(self) -> "LabeledSentence":
        if self.label not in SENTENCE_LABELS:
            raise PreconditionError(f"unknown sentence label {self.label!r}")
        return self


@dataclass
class LiteratureSummary:
    background: str = ""
    methodology: str = ""
    conclusion: str = ""
    source_paper_ids: list[str] = field(default_factory=list)

    def validate(self) -> "LiteratureSummary":
        if not (self.background or self.methodology or self.conclusion):
            raise PreconditionError("summary must have at least one nonempty field")
        return self

    def to_prompt_text(self) -> str:
        parts = []
        if self.background:
            parts.append(f"Background: {self.background}")
        if self.methodology:
            parts.append(f"Methodology: {self.methodology}")
        if self.conclusion:
            parts.append(f"Conclusion: {self.conclusion}")
        return "\n".join(parts)


@dataclass(frozen=True)
class OutlineSection:
    title: str
    description: str

    def to_dict(self) -> dict:
        return {"title": self.title, "description": self.description}

    @classmethod
    def from_dict(cls, d: dict) -> "OutlineSection":
        return cls(d["title"], d["description"])


# Exact key names the literature-review prompt demands, in prompt order.
REVIEW_WIRE_KEYS = (
    "Relevant Past Findings",
    "Existing Methods",
    "Contributions from Prior Works",
    "Research Gap and Motivation",
)


@dataclass(frozen=True)
class LiteratureReview:
    relevant_past_findings: str
    existing_methods: str
    contributions_from_prior_works: str
    research_gap_and_motivation: str

    def to_wire_dict(self) -> dict:
        return {
            "Relevant Past Findings": self.relevant_past_findings,
            "Existing Methods": self.existing_methods,
            "Contributions from Prior Works": self.contributions_from_prior_works,
            "Research Gap and Motivation": self.research_gap_and_motivation,
        }

    @classmethod
    def from_wire_dict(cls, d: dict) -> "LiteratureReview":
        return cls(
            relevant_past_findings=d["Relevant Past Findings"],
            existing_methods=d["Existing Methods"],
            contributions_from_prior_works=d["Contributions from Prior Works"],
            research_gap_and_motivation=d["Research Gap and Motivation"],
        )

    @classmethod
    def empty(cls) -> "LiteratureReview":
        return cls("", "", "", "")


SCENARIO_WORD_LIMIT = 20


@dataclass(frozen=True)
class ScenarioSuggestion:
    text: str

    @property
    def word_count(self) -> int:
        return len(self.text.split())


@dataclass
class OutlinePanelState:
    """The five panel sections, in their fixed display order."""

    research_question: str
    literature_review: LiteratureReview
    research_scenario: str
    outline_table: list[OutlineSection]
    expected_outcomes: str

    SECTION_ORDER = (
        "research_question",
        "literature_review",
        "research_scenario",
        "outline_table",
        "expected_outcomes",
    )

    def to_dict(self) -> dict:
        return {
            "research_question": self.research_question,
            "literature_review": self.literature_review.to_wire_dict(),
            "research_scenario": self.research_scenario,
            "outline_table": [s.to_dict() for s in self.outline_table],
            "expected_outcomes": self.expected_outcomes,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "OutlinePanelState":
        return cls(
            research_question=d["research_question"],
            literature_review=LiteratureReview.from_wire_dict(d["literature_review"]),
            research_scenario=d["research_scenario"],
            outline_table=[OutlineSection.from_dict(s) for s in d["outline_table"]],
            expected_outcomes=d["expected_outcomes"],
        )
