"""Strict parsing of generation payloads.

Every prompt demands bare JSON, but real model output arrives wrapped in
prose or code fences, so extraction is lenient while key/arity validation
is strict: exact key sets, exact counts where the prompt fixes a count.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Any, Callable

from ..errors import ArityViolation, MalformedPayload, PreconditionError, SchemaViolation
from ..models import (
    REVIEW_WIRE_KEYS,
    Critique,
    LiteratureReview,
    OutlineSection,
    PersonaProfile,
    QueryBreakdown,
    ScenarioSuggestion,
    SearchQuery,
)

PAYLOAD_KINDS = (
    "CritiqueList",
    "QueryList",
    "BreakdownList",
    "PersonaList",
    "OutlineTable",
    "AbstractPayload",
    "ReviewPayload",
    "ScenarioPayload",
    "RQList",
)

# Which payload each template's output parses into.
TEMPLATE_PAYLOAD_KIND = {
    "critiques": "CritiqueList",
    "literature_queries": "QueryList",
    "query_breakdown": "BreakdownList",
    "personas_from_rq": "PersonaList",
    "personas_from_literature": "PersonaList",
    "outline_table": "OutlineTable",
    "hypothetical_abstract": "AbstractPayload",
    "literature_review": "ReviewPayload",
    "research_scenarios": "ScenarioPayload",
    "revised_rqs": "RQList",
}


@dataclass(frozen=True)
class ParsedPayload:
    kind: str
    value: Any


_FENCE = re.compile(r"```[A-Za-z0-9_-]*[ \t]*\r?\n(.*?)```", re.DOTALL)


def extract_json(raw: str) -> Any:
    """Pull the first JSON value out of possibly prose-wrapped text."""
    stripped = raw.strip()
    if stripped:
        try:
            return json.loads(stripped)
        except json.JSONDecodeError:
            pass
    for block in _FENCE.findall(raw):
        try:
            return json.loads(block.strip())
        except json.JSONDecodeError:
            continue
    decoder = json.JSONDecoder()
    for i, ch in enumerate(raw):
        if ch in "[{":
            try:
                value, _end = decoder.raw_decode(raw, i)
            except json.JSONDecodeError:
                continue
            return value
    raise MalformedPayload("no JSON value found in provider output")


def _text(value: Any, where: str) -> str:
    if not isinstance(value, str):
        raise SchemaViolation(f"{where} must be a string, got {type(value).__name__}")
    return value


def _obj(value: Any, where: str, keys: tuple[str, ...]) -> dict:
    if not isinstance(value, dict):
        raise SchemaViolation(f"{where} must be an object, got {type(value).__name__}")
    got = set(value)
    expected = set(keys)
    if got != expected:
        missing = sorted(expected - got)
        extra = sorted(got - expected)
        detail = []
        if missing:
            detail.append(f"missing keys {missing}")
        if extra:
            detail.append(f"unexpected keys {extra}")
        raise SchemaViolation(f"{where}: {', '.join(detail)}")
    return value


def _items(value: Any, kind: str, exact: int | None, minimum: int = 1) -> list:
    if not isinstance(value, list):
        raise SchemaViolation(f"{kind} payload must be a JSON array, got {type(value).__name__}")
    if exact is not None and len(value) != exact:
        raise ArityViolation(f"{kind} must contain exactly {exact} items, got {len(value)}")
    if len(value) < minimum:
        raise ArityViolation(f"{kind} must contain at least {minimum} items, got {len(value)}")
    return value


def _trait_map(value: Any, where: str) -> dict[str, str]:
    if not isinstance(value, dict):
        raise SchemaViolation(f"{where} must be an object, got {type(value).__name__}")
    out: dict[str, str] = {}
    for trait, text in value.items():
        out[_text(trait, f"{where} trait name")] = _text(text, f"{where}[{trait!r}]")
    return out


def _parse_critiques(data: Any) -> list[Critique]:
    items = _items(data, "CritiqueList", exact=3)
    out = []
    for i, item in enumerate(items):
        obj = _obj(item, f"critique[{i}]", ("critique_aspect", "critique_detail"))
        out.append(
            Critique(
                critique_aspect=_text(obj["critique_aspect"], f"critique[{i}].critique_aspect"),
                critique_detail=_text(obj["critique_detail"], f"critique[{i}].critique_detail"),
            )
        )
    return out


def _parse_queries(data: Any) -> list[SearchQuery]:
    items = _items(data, "QueryList", exact=3)
    out = []
    for i, item in enumerate(items):
        obj = _obj(item, f"query[{i}]", ("search_query",))
        out.append(SearchQuery(_text(obj["search_query"], f"query[{i}].search_query")))
    return out


def _parse_breakdowns(data: Any) -> list[QueryBreakdown]:
    items = _items(data, "BreakdownList", exact=None, minimum=1)
    out = []
    for i, item in enumerate(items):
        obj = _obj(item, f"breakdown[{i}]", ("search_query", "rationale"))
        out.append(
            QueryBreakdown(
                search_query=_text(obj["search_query"], f"breakdown[{i}].search_query"),
                rationale=_text(obj["rationale"], f"breakdown[{i}].rationale"),
            )
        )
    return out


def _parse_personas(data: Any) -> list[PersonaProfile]:
    items = _items(data, "PersonaList", exact=3)
    out = []
    for i, item in enumerate(items):
        obj = _obj(item, f"persona[{i}]", ("persona_description", "persona_name"))
        desc = _obj(obj["persona_description"], f"persona[{i}].persona_description", ("role_fields", "background_fields"))
        profile = PersonaProfile(
            persona_name=_text(obj["persona_name"], f"persona[{i}].persona_name"),
            role_fields=_trait_map(desc["role_fields"], f"persona[{i}].role_fields"),
            background_fields=_trait_map(desc["background_fields"], f"persona[{i}].background_fields"),
        )
        try:
            profile.validate()
        except PreconditionError as exc:
            raise SchemaViolation(f"persona[{i}]: {exc}") from exc
        out.append(profile)
    return out


def _parse_outline(data: Any) -> list[OutlineSection]:
    items = _items(data, "OutlineTable", exact=None, minimum=1)
    out = []
    for i, item in enumerate(items):
        obj = _obj(item, f"section[{i}]", ("title", "description"))
        out.append(
            OutlineSection(
                title=_text(obj["title"], f"section[{i}].title"),
                description=_text(obj["description"], f"section[{i}].description"),
            )
        )
    return out


def _parse_abstract(data: Any) -> str:
    obj = _obj(data, "abstract payload", ("hypothetical_abstract",))
    return _text(obj["hypothetical_abstract"], "hypothetical_abstract")


def _parse_review(data: Any) -> LiteratureReview:
    obj = _obj(data, "review payload", ("literature_review",))
    inner = _obj(obj["literature_review"], "literature_review", REVIEW_WIRE_KEYS)
    return LiteratureReview.from_wire_dict(
        {key: _text(inner[key], f"literature_review[{key!r}]") for key in REVIEW_WIRE_KEYS}
    )


def _parse_scenarios(data: Any) -> list[ScenarioSuggestion]:
    obj = _obj(data, "scenario payload", ("research_scenarios",))
    items = _items(obj["research_scenarios"], "ScenarioPayload", exact=3)
    return [ScenarioSuggestion(_text(s, f"research_scenarios[{i}]")) for i, s in enumerate(items)]


def _parse_rqs(data: Any) -> list[str]:
    items = _items(data, "RQList", exact=3)
    out = []
    for i, item in enumerate(items):
        obj = _obj(item, f"revised_rq[{i}]", ("revised_rq",))
        out.append(_text(obj["revised_rq"], f"revised_rq[{i}].revised_rq"))
    return out


_PARSERS: dict[str, Callable[[Any], Any]] = {
    "CritiqueList": _parse_critiques,
    "QueryList": _parse_queries,
    "BreakdownList": _parse_breakdowns,
    "PersonaList": _parse_personas,
    "OutlineTable": _parse_outline,
    "AbstractPayload": _parse_abstract,
    "ReviewPayload": _parse_review,
    "ScenarioPayload": _parse_scenarios,
    "RQList": _parse_rqs,
}


def parse_payload(raw: str, expected: str) -> ParsedPayload:
    """Extract JSON from raw provider text and validate it as `expected`."""
    if expected not in _PARSERS:
        raise PreconditionError(f"unknown payload kind {expected!r}")
    data = extract_json(raw)
    return ParsedPayload(kind=expected, value=_PARSERS[expected](data))


def parse_json_object(raw: str, keys: tuple[str, ...]) -> dict[str, str]:
    """Parse an ad-hoc single-object payload with a fixed string-valued key set."""
    obj = _obj(extract_json(raw), "payload", keys)
    return {key: _text(obj[key], f"payload[{key!r}]") for key in keys}


def serialize_payload(payload: ParsedPayload) -> str:
    """Render a payload back to the exact JSON shape its prompt demands."""
    kind, value = payload.kind, payload.value
    if kind == "CritiqueList":
        data: Any = [c.to_dict() for c in value]
    elif kind == "QueryList":
        data = [{"search_query": q.text} for q in value]
    elif kind == "BreakdownList":
        data = [{"search_query": b.search_query, "rationale": b.rationale} for b in value]
    elif kind == "PersonaList":
        data = [
            {
                "persona_description": {
                    "role_fields": dict(p.role_fields),
                    "background_fields": dict(p.background_fields),
                },
                "persona_name": p.persona_name,
            }
            for p in value
        ]
    elif kind == "OutlineTable":
        data = [s.to_dict() for s in value]
    elif kind == "AbstractPayload":
        data = {"hypothetical_abstract": value}
    elif kind == "ReviewPayload":
        data = {"literature_review": value.to_wire_dict()}
    elif kind == "ScenarioPayload":
        data = {"research_scenarios": [s.text for s in value]}
    elif kind == "RQList":
        data = [{"revised_rq": rq} for rq in value]
    else:
        raise ValueError(f"unknown payload kind {kind!r}")
    return json.dumps(data, ensure_ascii=False)
