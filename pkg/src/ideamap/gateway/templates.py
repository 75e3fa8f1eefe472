"""Prompt template assets and the placeholder substitution engine.

Template bodies ship as text files under ``prompts/`` and must never be
edited in place; the generation contract depends on their exact bytes.
Placeholders are ``{name}`` tokens; literal braces are escaped ``{{`` ``}}``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Mapping

from ..errors import MissingBinding, TemplateError, UnknownPlaceholder

# Expected placeholder set per template; the loader enforces this so a
# corrupted asset fails fast instead of at render time.
TEMPLATE_PLACEHOLDERS: dict[str, frozenset[str]] = {
    "critiques": frozenset({"persona", "rq", "lits"}),
    "literature_queries": frozenset({"persona", "rq", "lits"}),
    "query_breakdown": frozenset({"persona", "rq", "search_query"}),
    "personas_from_rq": frozenset({"persona", "history_personas", "rq"}),
    "personas_from_literature": frozenset({"persona", "summary"}),
    "outline_table": frozenset({"persona", "context", "rq", "scenario", "critiqueNode", "literature"}),
    "hypothetical_abstract": frozenset(
        {"persona", "context", "rq", "scenario", "literature", "tableData", "critiqueNode"}
    ),
    "literature_review": frozenset({"context", "abstracts", "rq"}),
    "research_scenarios": frozenset({"context", "abstracts", "rq"}),
    "revised_rqs": frozenset({"persona", "context", "rq", "critiques"}),
}

TEMPLATE_NAMES = tuple(TEMPLATE_PLACEHOLDERS)

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class PromptTemplate:
    name: str
    body: str

    def placeholders(self) -> frozenset[str]:
        return frozenset(name for kind, name in tokenize(self.body) if kind == "placeholder")


def tokenize(body: str) -> list[tuple[str, str]]:
    """Split a template body into ("literal", text) / ("placeholder", name) tokens.

    Single-pass semantics: "{{" and "}}" are literal braces, "{name}" is a
    placeholder, anything else involving a bare brace is a template defect.
    """
    tokens: list[tuple[str, str]] = []
    buf: list[str] = []
    i = 0
    n = len(body)
    while i < n:
        ch = body[i]
        if ch == "{":
            if i + 1 < n and body[i + 1] == "{":
                buf.append("{")
                i += 2
                continue
            end = body.find("}", i + 1)
            if end == -1:
                raise TemplateError(f"unterminated placeholder at offset {i}")
            name = body[i + 1 : end]
            if not _IDENT.match(name):
                raise TemplateError(f"invalid placeholder {name!r} at offset {i}")
            if buf:
                tokens.append(("literal", "".join(buf)))
                buf = []
            tokens.append(("placeholder", name))
            i = end + 1
        elif ch == "}":
            if i + 1 < n and body[i + 1] == "}":
                buf.append("}")
                i += 2
                continue
            raise TemplateError(f"stray '}}' at offset {i}")
        else:
            buf.append(ch)
            i += 1
    if buf:
        tokens.append(("literal", "".join(buf)))
    return tokens


def render(template: PromptTemplate, bindings: Mapping[str, str]) -> str:
    """Substitute bindings into the template body.

    Values are inserted verbatim; braces inside a value are never
    re-expanded. Bindings must cover the placeholder set exactly.
    """
    tokens = tokenize(template.body)
    placeholders = {name for kind, name in tokens if kind == "placeholder"}
    missing = placeholders - set(bindings)
    if missing:
        raise MissingBinding(f"missing bindings for {sorted(missing)} in template {template.name!r}")
    extra = set(bindings) - placeholders
    if extra:
        raise UnknownPlaceholder(f"bindings {sorted(extra)} not in template {template.name!r}")
    out: list[str] = []
    for kind, value in tokens:
        if kind == "literal":
            out.append(value)
        else:
            bound = bindings[value]
            if not isinstance(bound, str):
                raise TemplateError(f"binding {value!r} must be text, got {type(bound).__name__}")
            out.append(bound)
    return "".join(out)


@lru_cache(maxsize=None)
def load_template(name: str) -> PromptTemplate:
    """Load a template asset by name, verifying its placeholder set."""
    if name not in TEMPLATE_PLACEHOLDERS:
        raise TemplateError(f"unknown template {name!r}; expected one of {sorted(TEMPLATE_PLACEHOLDERS)}")
    body = resources.files(__package__).joinpath("prompts", f"{name}.txt").read_text(encoding="utf-8")
    template = PromptTemplate(name=name, body=body)
    found = template.placeholders()
    expected = TEMPLATE_PLACEHOLDERS[name]
    if found != expected:
        raise TemplateError(
            f"template {name!r} asset has placeholders {sorted(found)}, expected {sorted(expected)}"
        )
    return template


def render_template(name: str, bindings: Mapping[str, str]) -> str:
    return render(load_template(name), bindings)
