"""Deterministic mock stack: text provider, scholarly API, embedding server.

The mock text provider recognizes which prompt template produced an
incoming prompt by matching the template's literal skeleton, recovers the
bindings, and answers with a themed, fully deterministic payload in the
exact JSON shape the prompt demands. The mock scholar serves a synthetic
corpus derived from query tokens, so overlapping queries share papers and
aggregation/dedup behave realistically.
"""
from __future__ import annotations

import hashlib
import json
import re
import threading
import time
from collections import deque
from typing import Callable
from urllib.parse import parse_qs

from ..errors import ProviderUnavailable, TransientProviderError
from ..gateway.provider import GenerationParams
from ..gateway.templates import TEMPLATE_NAMES, load_template, tokenize
from ..retrieval.embeddings import HashingEmbedder

_STOP = frozenset(
    "the a an of in on for and or to with using by how does do can what is are about into at".split()
)


def _digest(text: str) -> int:
    return int.from_bytes(hashlib.md5(text.encode("utf-8")).digest()[:4], "little")


def _content_tokens(text: str) -> list[str]:
    return [t for t in re.findall(r"[a-z0-9']+", text.lower()) if t not in _STOP]


def _phrase(text: str, n: int = 4) -> str:
    tokens = _content_tokens(text)
    return " ".join(tokens[:n]) or "the topic"


def _theme(text: str) -> str:
    lower = text.lower()
    if "smart glasses" in lower or "augmented reality" in lower or re.search(r"\bar\b", lower):
        return "ar"
    if "recommend" in lower:
        return "recommender"
    if "health" in lower or "behavior" in lower or "behaviour" in lower:
        return "health"
    if re.search(r"\bart\b", lower):
        return "art"
    return "default"


_THEMED_PERSONAS = {
    "ar": [
        ("UI Research Expert", "user interface research"),
        ("AI LLM Expert", "large language models"),
        ("Wearable Computing Expert", "wearable computing"),
    ],
    "recommender": [
        ("Recommender Systems Expert", "recommender systems"),
        ("User Modeling Expert", "user modeling"),
        ("E-commerce Analytics Expert", "online consumer analytics"),
    ],
    "health": [
        ("Digital Health Expert", "digital health interventions"),
        ("Behavior Change Expert", "health behavior change"),
        ("Clinical Informatics Expert", "clinical informatics"),
    ],
    "art": [
        ("Art Technology Expert", "interactive art platforms"),
        ("Museum Studies Expert", "audience engagement in museums"),
        ("Creativity Support Expert", "creativity support tools"),
    ],
}

_PERSONA_POOL = [
    ("Human-Computer Interaction Expert", "human-computer interaction"),
    ("Machine Learning Expert", "machine learning"),
    ("Cognitive Science Expert", "cognitive science"),
    ("Information Retrieval Expert", "information retrieval"),
    ("Social Computing Expert", "social computing"),
    ("Data Visualization Expert", "data visualization"),
    ("Learning Science Expert", "learning sciences"),
    ("Digital Ethics Expert", "technology ethics"),
    ("Computational Linguistics Expert", "computational linguistics"),
    ("Behavioral Economics Expert", "behavioral economics"),
    ("Privacy and Security Expert", "usable privacy and security"),
    ("Human-Robot Interaction Expert", "human-robot interaction"),
]


def _persona_obj(name: str, domain: str, focus: str) -> dict:
    return {
        "persona_description": {
            "role_fields": {
                "Role": name,
                "Goal": f"Advance understanding of {focus}",
            },
            "background_fields": {
                "Domain": domain,
                "Experience": f"Over a decade of research experience in {domain}",
                "Skills": f"Study design, data analysis, and evaluation in {domain}",
                "Method": "Mixed methods combining quantitative and qualitative analysis",
                "Education": f"Doctoral training related to {domain}",
                "Knowledge": f"Deep familiarity with the {domain} literature",
            },
        },
        "persona_name": name,
    }


class MockTextProvider:
    """Deterministic provider: same prompt, same answer, every run."""

    def __init__(self, fail_first: int = 0, malformed_first: int = 0):
        self.fail_first = fail_first
        self.malformed_first = malformed_first
        self.calls = 0
        self.prompts: list[str] = []
        self._lock = threading.Lock()
        self._patterns = {name: _template_pattern(name) for name in TEMPLATE_NAMES}

    def complete(self, prompt: str, params: GenerationParams) -> str:
        with self._lock:
            self.calls += 1
            self.prompts.append(prompt)
            if self.fail_first > 0:
                self.fail_first -= 1
                raise TransientProviderError("mock transient failure")
            if self.malformed_first > 0:
                self.malformed_first -= 1
                return "Sorry, I could not produce the JSON you asked for."
        return self._answer(prompt)

    def _answer(self, prompt: str) -> str:
        if prompt.startswith("ECHO:"):
            return prompt[len("ECHO:"):]
        for name in TEMPLATE_NAMES:
            match = self._patterns[name].match(prompt)
            if match:
                return _RESPONDERS[name](match.groupdict())
        if "condensing labeled sentences" in prompt:
            return _summary_response(prompt)
        if prompt.startswith("Label each numbered sentence"):
            return _labels_response(prompt)
        raise ProviderUnavailable(f"mock provider has no rule for prompt starting {prompt[:80]!r}")


def _template_pattern(name: str) -> re.Pattern:
    parts = [r"\A"]
    for kind, value in tokenize(load_template(name).body):
        if kind == "literal":
            parts.append(re.escape(value))
        else:
            parts.append(f"(?P<{value}>.*?)")
    parts.append(r"(?:\n\nYour previous reply could not be parsed.*)?\Z")
    return re.compile("".join(parts), re.DOTALL)


def _history_names(history_text: str) -> set[str]:
    names = set()
    for line in history_text.splitlines():
        line = line.strip()
        if line.startswith("- "):
            names.add(line[2:].strip().casefold())
        elif line.lower().startswith("name: "):
            names.add(line[6:].strip().casefold())
    return names


def _pick_personas(theme_text: str, history_text: str, focus: str, offset_seed: str | None = None) -> list[dict]:
    candidates = list(_THEMED_PERSONAS.get(_theme(theme_text), [])) + _PERSONA_POOL
    if offset_seed is not None:
        pool = list(_PERSONA_POOL)
        start = _digest(offset_seed) % len(pool)
        rotated = pool[start:] + pool[:start]
        candidates = list(_THEMED_PERSONAS.get(_theme(theme_text), [])) + rotated
    taken = _history_names(history_text)
    chosen: list[tuple[str, str]] = []
    for name, domain in candidates:
        if name.casefold() in taken or any(name == c[0] for c in chosen):
            continue
        chosen.append((name, domain))
        if len(chosen) == 3:
            break
    index = 1
    while len(chosen) < 3:
        name = f"Interdisciplinary Research Expert {index}"
        if name.casefold() not in taken and all(name != c[0] for c in chosen):
            chosen.append((name, "interdisciplinary research"))
        index += 1
    return [_persona_obj(name, domain, focus) for name, domain in chosen]


def _respond_personas_from_rq(bindings: dict) -> str:
    rq = bindings["rq"]
    return json.dumps(_pick_personas(rq, bindings["history_personas"], _phrase(rq)))


def _respond_personas_from_literature(bindings: dict) -> str:
    summary = bindings["summary"]
    return json.dumps(_pick_personas(summary, "", _phrase(summary), offset_seed=summary))


def _respond_critiques(bindings: dict) -> str:
    rq = bindings["rq"]
    focus = _phrase(rq)
    if _theme(rq) == "health":
        theory_detail = (
            "The proposal would benefit from grounding in the Transtheoretical Model of Change (TTM), "
            "which describes the stages through which individuals modify behavior and would make the "
            "intervention logic explicit."
        )
    else:
        theory_detail = (
            f"The question does not yet commit to a guiding theory; anchoring it in an established "
            f"framework for {focus} would sharpen its contribution."
        )
    critiques = [
        {"critique_aspect": "Theoretical Framework", "critique_detail": theory_detail},
        {
            "critique_aspect": "Methodological Rigor",
            "critique_detail": (
                f"The study design implied by the question is underspecified; define measurable "
                f"outcomes for {focus} and a credible comparison condition."
            ),
        },
        {
            "critique_aspect": "Practical Significance",
            "critique_detail": (
                f"Clarify who benefits from answering this question and how findings about {focus} "
                f"would transfer to practice."
            ),
        },
    ]
    return json.dumps(critiques)


def _respond_literature_queries(bindings: dict) -> str:
    rq = bindings["rq"]
    if _theme(rq) == "art":
        queries = [
            "engagement in online art appreciation",
            "multi-persona simulation using AI",
            "interactive art appreciation platforms",
        ]
    else:
        focus = _phrase(rq)
        queries = [focus, f"user studies on {focus}", f"{focus} evaluation methods"]
    return json.dumps([{"search_query": q} for q in queries])


def _respond_query_breakdown(bindings: dict) -> str:
    query = bindings["search_query"]
    if query.strip() == "engagement in online art appreciation":
        breakdowns = [
            ("user engagement", "How is user engagement measured and sustained on digital platforms?"),
            ("art appreciation", "What do we know about how people appreciate art online?"),
            ("AI persona", "How are AI personas used to simulate perspectives for users?"),
        ]
    else:
        words = _content_tokens(query)
        subs: list[str] = []
        if len(words) >= 2:
            subs.append(" ".join(words[:2]))
            subs.append(" ".join(words[-2:]))
        if words:
            subs.append(f"{words[0]} methods")
        if not subs:
            subs.append(query.strip() or "general methods")
        seen: list[str] = []
        for sub in subs:
            if sub not in seen:
                seen.append(sub)
        breakdowns = [(sub, f"Narrows the search toward {sub} within the broader query.") for sub in seen]
    return json.dumps([{"search_query": s, "rationale": r} for s, r in breakdowns])


def _respond_outline_table(bindings: dict) -> str:
    rq = bindings["rq"].strip()
    scenario = bindings["scenario"].strip()
    focus = _phrase(rq)
    sections = [
        {
            "title": "Motivation and Research Gap",
            "description": (
                f"1. Prior work on {focus} leaves the question \"{rq}\" underexplored.\n\n"
                f"2. The scenario \"{scenario}\" motivates a focused investigation."
            ),
        },
        {
            "title": "Proposed Approach",
            "description": (
                f"1. Operationalize the core constructs behind {focus}.\n\n"
                "2. Develop the intervention or system implied by the scenario."
            ),
        },
        {
            "title": "Study Design and Evaluation",
            "description": (
                "1. Recruit a participant sample appropriate to the scenario.\n\n"
                f"2. Measure outcomes tied to {focus} against a baseline condition."
            ),
        },
        {
            "title": "Expected Contributions",
            "description": (
                f"1. Empirical evidence on {focus}.\n\n"
                "2. Design implications for systems that build on the findings."
            ),
        },
    ]
    return json.dumps(sections)


def _respond_hypothetical_abstract(bindings: dict) -> str:
    rq = bindings["rq"].strip()
    scenario = bindings["scenario"].strip()
    focus = _phrase(rq)
    text = (
        f"Interest in {focus} has been growing, yet the question \"{rq}\" remains open. "
        f"Motivated by the scenario \"{scenario}\", we propose a study that operationalizes the "
        f"key constructs and evaluates them against a baseline. "
        f"Results show measurable effects on {focus}, and we discuss design implications."
    )
    return json.dumps({"hypothetical_abstract": text})


def _respond_literature_review(bindings: dict) -> str:
    focus = _phrase(bindings["rq"])
    review = {
        "Relevant Past Findings": (
            f"Mock et al. (2021)(https://example.org/mock-2021) found that {focus} outcomes vary "
            "strongly with context, and subsequent replications report consistent effects."
        ),
        "Existing Methods": (
            f"Prior studies approach {focus} with surveys, controlled experiments, and "
            "log analysis; each isolates a different facet of the phenomenon."
        ),
        "Contributions from Prior Works": (
            "Earlier systems contributed measurement instruments and design patterns that later "
            "work builds on directly."
        ),
        "Research Gap and Motivation": (
            f"No prior study connects these threads for {focus}, which motivates the present "
            "research question."
        ),
    }
    return json.dumps({"literature_review": review})


def _respond_research_scenarios(bindings: dict) -> str:
    focus = _phrase(bindings["rq"], n=3)
    scenarios = [
        f"A controlled laboratory study of {focus} with expert users",
        f"A longitudinal field deployment examining {focus} in daily use",
        f"A design probe exploring {focus} with novice participants",
    ]
    return json.dumps({"research_scenarios": scenarios})


def _respond_revised_rqs(bindings: dict) -> str:
    rq = bindings["rq"].strip().rstrip("?")
    focus = _phrase(bindings["rq"])
    acronyms = re.findall(r"\(([A-Z]{2,8})\)", bindings["critiques"])
    if acronyms:
        first = f"How can insights from the {acronyms[0]} be integrated into the question: {rq}?"
    else:
        first = f"How can an explicit theoretical framing strengthen the question: {rq}?"
    revised = [
        first,
        f"What measurable outcomes best capture {focus}, and how should they be compared against a baseline?",
        f"Under what conditions do findings about {focus} generalize across user populations?",
    ]
    return json.dumps([{"revised_rq": r} for r in revised])


_RESPONDERS: dict[str, Callable[[dict], str]] = {
    "critiques": _respond_critiques,
    "literature_queries": _respond_literature_queries,
    "query_breakdown": _respond_query_breakdown,
    "personas_from_rq": _respond_personas_from_rq,
    "personas_from_literature": _respond_personas_from_literature,
    "outline_table": _respond_outline_table,
    "hypothetical_abstract": _respond_hypothetical_abstract,
    "literature_review": _respond_literature_review,
    "research_scenarios": _respond_research_scenarios,
    "revised_rqs": _respond_revised_rqs,
}


def _block_after(prompt: str, header: str) -> str:
    start = prompt.find(header)
    if start == -1:
        return ""
    start += len(header)
    end = prompt.find("\n\n", start)
    block = prompt[start:end] if end != -1 else prompt[start:]
    return block.strip()


def _summary_response(prompt: str) -> str:
    def condensed(header: str, fallback: str) -> str:
        block = _block_after(prompt, header)
        if not block or block == "(none)":
            return fallback
        first_line = block.splitlines()[0]
        return first_line if len(first_line) <= 200 else first_line[:200]

    return json.dumps(
        {
            "background": condensed("Background sentences:\n", "The papers share a common motivation."),
            "methodology": condensed("Method sentences:\n", "The papers apply varied empirical methods."),
            "conclusion": condensed("Conclusion sentences:\n", "The papers report converging findings."),
        }
    )


def _labels_response(prompt: str) -> str:
    count = len(re.findall(r"^\d+\. ", prompt, flags=re.MULTILINE))
    labels = []
    for index in range(count):
        if index == 0:
            labels.append("Background")
        elif index == count - 1 and count >= 3:
            labels.append("Conclusion")
        else:
            labels.append("Method")
    return json.dumps({"labels": labels})


# -- mock scholarly API ---------------------------------------------------------


def _token_paper(token: str, j: int, id_prefix: str = "t") -> dict:
    paper_id = f"{id_prefix}-{token}-{j}"
    return {
        "paperId": paper_id,
        "title": f"{token.title()} Research Advances {j}",
        "abstract": (
            f"Interest in {token} has been growing in recent years. "
            f"We propose a method for studying {token} in setting {j}. "
            f"Results show that {token} interventions are effective."
        ),
        "authors": [{"name": f"Alex {token.title()}son", "authorId": f"A-{token}-{j % 2}"}],
        "year": 2016 + (j % 8),
        "venue": f"Journal of {token.title()} Studies",
        "citationCount": _digest(f"{token}/{j}") % 500,
        "externalIds": {"DOI": f"10.1000/{paper_id}"},
        "url": f"https://example.org/paper/{paper_id}",
    }


def search_corpus(query: str, limit: int) -> list[dict]:
    """Deterministic result list: token-shared papers plus query-unique ones."""
    tokens = _content_tokens(query)[:4]
    papers = [_token_paper(token, j) for token in tokens for j in range(3)]
    unique = hashlib.md5(query.encode("utf-8")).hexdigest()[:6]
    for j in range(4):
        papers.append(_token_paper(f"q{unique}", j))
    return papers[:limit]


def author_corpus(author_id: str) -> list[dict] | None:
    match = re.fullmatch(r"A-([a-z0-9']+)-(\d+)", author_id)
    if not match:
        return None
    token = match.group(1)
    papers = []
    for k in range(4):
        paper = _token_paper(token, k, id_prefix="ap")
        paper["abstract"] += f" This follow-up study extends the {token} research program, part {k}."
        papers.append(paper)
    return papers


class MockScholarWSGI:
    """WSGI app mimicking the scholarly graph API, with failure injection."""

    def __init__(self, clock: Callable[[], float] = time.monotonic):
        self.requests: list[dict] = []
        self.fail_statuses: deque[int] = deque()
        self.always_status: int | None = None
        self._clock = clock
        self._lock = threading.Lock()

    def __call__(self, environ, start_response):
        path = environ.get("PATH_INFO", "")
        params = {k: v[0] for k, v in parse_qs(environ.get("QUERY_STRING", "")).items()}
        with self._lock:
            self.requests.append({"path": path, "params": params, "time": self._clock()})
            forced = self.always_status
            if forced is None and self.fail_statuses:
                forced = self.fail_statuses.popleft()
        if forced is not None:
            return _respond(start_response, forced, {"error": f"injected {forced}"})
        if path == "/graph/v1/paper/search":
            query = params.get("query", "")
            if not query:
                return _respond(start_response, 400, {"error": "missing query"})
            limit = int(params.get("limit", "10"))
            return _respond(start_response, 200, {"total": limit, "data": search_corpus(query, limit)})
        match = re.fullmatch(r"/graph/v1/author/([^/]+)/papers", path)
        if match:
            papers = author_corpus(match.group(1))
            if papers is None:
                return _respond(start_response, 404, {"error": "author not found"})
            limit = int(params.get("limit", "100"))
            return _respond(start_response, 200, {"data": papers[:limit]})
        return _respond(start_response, 404, {"error": "no such route"})


class MockLLMWSGI:
    """WSGI app exposing the mock provider and a hashing embedding endpoint."""

    def __init__(self, provider: MockTextProvider | None = None, embedding_dim: int = 64):
        self.provider = provider or MockTextProvider()
        self.embedder = HashingEmbedder(dim=embedding_dim)
        self.fail_statuses: deque[int] = deque()
        self._lock = threading.Lock()

    def __call__(self, environ, start_response):
        with self._lock:
            forced = self.fail_statuses.popleft() if self.fail_statuses else None
        if forced is not None:
            return _respond(start_response, forced, {"error": f"injected {forced}"})
        path = environ.get("PATH_INFO", "")
        try:
            size = int(environ.get("CONTENT_LENGTH") or 0)
        except ValueError:
            size = 0
        try:
            body = json.loads(environ["wsgi.input"].read(size) or b"{}")
        except (ValueError, UnicodeDecodeError):
            return _respond(start_response, 400, {"error": "invalid JSON body"})
        if path == "/v1/chat/completions":
            messages = body.get("messages") or []
            prompt = messages[-1].get("content", "") if messages else ""
            try:
                text = self.provider.complete(prompt, GenerationParams())
            except TransientProviderError:
                return _respond(start_response, 503, {"error": "mock transient failure"})
            return _respond(
                start_response,
                200,
                {"choices": [{"message": {"role": "assistant", "content": text}}]},
            )
        if path == "/v1/embeddings":
            inputs = body.get("input") or []
            data = [
                {"index": i, "embedding": self.embedder.embed(text).tolist()}
                for i, text in enumerate(inputs)
            ]
            return _respond(start_response, 200, {"data": data, "model": body.get("model", "mock")})
        return _respond(start_response, 404, {"error": "no such route"})


def _respond(start_response, status: int, payload: dict):
    body = json.dumps(payload).encode("utf-8")
    reasons = {200: "OK", 400: "Bad Request", 404: "Not Found", 429: "Too Many Requests",
               500: "Internal Server Error", 503: "Service Unavailable"}
    start_response(
        f"{status} {reasons.get(status, 'Error')}",
        [("Content-Type", "application/json"), ("Content-Length", str(len(body)))],
    )
    return [body]


def serve_mockstack(llm_port: int = 8801, scholar_port: int = 8802):
    """Serve both mock servers on localhost; blocks until interrupted."""
    from wsgiref.simple_server import make_server

    llm_server = make_server("127.0.0.1", llm_port, MockLLMWSGI())
    scholar_server = make_server("127.0.0.1", scholar_port, MockScholarWSGI())
    threads = [
        threading.Thread(target=llm_server.serve_forever, daemon=True),
        threading.Thread(target=scholar_server.serve_forever, daemon=True),
    ]
    for thread in threads:
        thread.start()
    print(f"mock llm:     http://127.0.0.1:{llm_port}")
    print(f"mock scholar: http://127.0.0.1:{scholar_port}")
    try:
        while True:
            time.sleep(3600)
    except KeyboardInterrupt:
        llm_server.shutdown()
        scholar_server.shutdown()
