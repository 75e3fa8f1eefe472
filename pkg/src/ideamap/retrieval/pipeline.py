"""Two-stage persona-driven retrieval.

Stage one proposes three short queries and decomposes each into secondary
sub-queries; stage two fans the searches out, pools and dedups the results,
and re-ranks the pool by embedding similarity to the research question,
keeping the top k per topic.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from ..errors import IdeamapError, PreconditionError
from ..gateway.core import Gateway
from ..models import PaperRecord, PersonaProfile, QueryBreakdown, RankedPaper, SearchQuery
from .embeddings import Embedder, cosine
from .scholar import ScholarClient


def propose_queries(gateway: Gateway, persona: PersonaProfile, rq: str, lits: str = "") -> list[SearchQuery]:
    if not rq.strip():
        raise PreconditionError("rq must be nonempty")
    payload = gateway.generate(
        "literature_queries",
        {"persona": persona.to_prompt_text(), "rq": rq, "lits": lits},
    )
    return [query.validate() for query in payload.value]


def breakdown_query(gateway: Gateway, persona: PersonaProfile, rq: str, query: str) -> list[QueryBreakdown]:
    if not query.strip():
        raise PreconditionError("query must be nonempty")
    payload = gateway.generate(
        "query_breakdown",
        {"persona": persona.to_prompt_text(), "rq": rq, "search_query": query},
    )
    return [breakdown.validate() for breakdown in payload.value]


def aggregate(result_sets: Iterable[Sequence[PaperRecord]]) -> list[PaperRecord]:
    """Union keyed by paper_id; first occurrence wins, order stable."""
    seen: set[str] = set()
    merged: list[PaperRecord] = []
    for papers in result_sets:
        for paper in papers:
            if paper.paper_id not in seen:
                seen.add(paper.paper_id)
                merged.append(paper)
    return merged


def rerank(
    candidates: Sequence[PaperRecord],
    reference: str,
    k: int,
    embedder: Embedder,
) -> list[RankedPaper]:
    """Top-k candidates by cosine to the reference text; ties by paper id."""
    if not candidates:
        raise PreconditionError("candidates must be nonempty")
    if k < 1:
        raise PreconditionError("k must be >= 1")
    reference_vec = embedder.embed(reference)
    scored = [
        (cosine(embedder.embed(paper.embedding_text()), reference_vec), paper)
        for paper in candidates
    ]
    scored.sort(key=lambda pair: (-pair[0], pair[1].paper_id))
    return [RankedPaper(paper=paper, score=score) for score, paper in scored[:k]]


@dataclass
class TopicResult:
    topic: str
    papers: list[RankedPaper] = field(default_factory=list)
    error: str | None = None


def retrieve_for_persona(
    gateway: Gateway,
    scholar: ScholarClient,
    embedder: Embedder,
    persona: PersonaProfile,
    rq: str,
    lits: str = "",
    search_limit: int = 20,
    top_k: int = 10,
    parallelism: int = 4,
) -> dict[str, TopicResult]:
    """Run the full pipeline; one topic per proposed query.

    A topic that fails anywhere (decomposition or any of its searches) is
    returned with an error marker instead of aborting the other topics.
    """
    if not rq.strip():
        raise PreconditionError("rq must be nonempty")
    queries = propose_queries(gateway, persona, rq, lits)
    results: dict[str, TopicResult] = {}
    for primary in queries:
        topic = primary.text
        while topic in results:
            topic += " #2"
        try:
            results[topic] = _run_topic(
                gateway, scholar, embedder, persona, rq, primary.text,
                search_limit=search_limit, top_k=top_k, parallelism=parallelism,
            )
        except IdeamapError as exc:
            results[topic] = TopicResult(topic=primary.text, error=f"{type(exc).__name__}: {exc}")
    return results


def _run_topic(
    gateway: Gateway,
    scholar: ScholarClient,
    embedder: Embedder,
    persona: PersonaProfile,
    rq: str,
    primary: str,
    search_limit: int,
    top_k: int,
    parallelism: int,
) -> TopicResult:
    breakdowns = breakdown_query(gateway, persona, rq, primary)
    texts: list[str] = []
    for text in [primary] + [b.search_query for b in breakdowns]:
        if text not in texts:
            texts.append(text)
    with ThreadPoolExecutor(max_workers=max(1, parallelism)) as pool:
        futures = [pool.submit(scholar.search, text, search_limit) for text in texts]
        result_sets = [future.result() for future in futures]
    pool_papers = aggregate(result_sets)
    if not pool_papers:
        return TopicResult(topic=primary, papers=[])
    return TopicResult(topic=primary, papers=rerank(pool_papers, rq, top_k, embedder))
