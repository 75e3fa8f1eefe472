import random

import numpy as np
import pytest

from ideamap.errors import PreconditionError, UpstreamError
from ideamap.gateway.core import Gateway
from ideamap.models import PaperRecord, PersonaProfile
from ideamap.retrieval.embeddings import HashingEmbedder, StaticEmbedder
from ideamap.retrieval.pipeline import (
    TopicResult,
    aggregate,
    breakdown_query,
    propose_queries,
    rerank,
    retrieve_for_persona,
)
from ideamap.service.mockstack import MockTextProvider
from oracles import brute_force_rerank, dedup_first_wins

PERSONA = PersonaProfile(
    persona_name="Wearables Expert",
    role_fields={"Role": "Wearables Expert", "Goal": "Study AR devices"},
    background_fields={"Domain": "Ubiquitous computing"},
)
RQ = "How can smart glasses use AR to aid recall?"


def paper(pid, title=None, abstract=None):
    return PaperRecord(
        paper_id=pid, title=title or f"Paper {pid}", abstract=abstract,
        authors=[], year=2020, venue="", citation_count=0, url="",
    )


class TestQueryStages:
    def test_propose_queries_arity(self, gateway):
        queries = propose_queries(gateway, PERSONA, RQ)
        assert len(queries) == 3
        assert all(q.text.strip() for q in queries)

    def test_breakdown_nonempty(self, gateway):
        subs = breakdown_query(gateway, PERSONA, RQ, "smart glasses recall aids")
        assert len(subs) >= 1
        assert all(s.search_query and s.rationale for s in subs)


class TestAggregate:
    def test_matches_dedup_oracle(self):
        rng = random.Random(11)
        ids = [f"p{rng.randrange(20):02d}" for _ in range(60)]
        sets = [[paper(pid) for pid in ids[i::3]] for i in range(3)]
        merged = aggregate(sets)
        flat = [p.paper_id for batch in sets for p in batch]
        assert [p.paper_id for p in merged] == dedup_first_wins(flat)

    def test_first_occurrence_kept(self):
        a = paper("x", title="first copy")
        b = paper("x", title="second copy")
        merged = aggregate([[a], [b]])
        assert merged == [a]
        assert merged[0].title == "first copy"

    def test_empty(self):
        assert aggregate([]) == []
        assert aggregate([[], []]) == []


class TestRerank:
    def rig(self, n, dim=16, seed=0):
        rng = np.random.default_rng(seed)
        vectors = {}
        candidates = []
        for i in range(n):
            pid = f"p{i:03d}"
            vectors[f"Paper {pid}"] = rng.normal(size=dim).tolist()
            candidates.append(paper(pid))
        reference = "the research question"
        vectors[reference] = rng.normal(size=dim).tolist()
        return candidates, reference, StaticEmbedder(vectors), vectors

    def test_matches_brute_force_oracle(self):
        candidates, reference, embedder, vectors = self.rig(120, seed=3)
        ranked = rerank(candidates, reference, 10, embedder)
        expected = brute_force_rerank(
            [(c.paper_id, vectors[c.embedding_text()]) for c in candidates],
            vectors[reference], 10,
        )
        assert [r.paper.paper_id for r in ranked] == expected

    def test_scores_descending(self):
        candidates, reference, embedder, _ = self.rig(40, seed=4)
        ranked = rerank(candidates, reference, 40, embedder)
        scores = [r.score for r in ranked]
        assert scores == sorted(scores, reverse=True)

    def test_exact_ties_break_by_paper_id(self):
        vec = [1.0, 2.0, 0.5]
        vectors = {f"Paper p{i}": vec for i in range(5)}
        vectors["ref"] = [0.2, 0.9, 0.1]
        candidates = [paper(f"p{i}") for i in (3, 1, 4, 0, 2)]
        ranked = rerank(candidates, "ref", 5, StaticEmbedder(vectors))
        assert [r.paper.paper_id for r in ranked] == ["p0", "p1", "p2", "p3", "p4"]

    def test_k_larger_than_pool(self):
        candidates, reference, embedder, _ = self.rig(4)
        assert len(rerank(candidates, reference, 10, embedder)) == 4

    def test_preconditions(self):
        _, reference, embedder, _ = self.rig(3)
        with pytest.raises(PreconditionError):
            rerank([], reference, 5, embedder)
        with pytest.raises(PreconditionError):
            rerank([paper("p")], reference, 0, embedder)

    def test_abstract_feeds_embedding_text(self):
        with_abs = paper("pa", title="Shared Title", abstract="Unique abstract text.")
        assert with_abs.embedding_text() == "Shared Title\nUnique abstract text."
        without = paper("pb", title="Shared Title")
        assert without.embedding_text() == "Shared Title"


class SelectiveFailScholar:
    """Delegates to a real client but fails chosen exact query texts."""

    def __init__(self, inner, fail_exact):
        self.inner = inner
        self.fail_exact = fail_exact

    def search(self, query, limit=20):
        if query in self.fail_exact:
            raise UpstreamError(f"injected failure for {query!r}")
        return self.inner.search(query, limit=limit)

    def author_papers(self, author_id, limit=100):
        return self.inner.author_papers(author_id, limit=limit)


class TestRetrieveForPersona:
    def test_three_topics_with_ranked_papers(self, gateway, scholar, embedder):
        results = retrieve_for_persona(gateway, scholar, embedder, PERSONA, RQ)
        assert len(results) == 3
        for topic, result in results.items():
            assert result.error is None
            assert 1 <= len(result.papers) <= 10
            ids = [r.paper.paper_id for r in result.papers]
            assert len(ids) == len(set(ids))
            scores = [r.score for r in result.papers]
            assert scores == sorted(scores, reverse=True)

    def test_search_limit_respected(self, gateway, scholar_wsgi, scholar, embedder):
        retrieve_for_persona(gateway, scholar, embedder, PERSONA, RQ, search_limit=5)
        searches = [r for r in scholar_wsgi.requests if r["path"].endswith("paper/search")]
        assert searches
        assert all(r["params"]["limit"] == "5" for r in searches)

    def test_failed_topic_isolated(self, gateway, scholar, embedder):
        queries = propose_queries(gateway, PERSONA, RQ)
        failing = SelectiveFailScholar(scholar, {queries[0].text})
        results = retrieve_for_persona(gateway, failing, embedder, PERSONA, RQ, parallelism=1)
        assert len(results) == 3
        failed = results[queries[0].text]
        assert failed.error is not None and "UpstreamError" in failed.error
        assert failed.papers == []
        others = [r for topic, r in results.items() if topic != queries[0].text]
        assert all(r.error is None and r.papers for r in others)

    def test_all_topics_fail_without_raising(self, gateway, scholar_wsgi, scholar, embedder):
        scholar_wsgi.always_status = 500
        results = retrieve_for_persona(gateway, scholar, embedder, PERSONA, RQ, parallelism=1)
        assert len(results) == 3
        assert all(r.error is not None for r in results.values())

    def test_empty_rq_rejected(self, gateway, scholar, embedder):
        with pytest.raises(PreconditionError):
            retrieve_for_persona(gateway, scholar, embedder, PERSONA, "  ")

    def test_duplicate_topics_uniquified(self, scholar, embedder):
        import json

        class SameQueryProvider(MockTextProvider):
            def _answer(self, prompt):
                if "literature search queries" in prompt or "search queries" in prompt:
                    return json.dumps([{"search_query": "identical topic"}] * 3)
                return super()._answer(prompt)

        gateway = Gateway(SameQueryProvider())
        results = retrieve_for_persona(gateway, scholar, embedder, PERSONA, RQ, parallelism=1)
        assert len(results) == 3
        assert "identical topic" in results
