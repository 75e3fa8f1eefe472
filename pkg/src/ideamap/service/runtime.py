"""Runtime assembly: wires configuration into live components and owns the
generation dispatch that turns graph nodes into their generated children."""
from __future__ import annotations

import threading
import uuid
from pathlib import Path
from typing import Any

import httpx

from ..errors import InvalidEdgeKind, PreconditionError
from ..gateway.core import Gateway
from ..gateway.provider import GenerationParams, HttpChatProvider
from ..graph.model import (
    ALLOWED_EDGE_KINDS,
    CRITIQUE,
    LITERATURE,
    NODE_KINDS,
    PERSONA,
    RQ,
    FlowGraph,
    Node,
    render_node_text,
)
from ..graph.store import FlowStore
from ..models import Critique, PaperRecord, PersonaProfile
from ..outline import (
    build_panel,
    hypothetical_abstract,
    literature_review,
    outline_table,
    render_abstracts,
    research_scenarios,
    revised_rqs,
)
from ..personas.engine import DEFAULT_META_PERSONA, PersonaEngine
from ..retrieval.embeddings import CachingEmbedder, HashingEmbedder, RemoteEmbedder
from ..retrieval.pipeline import retrieve_for_persona
from ..retrieval.scholar import RateLimiter, ScholarClient
from .config import Config
from .mockstack import MockScholarWSGI, MockTextProvider
from .storage import FileFlowStorage, FlowStorage, MemoryFlowStorage

# Default generation direction per source kind when the request names none.
DEFAULT_TARGET = {RQ: PERSONA, PERSONA: LITERATURE, LITERATURE: CRITIQUE, CRITIQUE: RQ}


class Runtime:
    def __init__(self, config: Config | None = None, storage: FlowStorage | None = None):
        self.config = (config or Config()).validate()
        self.store = FlowStore()
        if storage is not None:
            self.storage = storage
        elif self.config.storage_path:
            self.storage = FileFlowStorage(Path(self.config.storage_path))
        else:
            self.storage = MemoryFlowStorage()

        provider_cfg = self.config.provider
        if provider_cfg.kind == "mock":
            self.provider = MockTextProvider()
        else:
            self.provider = HttpChatProvider(
                base_url=provider_cfg.base_url,
                model=provider_cfg.model,
                api_key=provider_cfg.api_key,
            )
        self.gateway = Gateway(
            self.provider,
            params=GenerationParams(
                temperature=provider_cfg.temperature,
                max_tokens=provider_cfg.max_tokens,
            ),
        )

        self.rate_limiter = RateLimiter(self.config.rate_limit_rps)
        scholar_cfg = self.config.scholar
        self.mock_scholar: MockScholarWSGI | None = None
        if scholar_cfg.kind == "mock":
            self.mock_scholar = MockScholarWSGI()
            client = httpx.Client(
                transport=httpx.WSGITransport(app=self.mock_scholar),
                base_url="http://scholar.mock",
            )
            self.scholar = ScholarClient(
                base_url="http://scholar.mock",
                rate_limiter=self.rate_limiter,
                client=client,
            )
        else:
            self.scholar = ScholarClient(
                base_url=scholar_cfg.base_url,
                api_key=scholar_cfg.api_key,
                rate_limiter=self.rate_limiter,
            )

        embed_cfg = self.config.embedder
        if embed_cfg.kind == "hashing":
            self.embedder = CachingEmbedder(HashingEmbedder(dim=embed_cfg.dim))
        else:
            self.embedder = CachingEmbedder(
                RemoteEmbedder(
                    base_url=embed_cfg.base_url,
                    model=embed_cfg.model,
                    api_key=embed_cfg.api_key,
                )
            )

        self.persona_engine = PersonaEngine(
            self.gateway,
            scholar=self.scholar,
            embedder=self.embedder,
            author_similarity_threshold=self.config.author_similarity_threshold,
            author_top_papers=self.config.author_top_papers,
        )

        self.jobs: dict[str, dict] = {}
        self._jobs_lock = threading.Lock()

        for document in self.storage.load_all().values():
            self.store.restore(document)

    # -- persistence ---------------------------------------------------------

    def persist(self, flow_id: str) -> None:
        self.storage.save(flow_id, self.store.document(flow_id))

    def create_flow(self) -> str:
        flow_id = self.store.create_flow()
        self.persist(flow_id)
        return flow_id

    def delete_flow(self, flow_id: str) -> None:
        self.store.delete_flow(flow_id)
        self.storage.delete(flow_id)

    def import_flow(self, document: Any) -> str:
        flow_id = self.store.restore(document)
        self.persist(flow_id)
        return flow_id

    # -- context helpers -------------------------------------------------------

    def _ancestor_nodes(self, flow: FlowGraph, node_id: str) -> list[Node]:
        return [flow.nodes[m] for m in flow.ancestry_order(node_id)]

    def _context_text(self, flow: FlowGraph, node_id: str) -> str:
        return "\n\n".join(flow.ancestry_context(node_id))

    def _nearest_rq_text(self, flow: FlowGraph, node_id: str) -> str:
        node = flow.node(node_id)
        if node.kind == RQ:
            return node.payload["question"]
        ancestor = flow.nearest_ancestor_of_kind(node_id, RQ)
        if ancestor is None:
            raise PreconditionError(f"node {node_id} has no research question in its ancestry")
        return ancestor.payload["question"]

    def _nearest_persona(self, flow: FlowGraph, node_id: str) -> PersonaProfile:
        node = flow.node(node_id)
        if node.kind == PERSONA:
            return PersonaProfile.from_dict(node.payload["persona"])
        ancestor = flow.nearest_ancestor_of_kind(node_id, PERSONA)
        if ancestor is None:
            return DEFAULT_META_PERSONA
        return PersonaProfile.from_dict(ancestor.payload["persona"])

    def _ancestor_literature_text(self, flow: FlowGraph, node_id: str) -> str:
        blocks = [
            render_node_text(n)
            for n in self._ancestor_nodes(flow, node_id)
            if n.kind == LITERATURE
        ]
        return "\n\n".join(blocks)

    def _ancestor_papers(self, flow: FlowGraph, node_id: str) -> list[PaperRecord]:
        papers: list[PaperRecord] = []
        seen: set[str] = set()
        for node in self._ancestor_nodes(flow, node_id):
            if node.kind != LITERATURE:
                continue
            for entry in node.payload["papers"]:
                if entry["paper_id"] not in seen:
                    seen.add(entry["paper_id"])
                    papers.append(PaperRecord.from_dict(entry))
        return papers

    def _flow_personas(self, flow: FlowGraph) -> list[PersonaProfile]:
        return [
            PersonaProfile.from_dict(n.payload["persona"])
            for n in sorted(flow.live_nodes(), key=lambda n: n.id)
            if n.kind == PERSONA
        ]

    # -- generation dispatch ------------------------------------------------------

    def generate(
        self,
        flow_id: str,
        node_id: str,
        target_kind: str | None = None,
        options: dict | None = None,
    ) -> list[str]:
        """Generate child nodes for node_id; returns the new node ids."""
        options = options or {}
        flow = self.store.get(flow_id)
        node = flow.node(node_id)
        if node.deleted:
            raise PreconditionError(f"node {node_id} is deleted")
        target = target_kind or DEFAULT_TARGET.get(node.kind)
        if target not in NODE_KINDS:
            raise InvalidEdgeKind(f"unknown target kind {target!r}")
        if (node.kind, target) not in ALLOWED_EDGE_KINDS:
            raise InvalidEdgeKind(f"{node.kind} -> {target} is not an allowed edge")

        if node.kind == RQ and target == PERSONA:
            created = self._generate_personas_from_rq(flow, node)
        elif node.kind == PERSONA and target == LITERATURE:
            created = self._generate_literature(flow, node)
        elif node.kind == LITERATURE and target == CRITIQUE:
            created = self._generate_critiques(flow, node)
        elif node.kind == LITERATURE and target == PERSONA:
            created = self._generate_personas_from_literature(flow, node, options)
        elif node.kind == CRITIQUE and target == RQ:
            created = self._generate_revised_rqs(flow, node)
        else:  # pragma: no cover - whitelist and dispatch table agree
            raise InvalidEdgeKind(f"{node.kind} -> {target} has no generator")
        self.persist(flow_id)
        return created

    def _generate_personas_from_rq(self, flow: FlowGraph, node: Node) -> list[str]:
        history = self._flow_personas(flow)
        profiles = self.persona_engine.personas_from_rq(node.payload["question"], history)
        return self._add_children(flow, node.id, PERSONA, [{"persona": p.to_dict()} for p in profiles])

    def _generate_literature(self, flow: FlowGraph, node: Node) -> list[str]:
        persona = PersonaProfile.from_dict(node.payload["persona"])
        rq = self._nearest_rq_text(flow, node.id)
        lits = self._ancestor_literature_text(flow, node.id)
        topics = retrieve_for_persona(
            self.gateway,
            self.scholar,
            self.embedder,
            persona,
            rq,
            lits=lits,
            search_limit=self.config.search_limit_per_query,
            top_k=self.config.rerank_top_k,
            parallelism=self.config.retrieval_parallelism,
        )
        payloads = []
        for topic, result in topics.items():
            payload: dict = {
                "topic": topic,
                "papers": [ranked.paper.to_dict() for ranked in result.papers],
            }
            if result.error is not None:
                payload["error"] = result.error
            payloads.append(payload)
        return self._add_children(flow, node.id, LITERATURE, payloads)

    def _generate_critiques(self, flow: FlowGraph, node: Node) -> list[str]:
        persona = self._nearest_persona(flow, node.id)
        rq = self._nearest_rq_text(flow, node.id)
        lits = render_node_text(node)
        critiques = self.persona_engine.generate_critiques(persona, rq, lits)
        return self._add_children(
            flow, node.id, CRITIQUE, [{"critique": c.to_dict()} for c in critiques]
        )

    def _generate_personas_from_literature(self, flow: FlowGraph, node: Node, options: dict) -> list[str]:
        papers = [PaperRecord.from_dict(entry) for entry in node.payload["papers"]]
        method = options.get("method", "summary")
        if method == "authors":
            profiles = self.persona_engine.personas_from_authors(papers)
        elif method == "summary":
            summary = self.persona_engine.summarize_literature(papers)
            profiles = self.persona_engine.personas_from_literature(summary, self._flow_personas(flow))
        else:
            raise PreconditionError(f"unknown persona generation method {method!r}")
        return self._add_children(flow, node.id, PERSONA, [{"persona": p.to_dict()} for p in profiles])

    def _generate_revised_rqs(self, flow: FlowGraph, node: Node) -> list[str]:
        persona = self._nearest_persona(flow, node.id)
        rq = self._nearest_rq_text(flow, node.id)
        context = self._context_text(flow, node.id)
        critique = Critique.from_dict(node.payload["critique"])
        questions = revised_rqs(self.gateway, persona, context, rq, [critique])
        return self._add_children(
            flow, node.id, RQ, [{"question": q, "favorite": False} for q in questions]
        )

    def _add_children(self, flow: FlowGraph, parent: str, kind: str, payloads: list[dict]) -> list[str]:
        with self.store.lock(flow.flow_id):
            return [
                flow.add_node(kind, payload, parent=parent, origin="generated")
                for payload in payloads
            ]

    # -- outline panel ---------------------------------------------------------------

    def generate_outline(self, flow_id: str, node_id: str, scenario: str | None = None) -> dict:
        flow = self.store.get(flow_id)
        node = flow.node(node_id)
        if node.kind != RQ:
            raise PreconditionError("outlines are generated for RQ nodes")
        rq = node.payload["question"]
        context = self._context_text(flow, node_id)
        papers = self._ancestor_papers(flow, node_id)
        abstracts = render_abstracts(papers)
        if not abstracts.strip():
            raise PreconditionError(
                "no literature with abstracts in this RQ's ancestry; generate literature first"
            )
        critique_node = flow.nearest_ancestor_of_kind(node_id, CRITIQUE)
        if critique_node is None:
            raise PreconditionError("no critique in this RQ's ancestry; generate critiques first")
        critique_text = render_node_text(critique_node)
        persona = self._nearest_persona(flow, node_id)
        literature_text = self._ancestor_literature_text(flow, node_id)

        review = literature_review(self.gateway, abstracts, rq, context)
        if scenario is None or not scenario.strip():
            scenario = research_scenarios(self.gateway, abstracts, rq, context)[0].text
        table = outline_table(self.gateway, persona, context, rq, scenario, critique_text, literature_text)
        abstract = hypothetical_abstract(
            self.gateway, persona, context, rq, scenario, literature_text, table, critique_text
        )
        panel = build_panel(rq, review, scenario, table, abstract)
        document = panel.to_dict()
        self.store.set_panel(flow_id, node_id, document)
        self.persist(flow_id)
        return document

    # -- async job helpers ---------------------------------------------------------

    def submit_job(self, fn, *args) -> str:
        job_id = uuid.uuid4().hex
        with self._jobs_lock:
            self.jobs[job_id] = {"status": "pending", "result": None, "error": None}

        def run():
            try:
                result = fn(*args)
                with self._jobs_lock:
                    self.jobs[job_id].update(status="done", result=result)
            except Exception as exc:  # surfaced via polling, so swallow here
                with self._jobs_lock:
                    self.jobs[job_id].update(status="error", error=f"{type(exc).__name__}: {exc}")

        threading.Thread(target=run, daemon=True).start()
        return job_id

    def job_state(self, job_id: str) -> dict | None:
        with self._jobs_lock:
            state = self.jobs.get(job_id)
            return dict(state) if state is not None else None

    def node_dict(self, flow_id: str, node_id: str) -> dict:
        flow = self.store.get(flow_id)
        node = flow.node(node_id)
        return {
            "id": node.id,
            "flow": flow.flow_id,
            "kind": node.kind,
            "payload": node.payload,
            "created_at": node.created_at,
            "origin": node.origin,
            "deleted": node.deleted,
        }

    def close(self) -> None:
        closer = getattr(self.scholar, "close", None)
        if closer:
            closer()
