from .embeddings import CachingEmbedder, Embedder, HashingEmbedder, RemoteEmbedder, StaticEmbedder, cosine
from .pipeline import TopicResult, aggregate, breakdown_query, propose_queries, rerank, retrieve_for_persona
from .scholar import SEARCH_FIELDS, RateLimiter, ScholarClient, map_paper

__all__ = [
    "CachingEmbedder",
    "Embedder",
    "HashingEmbedder",
    "RemoteEmbedder",
    "StaticEmbedder",
    "cosine",
    "TopicResult",
    "aggregate",
    "breakdown_query",
    "propose_queries",
    "rerank",
    "retrieve_for_persona",
    "SEARCH_FIELDS",
    "RateLimiter",
    "ScholarClient",
    "map_paper",
]
