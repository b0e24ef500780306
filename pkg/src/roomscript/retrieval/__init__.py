"""Embedding retrieval: index, ranking, filtering."""

from .index import EmbeddingRecord, Index
from .pipeline import FilterResult, RetrievalQuery, filter_pipeline, retrieve_assets
from .pseudo import pseudo_embed_text
from .rank import average_views, knn, rerank, size_filter

__all__ = [
    "EmbeddingRecord",
    "FilterResult",
    "Index",
    "RetrievalQuery",
    "average_views",
    "filter_pipeline",
    "knn",
    "pseudo_embed_text",
    "rerank",
    "retrieve_assets",
    "size_filter",
]
