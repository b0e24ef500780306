"""Ranking math: view averaging, knn, category-aware re-ranking, size filter."""

from __future__ import annotations

import numpy as np

from ..geometry import min_bbd
from .index import Index

__all__ = ["average_views", "knn", "rerank", "size_filter"]


def average_views(view_embeddings) -> np.ndarray:
    """Mean of an object's per-view embeddings, renormalized to unit length.

    The renormalization does not affect any cosine-based ranking; it keeps
    stored vectors on the unit sphere.
    """
    views = [np.asarray(v, dtype=float) for v in view_embeddings]
    if not views:
        raise ValueError("need at least one view embedding")
    dims = {v.shape for v in views}
    if len(dims) != 1:
        raise ValueError(f"view embeddings disagree on dimension: {dims}")
    mean = np.mean(views, axis=0)
    norm = float(np.linalg.norm(mean))
    if norm == 0:
        raise ValueError("view embeddings cancel out; cannot normalize")
    return mean / norm


def knn(index: Index, query_vector: np.ndarray, k: int) -> list[tuple[str, float]]:
    """Top-k assets by cosine similarity (descending, id tie-break).

    ``k`` larger than the index returns everything, ranked.
    """
    return index.search(query_vector, k)


def rerank(candidates: list[str], index: Index, description_embedding: np.ndarray,
           category_embedding: np.ndarray, lam: float = 1.0) -> list[str]:
    """Category-aware re-ranking of retrieved candidates.

    Orders ascending by d(description, E(x)) + lam * d(category, E(x)) with
    d the cosine distance (1 - cosine similarity).  With lam=0 this is
    exactly the knn order restricted to the candidates.
    """
    if not candidates:
        return []
    ft = np.asarray(description_embedding, dtype=np.float32)
    fc = np.asarray(category_embedding, dtype=np.float32)
    ft = ft / np.linalg.norm(ft)
    fc = fc / np.linalg.norm(fc)
    vecs = np.stack([index.by_id[c].vector for c in candidates])
    scores = (1.0 - vecs @ ft) + lam * (1.0 - vecs @ fc)
    scored = sorted(zip(scores.astype(float), candidates))
    return [asset_id for _, asset_id in scored]


def size_filter(candidates: list[str], index: Index, target_dims,
                tau: float = 0.4, m: int = 1) -> list[str]:
    """Drop candidates whose box shape is too distorted from the target.

    A candidate survives when its minimal bounding-box distortion over the
    four axis-aligned rotations is at most ``tau``.  If fewer than ``m``
    survive, the ``m`` lowest-distortion candidates are kept instead.
    Output preserves the input (rank) order.
    """
    target = np.asarray(target_dims, dtype=float)
    values = [min_bbd(index.by_id[c].bbox_dims, target)[0] for c in candidates]
    kept = [c for c, v in zip(candidates, values) if v <= tau]
    if len(kept) >= m:
        return kept
    ranked = sorted(range(len(candidates)), key=lambda i: (values[i], i))
    chosen = set(ranked[:min(m, len(candidates))])
    return [c for i, c in enumerate(candidates) if i in chosen]
