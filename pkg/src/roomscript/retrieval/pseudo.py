"""Deterministic hash-based pseudo-embedder for tests and offline runs.

Real deployments inject a text-embedding oracle; this stand-in maps any
string to a reproducible unit vector so the whole retrieval stack can run
without network access or model weights.
"""

from __future__ import annotations

import hashlib

import numpy as np

__all__ = ["pseudo_embed_text"]


def pseudo_embed_text(text: str, dim: int = 64) -> np.ndarray:
    """Unit vector derived from a SHA-256 of the text; stable across runs."""
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    seed = int.from_bytes(digest[:8], "little")
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(dim)
    return v / np.linalg.norm(v)
