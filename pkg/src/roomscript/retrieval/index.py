"""Embedding index over asset records.

Records hold one unit-norm embedding per asset (the average of its view
embeddings) plus the asset's bounding-box dimensions and optional tags used
by the mock oracles.  The default search mode is an exact scan, which is
also the correctness oracle for the optional inverted-file mode (coarse
k-means clustering with a configurable probe count).

File format: a small binary header followed by packed little-endian float32
vectors, with asset ids / bbox dims / tags in a JSON sidecar next to the
binary file (``<path>.meta.json``):

    magic   4 bytes  b"RSIX"
    version u32 LE   currently 1
    D       u32 LE   embedding dimension
    N       u32 LE   number of records
    mode    u8       0 = exact, 1 = ivf
    data    N*D float32 LE, row major
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = ["EmbeddingRecord", "Index"]

_MAGIC = b"RSIX"
_VERSION = 1


@dataclass
class EmbeddingRecord:
    asset_id: str
    vector: np.ndarray  # (D,), unit norm
    bbox_dims: np.ndarray  # (3,), meters
    tags: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.vector = np.asarray(self.vector, dtype=np.float32)
        self.bbox_dims = np.asarray(self.bbox_dims, dtype=float)
        norm = float(np.linalg.norm(self.vector))
        if abs(norm - 1.0) > 1e-5:
            raise ValueError(
                f"embedding for {self.asset_id!r} is not unit norm ({norm:.6f})")


class Index:
    """Immutable cosine-similarity index; safe for concurrent queries."""

    def __init__(self, records: list[EmbeddingRecord], mode: str = "exact",
                 nlist: int | None = None, nprobe: int | None = None,
                 seed: int = 0):
        if not records:
            raise ValueError("cannot build an empty index")
        if mode not in ("exact", "ivf"):
            raise ValueError(f"unknown index mode {mode!r}")
        dims = {r.vector.shape for r in records}
        if len(dims) != 1:
            raise ValueError(f"inconsistent embedding dimensions: {dims}")
        self.records = list(records)
        self.mode = mode
        self.matrix = np.stack([r.vector for r in records]).astype(np.float32)
        self.ids = np.array([r.asset_id for r in records])
        self.dim = self.matrix.shape[1]
        self.by_id = {r.asset_id: r for r in records}
        self._centroids: np.ndarray | None = None
        self._lists: list[np.ndarray] | None = None
        self.nprobe = nprobe
        if mode == "ivf":
            self._build_ivf(nlist, seed)

    def __len__(self) -> int:
        return len(self.records)

    def _build_ivf(self, nlist: int | None, seed: int) -> None:
        from scipy.cluster.vq import kmeans2

        n = len(self.records)
        nlist = nlist or max(1, int(np.sqrt(n)))
        nlist = min(nlist, n)
        centroids, labels = kmeans2(self.matrix.astype(float), nlist,
                                    minit="++", seed=seed)
        norms = np.linalg.norm(centroids, axis=1)
        norms[norms == 0] = 1.0
        self._centroids = (centroids / norms[:, None]).astype(np.float32)
        self._lists = [np.flatnonzero(labels == c) for c in range(nlist)]
        if self.nprobe is None:
            self.nprobe = max(1, nlist // 8)

    # ------------------------------------------------------------------

    def _rank(self, candidate_rows: np.ndarray, query: np.ndarray,
              k: int) -> list[tuple[str, float]]:
        sims = self.matrix[candidate_rows] @ query
        k = min(k, len(candidate_rows))
        if k < len(candidate_rows):
            part = np.argpartition(-sims, k - 1)
            boundary = sims[part[k - 1]]
            keep = np.flatnonzero(sims >= boundary)
        else:
            keep = np.arange(len(candidate_rows))
        rows = candidate_rows[keep]
        order = np.lexsort((self.ids[rows], -sims[keep].astype(float)))
        chosen = keep[order[:k]]
        return [(str(self.ids[candidate_rows[i]]), float(sims[i])) for i in chosen]

    def search(self, query_vector: np.ndarray, k: int,
               nprobe: int | None = None) -> list[tuple[str, float]]:
        """Top-k records by cosine similarity, descending.

        Ties break toward the lexicographically smaller asset id.  Exact
        mode scans everything; ivf mode scans the ``nprobe`` clusters whose
        centroids are most similar to the query.
        """
        q = np.asarray(query_vector, dtype=np.float32)
        if q.shape != (self.dim,):
            raise ValueError(f"query has dimension {q.shape}, index is {self.dim}")
        norm = float(np.linalg.norm(q))
        if norm == 0:
            raise ValueError("query vector is all zeros")
        q = q / norm
        if self.mode == "exact":
            return self._rank(np.arange(len(self.records)), q, k)
        assert self._centroids is not None and self._lists is not None
        probe = nprobe or self.nprobe or 1
        scores = self._centroids @ q
        top = np.argsort(-scores, kind="stable")[:probe]
        rows = np.concatenate([self._lists[c] for c in top]) if len(top) else \
            np.arange(len(self.records))
        if len(rows) == 0:
            rows = np.arange(len(self.records))
        return self._rank(np.sort(rows), q, k)

    # ------------------------------------------------------------------

    def save(self, path: str | Path) -> None:
        path = Path(path)
        header = _MAGIC + struct.pack(
            "<III B", _VERSION, self.dim, len(self.records),
            0 if self.mode == "exact" else 1)
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(self.matrix.astype("<f4").tobytes())
        sidecar = {
            "assetIds": [r.asset_id for r in self.records],
            "bboxDims": [list(map(float, r.bbox_dims)) for r in self.records],
            "tags": [list(r.tags) for r in self.records],
        }
        with open(path.with_name(path.name + ".meta.json"), "w",
                  encoding="utf-8") as fh:
            json.dump(sidecar, fh)

    @classmethod
    def load(cls, path: str | Path, nprobe: int | None = None,
             seed: int = 0) -> "Index":
        path = Path(path)
        with open(path, "rb") as fh:
            magic = fh.read(4)
            if magic != _MAGIC:
                raise ValueError(f"{path} is not an index file")
            version, dim, count, mode_byte = struct.unpack("<III B", fh.read(13))
            if version != _VERSION:
                raise ValueError(f"unsupported index version {version}")
            data = np.frombuffer(fh.read(4 * dim * count), dtype="<f4")
        matrix = data.reshape(count, dim)
        with open(path.with_name(path.name + ".meta.json"), encoding="utf-8") as fh:
            sidecar = json.load(fh)
        records = [
            EmbeddingRecord(asset_id, matrix[i].copy(),
                            np.array(sidecar["bboxDims"][i]),
                            list(sidecar["tags"][i]))
            for i, asset_id in enumerate(sidecar["assetIds"])
        ]
        return cls(records, mode="exact" if mode_byte == 0 else "ivf",
                   nprobe=nprobe, seed=seed)
