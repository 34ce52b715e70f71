"""Exact cosine-similarity search over embedded chunks.

The corpus is hundreds of opinions, so the index is a brute-force scan over a
dense matrix: exact by construction, no approximation to validate. Vectors
are stored unit-normalized, making cosine a plain dot product; the scan runs
through the kernel backend.

Persistence is one header line {"dimension", "count", "embedder_tag"}
followed by one JSON line per chunk.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import IO, Iterable, Sequence

import numpy as np

from . import kernels
from .chunking import Chunk
from .embedding import Embedder
from .errors import (
    DimensionMismatchError,
    DuplicateIdError,
    EmptyIndexError,
    FrozenGraphError,
    MalformedInputError,
    ZeroVectorError,
)
from .graph import Factor


class VectorIndex:
    """Frozen-after-build store of (chunk, unit vector) rows."""

    def __init__(self, dimension: int, embedder_tag: str = "unknown"):
        self.dimension = dimension
        self.embedder_tag = embedder_tag
        self._chunks: list[Chunk] = []
        self._ids: set[str] = set()
        self._rows: list[np.ndarray] = []
        self._matrix: np.ndarray | None = None
        self._frozen = False

    def __len__(self) -> int:
        return len(self._chunks)

    @property
    def chunks(self) -> list[Chunk]:
        return list(self._chunks)

    def add(self, chunk: Chunk, vector: np.ndarray) -> None:
        if self._frozen:
            raise FrozenGraphError("index is frozen")
        if chunk.chunk_id in self._ids:
            raise DuplicateIdError(f"chunk {chunk.chunk_id!r} already indexed")
        arr = np.asarray(vector, dtype=np.float64)
        if arr.shape != (self.dimension,):
            raise DimensionMismatchError(
                f"vector shape {arr.shape} does not match index dimension {self.dimension}"
            )
        norm = float(np.linalg.norm(arr))
        if norm == 0.0:
            raise ZeroVectorError(f"chunk {chunk.chunk_id!r} has a zero vector")
        self._chunks.append(chunk)
        self._ids.add(chunk.chunk_id)
        self._rows.append(arr / norm)

    def freeze(self) -> "VectorIndex":
        if not self._frozen:
            order = sorted(range(len(self._chunks)), key=lambda i: self._chunks[i].chunk_id)
            self._chunks = [self._chunks[i] for i in order]
            self._rows = [self._rows[i] for i in order]
            self._matrix = (
                np.ascontiguousarray(np.vstack(self._rows))
                if self._rows
                else np.empty((0, self.dimension))
            )
            self._frozen = True
        return self

    def search(
        self, query_vector: np.ndarray, m: int, factor_filter: Factor | str | None = None
    ) -> list[tuple[Chunk, float]]:
        """Exact top-m chunks by cosine, ties broken by ascending chunk id."""
        if m < 1:
            raise ValueError(f"m must be >= 1, got {m}")
        if not self._chunks:
            raise EmptyIndexError("index holds no chunks")
        self.freeze()
        query = np.asarray(query_vector, dtype=np.float64)
        if query.shape != (self.dimension,):
            raise DimensionMismatchError(
                f"query shape {query.shape} does not match index dimension {self.dimension}"
            )
        norm = float(np.linalg.norm(query))
        if norm == 0.0:
            raise ZeroVectorError("query vector has zero norm")
        scores = kernels.cosine_scores(self._matrix, query / norm)

        if factor_filter is None:
            candidates: Iterable[int] = range(len(self._chunks))
        else:
            wanted = Factor.coerce(factor_filter)
            candidates = (i for i, chunk in enumerate(self._chunks) if chunk.factor is wanted)
        ranked = sorted(candidates, key=lambda i: (-scores[i], self._chunks[i].chunk_id))
        return [(self._chunks[i], float(scores[i])) for i in ranked[:m]]

    # -- persistence -----------------------------------------------------------

    def save(self, sink: str | Path | IO[str]) -> None:
        if isinstance(sink, (str, Path)):
            with open(sink, "w", encoding="utf-8") as handle:
                self.save(handle)
            return
        header = {
            "dimension": self.dimension,
            "count": len(self._chunks),
            "embedder_tag": self.embedder_tag,
        }
        sink.write(json.dumps(header, sort_keys=True) + "\n")
        for chunk, row in zip(self._chunks, self._rows):
            record = {
                "chunk_id": chunk.chunk_id,
                "passage_id": chunk.passage_id,
                "factor": chunk.factor.value,
                "vector": [float(x) for x in row],
                "text": chunk.text,
                "token_estimate": chunk.token_estimate,
            }
            sink.write(json.dumps(record, ensure_ascii=False, sort_keys=True) + "\n")

    @classmethod
    def load(cls, source: str | Path | IO[str], name: str | None = None) -> "VectorIndex":
        if isinstance(source, (str, Path)):
            with open(source, encoding="utf-8") as handle:
                return cls.load(handle, name=str(source))
        source_name = name or "<stream>"
        lines = [line for line in source if line.strip()]
        if not lines:
            raise MalformedInputError("missing index header", source_name, 1)
        try:
            header = json.loads(lines[0])
            index = cls(int(header["dimension"]), str(header["embedder_tag"]))
            expected = int(header["count"])
        except (json.JSONDecodeError, KeyError, TypeError, ValueError):
            raise MalformedInputError("bad index header", source_name, 1) from None
        for line_no, line in enumerate(lines[1:], start=2):
            try:
                record = json.loads(line)
                chunk = Chunk(
                    chunk_id=record["chunk_id"],
                    passage_id=record["passage_id"],
                    factor=record["factor"],
                    text=record.get("text", "(unavailable)"),
                    token_estimate=int(record.get("token_estimate", 0)),
                )
                index.add(chunk, np.asarray(record["vector"], dtype=np.float64))
            except (json.JSONDecodeError, KeyError, TypeError, ValueError):
                raise MalformedInputError("bad chunk record", source_name, line_no) from None
        if len(index) != expected:
            raise MalformedInputError(
                f"header count {expected} != {len(index)} chunk records", source_name, 1
            )
        return index.freeze()


def build_index(chunks: Sequence[Chunk], embedder: Embedder) -> VectorIndex:
    """Embed chunks in one batch and return a frozen index."""
    index = VectorIndex(embedder.dimension, embedder.tag)
    vectors = embedder.embed_batch([chunk.text for chunk in chunks])
    for chunk, vector in zip(chunks, vectors):
        index.add(chunk, vector)
    return index.freeze()
