"""Embedders and cosine similarity.

The reference embedder is a deterministic hashed bag-of-words model: it needs
no network or weights, identical texts embed identically, and texts sharing
vocabulary score higher. Real embedding models plug in through the same
interface via a minimal HTTP contract and are only used when configured.
"""
from __future__ import annotations

import re
from hashlib import blake2b
from typing import Protocol, Sequence

import numpy as np

from .errors import DimensionMismatchError, ZeroVectorError

DEFAULT_DIMENSION = 256

_TOKEN_RE = re.compile(r"[a-z0-9']+")


class Embedder(Protocol):
    """Anything that maps text to fixed-dimension unit vectors."""

    dimension: int
    tag: str

    def embed(self, text: str) -> np.ndarray: ...

    def embed_batch(self, texts: Sequence[str]) -> list[np.ndarray]: ...


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    """dot(u, v) / (|u| |v|); raises on dimension mismatch or zero vectors."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise DimensionMismatchError(f"dimensions differ: {u.shape} vs {v.shape}")
    norm_u = float(np.linalg.norm(u))
    norm_v = float(np.linalg.norm(v))
    if norm_u == 0.0 or norm_v == 0.0:
        raise ZeroVectorError("cosine undefined for a zero vector")
    return float(np.dot(u, v) / (norm_u * norm_v))


class HashingEmbedder:
    """Deterministic hashed bag-of-words embedder, L2 normalized.

    Tokens hash (keyed blake2b, stable across processes) into buckets
    1..dimension-1; bucket 0 is reserved so empty text embeds to a fixed unit
    basis vector instead of a zero vector.
    """

    def __init__(self, dimension: int = DEFAULT_DIMENSION):
        if dimension < 2:
            raise ValueError("dimension must be >= 2")
        self.dimension = dimension
        self.tag = f"hashing-bow-{dimension}"

    def _bucket(self, token: str) -> int:
        digest = blake2b(token.encode("utf-8"), digest_size=8).digest()
        return 1 + int.from_bytes(digest, "big") % (self.dimension - 1)

    def embed(self, text: str) -> np.ndarray:
        vector = np.zeros(self.dimension, dtype=np.float64)
        tokens = _TOKEN_RE.findall(text.lower())
        if not tokens:
            vector[0] = 1.0
            return vector
        for token in tokens:
            vector[self._bucket(token)] += 1.0
        return vector / np.linalg.norm(vector)

    def embed_batch(self, texts: Sequence[str]) -> list[np.ndarray]:
        return [self.embed(text) for text in texts]


def build_embed_request(texts: Sequence[str]) -> dict:
    """Body for the external embedder contract: POST {"texts": [...]}."""
    return {"texts": list(texts)}


def parse_embed_response(payload: dict, dimension: int, count: int) -> list[np.ndarray]:
    """Validate and normalize {"vectors": [[...], ...]} from an embed service."""
    vectors = payload.get("vectors")
    if not isinstance(vectors, list) or len(vectors) != count:
        raise ValueError(f"expected {count} vectors, got {type(vectors).__name__}")
    out = []
    for row in vectors:
        arr = np.asarray(row, dtype=np.float64)
        if arr.shape != (dimension,):
            raise DimensionMismatchError(f"expected dimension {dimension}, got {arr.shape}")
        norm = float(np.linalg.norm(arr))
        if norm == 0.0:
            raise ZeroVectorError("embed service returned a zero vector")
        out.append(arr / norm)
    return out


class HttpEmbedder:
    """Client for a hosted embedding model speaking the minimal contract.

    Only used when explicitly configured; the automated test suite runs
    entirely on the reference embedder.
    """

    def __init__(self, endpoint: str, dimension: int, timeout: float = 30.0):
        self.endpoint = endpoint
        self.dimension = dimension
        self.timeout = timeout
        self.tag = f"http-{dimension}"

    def embed(self, text: str) -> np.ndarray:
        return self.embed_batch([text])[0]

    def embed_batch(self, texts: Sequence[str]) -> list[np.ndarray]:
        import httpx

        response = httpx.post(self.endpoint, json=build_embed_request(texts), timeout=self.timeout)
        response.raise_for_status()
        return parse_embed_response(response.json(), self.dimension, len(texts))
