"""Score fusion and selection.

Each candidate case carries three components already scaled to [0, 1]: text
similarity (best chunk cosine, min-max scaled per query), citation authority,
and court rank (both corpus-global). The fused score is their convex
combination under user weights; ties break by higher citation authority, then
ascending case id, so rankings are reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Mapping, Sequence

from .chunking import Chunk
from .errors import InvalidWeightsError
from .graph import KnowledgeGraph
from .ranking import AuthorityScores

WEIGHT_SUM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Weights:
    w_text: float
    w_cit: float
    w_court: float

    def __post_init__(self):
        for name, value in (("w_text", self.w_text), ("w_cit", self.w_cit), ("w_court", self.w_court)):
            if not isinstance(value, (int, float)) or not 0.0 <= float(value) <= 1.0:
                raise InvalidWeightsError(f"{name} must be in [0, 1], got {value!r}")
        total = self.w_text + self.w_cit + self.w_court
        if abs(total - 1.0) > WEIGHT_SUM_TOLERANCE:
            raise InvalidWeightsError(f"weights must sum to 1, got {total!r}")

    @classmethod
    def text_only(cls) -> "Weights":
        return cls(1.0, 0.0, 0.0)

    @classmethod
    def uniform(cls) -> "Weights":
        third = 1.0 / 3.0
        return cls(third, third, third)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.w_text, self.w_cit, self.w_court)


@dataclass(frozen=True)
class CandidateScore:
    """One case's component scores, its fused score, and the witness chunk."""

    case_id: str
    opinion_id: str
    text_sim: float
    citation: float
    court: float
    fused: float = 0.0
    best_chunk: str = ""


@dataclass(frozen=True)
class Expansion:
    """A cited case pulled in to widen the top-k context."""

    source_case_id: str
    case_id: str
    rank: int
    score: float


@dataclass(frozen=True)
class RetrievalSelection:
    top_k: tuple[CandidateScore, ...]
    expansions: tuple[Expansion, ...]
    k: int
    n: int


@dataclass(frozen=True)
class TextSimAggregate:
    score: float
    best_chunk: str
    opinion_id: str


def aggregate_text_sim(
    hits: Sequence[tuple[Chunk, float]], graph: KnowledgeGraph
) -> dict[str, TextSimAggregate]:
    """Per-case max over chunk similarities; the argmax chunk is the witness.

    Ties between chunks of one case break toward the ascending chunk id.
    """
    best: dict[str, TextSimAggregate] = {}
    for chunk, score in hits:
        opinion_id = graph.passage(chunk.passage_id).opinion_id
        case_id = graph.opinion(opinion_id).case_id
        current = best.get(case_id)
        if (
            current is None
            or score > current.score
            or (score == current.score and chunk.chunk_id < current.best_chunk)
        ):
            best[case_id] = TextSimAggregate(score=score, best_chunk=chunk.chunk_id, opinion_id=opinion_id)
    return best


def fuse(candidates: Sequence[CandidateScore], weights: Weights) -> list[CandidateScore]:
    """Apply the convex combination and sort by it (descending).

    The fused value is exactly w_text*text_sim + w_cit*citation +
    w_court*court in float arithmetic; fusing an already fused list again
    with the same weights leaves values unchanged.
    """
    if not isinstance(weights, Weights):
        weights = Weights(*weights)
    fused = [
        replace(
            candidate,
            fused=weights.w_text * candidate.text_sim
            + weights.w_cit * candidate.citation
            + weights.w_court * candidate.court,
        )
        for candidate in candidates
    ]
    fused.sort(key=lambda c: (-c.fused, -c.citation, c.case_id))
    return fused


def select_top_k(scored: Sequence[CandidateScore], k: int) -> list[CandidateScore]:
    """First min(k, len) items of the fused ordering."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    return list(scored[:k])


def expansion_weights(weights: Weights) -> tuple[float, float]:
    """Renormalized (citation, court) pair; equal halves when both are zero."""
    mass = weights.w_cit + weights.w_court
    if mass == 0.0:
        return (0.5, 0.5)
    return (weights.w_cit / mass, weights.w_court / mass)


def expand_citations(
    top_k: Sequence[CandidateScore],
    graph: KnowledgeGraph,
    scores: AuthorityScores,
    n: int,
    weights: Weights,
) -> list[Expansion]:
    """Rank the union of cases cited by the top-k, minus the top-k itself.

    Ranking weight is the renormalized (citation, court) part of the request
    weights so expansions stay meaningful under pure-text retrieval. Each
    expansion records the highest-ranked top-k case that cites it.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if n == 0:
        return []
    selected = {candidate.case_id for candidate in top_k}
    source_of: dict[str, str] = {}
    for candidate in top_k:
        for cited in graph.cited_cases(candidate.case_id):
            if cited not in selected and cited not in source_of:
                source_of[cited] = candidate.case_id

    w_cit, w_court = expansion_weights(weights)
    def authority(case_id: str) -> float:
        court_id = graph.case(case_id).court_id
        return (
            w_cit * scores.citation_rank_scaled[case_id]
            + w_court * scores.court_rank_scaled[court_id]
        )

    ranked = sorted(source_of, key=lambda case_id: (-authority(case_id), case_id))
    return [
        Expansion(source_case_id=source_of[case_id], case_id=case_id, rank=rank, score=authority(case_id))
        for rank, case_id in enumerate(ranked[:n], start=1)
    ]


def candidates_from_pool(
    text_sims: Mapping[str, TextSimAggregate],
    graph: KnowledgeGraph,
    scores: AuthorityScores,
) -> list[CandidateScore]:
    """Assemble unfused candidates from per-case text similarities."""
    out = []
    for case_id in sorted(text_sims):
        aggregate = text_sims[case_id]
        court_id = graph.case(case_id).court_id
        out.append(
            CandidateScore(
                case_id=case_id,
                opinion_id=aggregate.opinion_id,
                text_sim=aggregate.score,
                citation=scores.citation_rank_scaled[case_id],
                court=scores.court_rank_scaled[court_id],
                best_chunk=aggregate.best_chunk,
            )
        )
    return out
