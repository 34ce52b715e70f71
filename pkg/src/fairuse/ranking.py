"""Authority ranking: PageRank over citations and over the court hierarchy.

Citation authority runs over case-to-case citation edges oriented
citing -> cited, so rank accumulates at frequently cited cases. Court rank
runs over appeal edges oriented lower -> higher, so rank accumulates at apex
courts. Both are damped random walks with uniform teleport; dangling nodes
redistribute their mass uniformly over all nodes, which keeps every iterate
summing to 1.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Mapping

import numpy as np

from . import kernels
from .errors import DanglingReferenceError, EmptyGraphError, EmptyInputError, MalformedInputError
from .graph import KnowledgeGraph


@dataclass(frozen=True)
class PageRankConfig:
    damping: float = 0.85
    tolerance: float = 1e-9
    max_iterations: int = 200
    dangling_policy: str = "uniform_redistribute"

    def __post_init__(self):
        if not 0.0 < self.damping < 1.0:
            raise ValueError(f"damping must be in (0, 1), got {self.damping}")
        if self.tolerance <= 0.0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if self.dangling_policy != "uniform_redistribute":
            raise ValueError(f"unknown dangling policy: {self.dangling_policy!r}")


@dataclass(frozen=True)
class PageRankResult:
    scores: dict[str, float]
    iterations_used: int
    converged: bool
    #: Largest |sum(scores) - 1| seen across all iterates.
    max_sum_error: float


def pagerank(
    nodes: Iterable[str],
    edges: Iterable[tuple[str, str]],
    config: PageRankConfig | None = None,
) -> PageRankResult:
    """Power-iteration PageRank over an arbitrary directed graph.

    Parallel edges collapse to one. When the iteration hits
    ``max_iterations`` without meeting the tolerance, the last iterate is
    returned with ``converged=False`` rather than raising.
    """
    config = config or PageRankConfig()
    node_list = list(nodes)
    n = len(node_list)
    if n == 0:
        raise EmptyGraphError("pagerank needs at least one node")
    position = {node_id: i for i, node_id in enumerate(node_list)}
    if len(position) != n:
        raise ValueError("duplicate node ids")

    pairs = set()
    for from_id, to_id in edges:
        if from_id not in position or to_id not in position:
            raise DanglingReferenceError(f"edge ({from_id!r}, {to_id!r}) references unknown node")
        pairs.add((position[from_id], position[to_id]))

    if pairs:
        edge_arr = np.array(sorted(pairs), dtype=np.int64)
        src, dst = edge_arr[:, 0], edge_arr[:, 1]
    else:
        src = dst = np.empty(0, dtype=np.int64)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])

    scores, iterations, converged, max_sum_error = kernels.pagerank_power(
        indptr, dst, n, config.damping, config.tolerance, config.max_iterations
    )
    return PageRankResult(
        scores={node_id: float(scores[i]) for node_id, i in position.items()},
        iterations_used=iterations,
        converged=converged,
        max_sum_error=max_sum_error,
    )


def citation_authority(graph: KnowledgeGraph, config: PageRankConfig | None = None) -> PageRankResult:
    """PageRank over the citation network; authority flows to cited cases."""
    return pagerank(graph.case_ids, graph.citation_edges(), config)


def court_hierarchy_rank(graph: KnowledgeGraph, config: PageRankConfig | None = None) -> PageRankResult:
    """PageRank over appeal edges; apex courts collect the most rank."""
    return pagerank(graph.court_ids, graph.appeal_edges(), config)


def min_max_scale(scores: Mapping[str, float]) -> dict[str, float]:
    """Affine rescale onto [0, 1]. A constant map scales to all 0.5.

    The degenerate value keeps the component neutral in the convex
    combination instead of silently zeroing or maximizing it.
    """
    if not scores:
        raise EmptyInputError("cannot scale an empty score map")
    low = min(scores.values())
    high = max(scores.values())
    if high == low:
        return {key: 0.5 for key in scores}
    span = high - low
    return {key: (value - low) / span for key, value in scores.items()}


@dataclass(frozen=True)
class AuthorityScores:
    """Raw and min-max scaled PageRank maps for cases and courts."""

    citation_rank: dict[str, float]
    citation_rank_scaled: dict[str, float]
    court_rank: dict[str, float]
    court_rank_scaled: dict[str, float]
    iterations_used: int
    converged: bool


def compute_authority_scores(
    graph: KnowledgeGraph, config: PageRankConfig | None = None
) -> AuthorityScores:
    """Run both rankings and min-max scale each over the whole corpus."""
    citation = citation_authority(graph, config)
    court = court_hierarchy_rank(graph, config)
    return AuthorityScores(
        citation_rank=citation.scores,
        citation_rank_scaled=min_max_scale(citation.scores),
        court_rank=court.scores,
        court_rank_scaled=min_max_scale(court.scores),
        iterations_used=max(citation.iterations_used, court.iterations_used),
        converged=citation.converged and court.converged,
    )


@dataclass(frozen=True)
class TierBucket:
    """Count of cases from one court tier falling in one log-score bucket."""

    tier: int
    bucket: int
    count: int


def influence_distribution(graph: KnowledgeGraph, scores: Mapping[str, float]) -> list[TierBucket]:
    """Histogram of log10 raw citation scores, grouped by court tier.

    Tier is the deciding court's distance from its apex (apex = 0), so
    Supreme-style courts land in tier 0 and trial courts in the deepest
    tier. Bucket is floor(log10(score)); teleport guarantees scores > 0.
    """
    counts: dict[tuple[int, int], int] = {}
    for case_id in sorted(scores):
        score = scores[case_id]
        tier = graph.court_depth(graph.case(case_id).court_id)
        bucket = int(np.floor(np.log10(score)))
        counts[(tier, bucket)] = counts.get((tier, bucket), 0) + 1
    return [TierBucket(tier, bucket, counts[(tier, bucket)]) for tier, bucket in sorted(counts)]


def export_scores(scores: AuthorityScores, sink: str | Path | IO[str]) -> int:
    """Write score records as JSON lines: {"kind", "id", "raw", "scaled"}."""
    if isinstance(sink, (str, Path)):
        with open(sink, "w", encoding="utf-8") as handle:
            return export_scores(scores, handle)
    count = 0
    for kind, raw, scaled in (
        ("case", scores.citation_rank, scores.citation_rank_scaled),
        ("court", scores.court_rank, scores.court_rank_scaled),
    ):
        for node_id in sorted(raw):
            record = {"kind": kind, "id": node_id, "raw": raw[node_id], "scaled": scaled[node_id]}
            sink.write(json.dumps(record, sort_keys=True))
            sink.write("\n")
            count += 1
    return count


def export_distribution(buckets: Iterable[TierBucket], sink: str | Path | IO[str]) -> int:
    """Write histogram records as JSON lines: {"tier", "bucket", "count"}."""
    if isinstance(sink, (str, Path)):
        with open(sink, "w", encoding="utf-8") as handle:
            return export_distribution(buckets, handle)
    count = 0
    for entry in buckets:
        sink.write(json.dumps({"tier": entry.tier, "bucket": entry.bucket, "count": entry.count}))
        sink.write("\n")
        count += 1
    return count


def load_scores(source: str | Path | IO[str]) -> tuple[dict[str, dict[str, float]], dict[str, dict[str, float]]]:
    """Read a score file back as ({case id: {raw, scaled}}, {court id: {raw, scaled}})."""
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as handle:
            return load_scores(handle)
    cases: dict[str, dict[str, float]] = {}
    courts: dict[str, dict[str, float]] = {}
    for line_no, line in enumerate(source, start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
            bucket = {"case": cases, "court": courts}[record["kind"]]
            bucket[record["id"]] = {"raw": float(record["raw"]), "scaled": float(record["scaled"])}
        except (json.JSONDecodeError, KeyError, TypeError, ValueError):
            raise MalformedInputError("bad score record", "<scores>", line_no) from None
    return cases, courts
