"""End-to-end query orchestration.

A query runs: optional factor analysis (the one-step interleaved-retrieval
pattern: analyze the dispute against the four factors first, then let that
guide retrieval), chunk search, per-case aggregation, convex-combination
fusion, top-k selection, and citation expansion. Everything is deterministic
for a fixed corpus and request; only the timing fields vary between runs.

The completion client is config-gated and never touched in the default
configuration; the keyword analyzer keeps per-factor mode fully testable.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol

from .chunking import DEFAULT_MAX_TOKENS, chunk_passages
from .embedding import Embedder, HashingEmbedder
from .errors import AnalyzerUnavailableError, EmptyCorpusError, EmptyInputError
from .graph import Factor, KnowledgeGraph, QUERY_FACTORS, import_records
from .prompts import FACTOR_QUERY_TEMPLATES, build_case_analysis_prompt
from .ranking import AuthorityScores, PageRankConfig, compute_authority_scores, min_max_scale
from .reranker import (
    CandidateScore,
    Expansion,
    RetrievalSelection,
    TextSimAggregate,
    Weights,
    aggregate_text_sim,
    candidates_from_pool,
    expand_citations,
    fuse,
    select_top_k,
)
from .vectorindex import VectorIndex, build_index

DEFAULT_POOL_SIZE = 200
EXCERPT_CHARS = 280

WHOLE_QUERY = "whole_query"
PER_FACTOR = "per_factor"
FACTOR_MODES = (WHOLE_QUERY, PER_FACTOR)


@dataclass(frozen=True)
class QueryRequest:
    text: str
    weights: Weights
    k: int = 5
    n: int = 0
    factor_mode: str = WHOLE_QUERY
    factor_filter: Factor | None = None
    include_prompts: bool = False

    def __post_init__(self):
        if not self.text:
            raise EmptyInputError("query text is empty")
        if self.factor_mode not in FACTOR_MODES:
            raise ValueError(f"factor_mode must be one of {FACTOR_MODES}, got {self.factor_mode!r}")
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.n < 0:
            raise ValueError(f"n must be >= 0, got {self.n}")
        if self.factor_filter is not None:
            object.__setattr__(self, "factor_filter", Factor.coerce(self.factor_filter))


@dataclass(frozen=True)
class FactorAnalysis:
    """Per-factor sub-queries guiding retrieval, plus the analyzer's rationale."""

    sub_queries: dict[Factor, str]
    rationale: str

    def __post_init__(self):
        missing = [factor.value for factor in QUERY_FACTORS if not self.sub_queries.get(factor)]
        if missing:
            raise ValueError(f"factor analysis missing sub-queries for: {', '.join(missing)}")


class CompletionClient(Protocol):
    """Anything that turns a prompt into completion text."""

    def complete(self, prompt: str) -> str: ...


class KeywordFactorAnalyzer:
    """Deterministic fallback: dispute text plus a fixed keyword template."""

    def analyze(self, text: str) -> FactorAnalysis:
        sub_queries = {
            factor: f"{text}\n\nFocus: {FACTOR_QUERY_TEMPLATES[factor]}" for factor in QUERY_FACTORS
        }
        return FactorAnalysis(
            sub_queries=sub_queries,
            rationale="keyword templates; no model consulted",
        )


class CompletionFactorAnalyzer:
    """LLM-backed analyzer; requires a configured completion client."""

    def __init__(self, client: CompletionClient | None):
        self._client = client

    def analyze(self, text: str) -> FactorAnalysis:
        if self._client is None:
            raise AnalyzerUnavailableError("no completion endpoint configured")
        factor_list = ", ".join(factor.value for factor in QUERY_FACTORS)
        prompt = (
            "Analyze how the dispute below relates to each fair use factor "
            f"({factor_list}). For each factor, write one search query capturing "
            "the dispute's posture on that factor. Respond as JSON mapping "
            "factor name to query, plus a short 'rationale'.\n\n"
            f"Dispute:\n{text}\n"
        )
        raw = self._client.complete(prompt)
        import json

        payload = json.loads(raw)
        sub_queries = {factor: payload[factor.value] for factor in QUERY_FACTORS}
        return FactorAnalysis(sub_queries=sub_queries, rationale=payload.get("rationale", ""))


def analyze_factors(text: str, analyzer=None) -> FactorAnalysis:
    """Map a dispute onto the four factors. Defaults to the keyword analyzer."""
    if not text:
        raise EmptyInputError("dispute text is empty")
    analyzer = analyzer or KeywordFactorAnalyzer()
    return analyzer.analyze(text)


@dataclass(frozen=True)
class RankedResult:
    rank: int
    case_id: str
    opinion_id: str
    case_name: str
    year: int
    court_id: str
    text_sim: float
    citation: float
    court: float
    fused: float
    best_chunk: str
    excerpts: dict[str, list[str]]


@dataclass(frozen=True)
class QueryResponse:
    results: tuple[RankedResult, ...]
    expansions: tuple[Expansion, ...]
    k: int
    n: int
    weights: Weights
    factor_mode: str
    factor_filter: Factor | None
    prompts: tuple[str, ...] | None
    timing: dict[str, float] = field(default_factory=dict)

    @property
    def selection(self) -> RetrievalSelection:
        top_k = tuple(
            CandidateScore(
                case_id=result.case_id,
                opinion_id=result.opinion_id,
                text_sim=result.text_sim,
                citation=result.citation,
                court=result.court,
                fused=result.fused,
                best_chunk=result.best_chunk,
            )
            for result in self.results
        )
        return RetrievalSelection(top_k=top_k, expansions=self.expansions, k=self.k, n=self.n)


def _excerpt(text: str) -> str:
    if len(text) <= EXCERPT_CHARS:
        return text
    return text[: EXCERPT_CHARS - 1].rstrip() + "…"


def _case_excerpts(graph: KnowledgeGraph, case_id: str) -> dict[str, list[str]]:
    grouped: dict[str, list[str]] = {factor.value: [] for factor in Factor}
    for passage in graph.passages_of_case(case_id):
        grouped[passage.factor.value].append(_excerpt(passage.text))
    return grouped


def _passages_by_factor(graph: KnowledgeGraph, case_id: str) -> dict[Factor, list[str]]:
    grouped: dict[Factor, list[str]] = {}
    for passage in graph.passages_of_case(case_id):
        grouped.setdefault(passage.factor, []).append(passage.text)
    return grouped


class RetrievalEngine:
    """A frozen corpus plus its index and authority scores, ready to query."""

    def __init__(
        self,
        graph: KnowledgeGraph,
        index: VectorIndex,
        scores: AuthorityScores,
        embedder: Embedder,
        pool_size: int = DEFAULT_POOL_SIZE,
        analyzer=None,
    ):
        if not graph.case_ids:
            raise EmptyCorpusError("corpus has no cases")
        self.graph = graph
        self.index = index
        self.scores = scores
        self.embedder = embedder
        self.pool_size = pool_size
        self.analyzer = analyzer or KeywordFactorAnalyzer()

    @classmethod
    def from_graph(
        cls,
        graph: KnowledgeGraph,
        embedder: Embedder | None = None,
        max_tokens: int = DEFAULT_MAX_TOKENS,
        pool_size: int = DEFAULT_POOL_SIZE,
        pagerank_config: PageRankConfig | None = None,
        analyzer=None,
    ) -> "RetrievalEngine":
        """Chunk, embed, index, and rank a frozen graph."""
        if not graph.case_ids:
            raise EmptyCorpusError("corpus has no cases")
        embedder = embedder or HashingEmbedder()
        passages = [graph.passage(passage_id) for passage_id in graph.passage_ids]
        chunking = chunk_passages(passages, max_tokens)
        index = build_index(chunking.chunks, embedder)
        scores = compute_authority_scores(graph, pagerank_config)
        return cls(graph, index, scores, embedder, pool_size=pool_size, analyzer=analyzer)

    @classmethod
    def from_store(cls, store_path: str | Path, **kwargs) -> "RetrievalEngine":
        return cls.from_graph(import_records(store_path), **kwargs)

    # -- retrieval -------------------------------------------------------------

    def _pool(self, request: QueryRequest) -> dict[str, TextSimAggregate]:
        """Candidate pool: cases owning a chunk among the top pool_size hits.

        Whole-query mode embeds the dispute once. Per-factor mode embeds each
        factor sub-query, searches factor-filtered chunks, and unions the
        per-case results under the max rule. A factor_filter naming one of
        the four query factors narrows per-factor mode to that sub-query;
        Facts/Conclusion filters only make sense in whole-query mode and are
        ignored here.
        """
        if request.factor_mode == WHOLE_QUERY:
            hits = self.index.search(
                self.embedder.embed(request.text), self.pool_size, request.factor_filter
            )
            return aggregate_text_sim(hits, self.graph)
        analysis = analyze_factors(request.text, self.analyzer)
        factors = (
            (request.factor_filter,)
            if request.factor_filter in QUERY_FACTORS
            else QUERY_FACTORS
        )
        pool: dict[str, TextSimAggregate] = {}
        for factor in factors:
            hits = self.index.search(
                self.embedder.embed(analysis.sub_queries[factor]), self.pool_size, factor
            )
            for case_id, aggregate in aggregate_text_sim(hits, self.graph).items():
                current = pool.get(case_id)
                if (
                    current is None
                    or aggregate.score > current.score
                    or (aggregate.score == current.score and aggregate.best_chunk < current.best_chunk)
                ):
                    pool[case_id] = aggregate
        return pool

    def query(self, request: QueryRequest) -> QueryResponse:
        started = time.perf_counter()
        timing: dict[str, float] = {}

        pool = self._pool(request)
        timing["search_ms"] = (time.perf_counter() - started) * 1000.0
        if not pool:
            # Nothing to rank (e.g. a factor filter with no passages of that
            # kind): an empty result set, not an error.
            timing["fuse_ms"] = 0.0
            timing["expand_ms"] = 0.0
            timing["total_ms"] = (time.perf_counter() - started) * 1000.0
            return QueryResponse(
                results=(),
                expansions=(),
                k=request.k,
                n=request.n,
                weights=request.weights,
                factor_mode=request.factor_mode,
                factor_filter=request.factor_filter,
                prompts=() if request.include_prompts else None,
                timing=timing,
            )

        mark = time.perf_counter()
        # Text similarity is rescaled per query over the candidate pool;
        # citation and court scores are corpus-global.
        scaled_sims = min_max_scale({case_id: agg.score for case_id, agg in pool.items()})
        scaled_pool = {
            case_id: TextSimAggregate(
                score=scaled_sims[case_id],
                best_chunk=pool[case_id].best_chunk,
                opinion_id=pool[case_id].opinion_id,
            )
            for case_id in pool
        }
        candidates = candidates_from_pool(scaled_pool, self.graph, self.scores)
        ranked = fuse(candidates, request.weights)
        top_k = select_top_k(ranked, request.k)
        timing["fuse_ms"] = (time.perf_counter() - mark) * 1000.0

        mark = time.perf_counter()
        expansions = expand_citations(top_k, self.graph, self.scores, request.n, request.weights)
        timing["expand_ms"] = (time.perf_counter() - mark) * 1000.0

        results = []
        for rank, candidate in enumerate(top_k, start=1):
            case = self.graph.case(candidate.case_id)
            results.append(
                RankedResult(
                    rank=rank,
                    case_id=candidate.case_id,
                    opinion_id=candidate.opinion_id,
                    case_name=case.name,
                    year=case.year,
                    court_id=case.court_id,
                    text_sim=candidate.text_sim,
                    citation=candidate.citation,
                    court=candidate.court,
                    fused=candidate.fused,
                    best_chunk=candidate.best_chunk,
                    excerpts=_case_excerpts(self.graph, candidate.case_id),
                )
            )

        prompts = None
        if request.include_prompts:
            prompts = tuple(
                build_case_analysis_prompt(
                    request.text,
                    self.graph.case(result.case_id).name,
                    _passages_by_factor(self.graph, result.case_id),
                )
                for result in results
            )

        timing["total_ms"] = (time.perf_counter() - started) * 1000.0
        return QueryResponse(
            results=tuple(results),
            expansions=tuple(expansions),
            k=request.k,
            n=request.n,
            weights=request.weights,
            factor_mode=request.factor_mode,
            factor_filter=request.factor_filter,
            prompts=prompts,
            timing=timing,
        )


def retrieve(
    request: QueryRequest,
    graph: KnowledgeGraph,
    index: VectorIndex,
    scores: AuthorityScores,
    embedder: Embedder | None = None,
    pool_size: int = DEFAULT_POOL_SIZE,
    analyzer=None,
) -> QueryResponse:
    """One-shot retrieval against prebuilt components."""
    engine = RetrievalEngine(
        graph, index, scores, embedder or HashingEmbedder(), pool_size=pool_size, analyzer=analyzer
    )
    return engine.query(request)


def response_to_dict(response: QueryResponse) -> dict:
    """JSON-ready view of a response; key order is deterministic."""
    payload = {
        "k": response.k,
        "n": response.n,
        "weights": {
            "w_text": response.weights.w_text,
            "w_cit": response.weights.w_cit,
            "w_court": response.weights.w_court,
        },
        "factor_mode": response.factor_mode,
        "factor_filter": response.factor_filter.value if response.factor_filter else None,
        "results": [
            {
                "rank": result.rank,
                "case_id": result.case_id,
                "opinion_id": result.opinion_id,
                "case_name": result.case_name,
                "year": result.year,
                "court_id": result.court_id,
                "scores": {
                    "text_sim": result.text_sim,
                    "citation": result.citation,
                    "court": result.court,
                    "fused": result.fused,
                },
                "best_chunk": result.best_chunk,
                "excerpts": result.excerpts,
            }
            for result in response.results
        ],
        "expansions": [
            {
                "rank": expansion.rank,
                "case_id": expansion.case_id,
                "source_case_id": expansion.source_case_id,
                "score": expansion.score,
            }
            for expansion in response.expansions
        ],
        "timing": response.timing,
    }
    if response.prompts is not None:
        payload["prompts"] = list(response.prompts)
    return payload
