"""Graph-structured retrieval and ranking of fair use precedents.

Retrieval fuses three signals per case: factor-level text similarity,
citation-network PageRank, and court-hierarchy PageRank, combined as a
user-weighted convex sum. See the README for the CLI and HTTP surfaces.
"""
from .chunking import Chunk, ChunkingResult, chunk_passage, chunk_passages
from .citations import (
    Citation,
    CitationIndex,
    ReporterRegistry,
    build_citation_edges,
    build_citation_index,
    extract_citations,
    resolve,
)
from .embedding import HashingEmbedder, cosine
from .graph import (
    CaseNode,
    CorpusStats,
    CourtNode,
    Factor,
    FactorPassage,
    KnowledgeGraph,
    OpinionKind,
    OpinionNode,
    export_records,
    import_records,
)
from .pipeline import (
    FactorAnalysis,
    QueryRequest,
    QueryResponse,
    RetrievalEngine,
    analyze_factors,
    retrieve,
)
from .ranking import (
    AuthorityScores,
    PageRankConfig,
    PageRankResult,
    citation_authority,
    compute_authority_scores,
    court_hierarchy_rank,
    influence_distribution,
    min_max_scale,
    pagerank,
)
from .reranker import (
    CandidateScore,
    Expansion,
    RetrievalSelection,
    Weights,
    aggregate_text_sim,
    expand_citations,
    fuse,
    select_top_k,
)
from .vectorindex import VectorIndex, build_index

__version__ = "0.1.0"

__all__ = [
    "AuthorityScores",
    "CandidateScore",
    "CaseNode",
    "Chunk",
    "ChunkingResult",
    "Citation",
    "CitationIndex",
    "CorpusStats",
    "CourtNode",
    "Expansion",
    "Factor",
    "FactorAnalysis",
    "FactorPassage",
    "HashingEmbedder",
    "KnowledgeGraph",
    "OpinionKind",
    "OpinionNode",
    "PageRankConfig",
    "PageRankResult",
    "QueryRequest",
    "QueryResponse",
    "ReporterRegistry",
    "RetrievalEngine",
    "RetrievalSelection",
    "VectorIndex",
    "Weights",
    "aggregate_text_sim",
    "analyze_factors",
    "build_citation_edges",
    "build_citation_index",
    "build_index",
    "chunk_passage",
    "chunk_passages",
    "citation_authority",
    "compute_authority_scores",
    "cosine",
    "court_hierarchy_rank",
    "expand_citations",
    "export_records",
    "extract_citations",
    "fuse",
    "import_records",
    "influence_distribution",
    "min_max_scale",
    "pagerank",
    "resolve",
    "retrieve",
    "select_top_k",
]
