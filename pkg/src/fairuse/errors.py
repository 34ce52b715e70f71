"""Exception types shared across the engine."""


class EngineError(Exception):
    """Base class for every error raised by this package."""


class GraphError(EngineError):
    """Base class for graph construction and lookup failures."""


class DuplicateIdError(GraphError):
    """A node with the same identifier already exists."""


class DanglingReferenceError(GraphError):
    """A record references a parent node that does not exist."""


class InvalidFactorKindError(GraphError):
    """A passage names a factor outside the six known kinds."""


class SelfCitationError(GraphError):
    """A case may not cite itself."""


class UnknownCaseError(GraphError):
    """Lookup of a case id that is not in the graph."""


class CyclicAppealError(GraphError):
    """An appeals_to assignment would create a cycle in the court hierarchy."""


class FrozenGraphError(GraphError):
    """Mutation attempted after the graph was frozen."""


class MalformedInputError(EngineError):
    """A serialized record could not be parsed.

    Carries the source name and line number so the offending record can be
    located.
    """

    def __init__(self, message: str, source: str | None = None, line_no: int | None = None):
        self.source = source
        self.line_no = line_no
        where = ""
        if source is not None:
            where = f" [{source}:{line_no}]" if line_no is not None else f" [{source}]"
        super().__init__(f"{message}{where}")


class EmptyGraphError(EngineError):
    """Ranking requested over an empty node set."""


class EmptyInputError(EngineError):
    """An operation that needs at least one element received none."""


class DimensionMismatchError(EngineError):
    """Two vectors of different dimensions were combined."""


class ZeroVectorError(EngineError):
    """Cosine similarity is undefined for a zero-norm vector."""


class EmptyIndexError(EngineError):
    """Search requested against an index with no chunks."""


class InvalidWeightsError(EngineError):
    """Retrieval weights must each lie in [0, 1] and sum to 1."""


class EmptyCorpusError(EngineError):
    """A query was issued before any corpus was loaded."""


class AnalyzerUnavailableError(EngineError):
    """The LLM-backed factor analyzer was requested without an endpoint."""
