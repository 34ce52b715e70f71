"""JSON-over-HTTP surface for the retrieval engine.

Endpoints:
  POST /query            run retrieval (body mirrors QueryRequest)
  GET  /cases/{case_id}  case detail with opinions and passages
  GET  /stats            corpus statistics
  GET  /scores/{case_id} authority scores for one case
  GET  /health           readiness

Responses are deterministic for identical requests against the same corpus,
except the timing fields. Weight and shape problems return 400 with a
field-level message; unknown cases 404; every endpoint returns 503 until a
corpus is loaded.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .errors import EmptyCorpusError, InvalidWeightsError, UnknownCaseError
from .pipeline import FACTOR_MODES, WHOLE_QUERY, QueryRequest, RetrievalEngine, response_to_dict
from .reranker import Weights


@dataclass(frozen=True)
class RequestDefaults:
    """Fallbacks applied when a /query body omits weights, k, or n."""

    weights: Weights = field(default_factory=Weights.uniform)
    k: int = 5
    n: int = 0
    factor_mode: str = WHOLE_QUERY


class _BadRequest(Exception):
    def __init__(self, field: str, message: str):
        self.field = field
        self.message = message
        super().__init__(f"{field}: {message}")


def _parse_query_payload(payload: object, defaults: "RequestDefaults") -> QueryRequest:
    if not isinstance(payload, dict):
        raise _BadRequest("body", "expected a JSON object")
    text = payload.get("text")
    if not isinstance(text, str) or not text.strip():
        raise _BadRequest("text", "non-empty dispute text is required")

    raw_weights = payload.get("weights")
    if raw_weights is None:
        weights = defaults.weights
    else:
        if not isinstance(raw_weights, dict):
            raise _BadRequest("weights", "expected an object with w_text, w_cit, w_court")
        try:
            weights = Weights(
                float(raw_weights.get("w_text", 0.0)),
                float(raw_weights.get("w_cit", 0.0)),
                float(raw_weights.get("w_court", 0.0)),
            )
        except (InvalidWeightsError, TypeError, ValueError) as exc:
            raise _BadRequest("weights", str(exc)) from None

    def _int_field(name: str, default: int, minimum: int) -> int:
        raw = payload.get(name, default)
        if isinstance(raw, bool) or not isinstance(raw, int):
            raise _BadRequest(name, "expected an integer")
        if raw < minimum:
            raise _BadRequest(name, f"must be >= {minimum}")
        return raw

    k = _int_field("k", defaults.k, 1)
    n = _int_field("n", defaults.n, 0)

    factor_mode = payload.get("factor_mode", defaults.factor_mode)
    if factor_mode not in FACTOR_MODES:
        raise _BadRequest("factor_mode", f"must be one of {list(FACTOR_MODES)}")
    factor_filter = payload.get("factor_filter")
    include_prompts = bool(payload.get("include_prompts", False))

    try:
        return QueryRequest(
            text=text,
            weights=weights,
            k=k,
            n=n,
            factor_mode=factor_mode,
            factor_filter=factor_filter,
            include_prompts=include_prompts,
        )
    except Exception as exc:
        raise _BadRequest("factor_filter", str(exc)) from None


def create_app(
    engine: RetrievalEngine | None = None, defaults: RequestDefaults | None = None
) -> FastAPI:
    """Build the service around a loaded engine (None = not ready, 503s)."""
    defaults = defaults or RequestDefaults()
    app = FastAPI(title="fairuse retrieval service", docs_url=None, redoc_url=None)
    # Read-only API consumed by the browser console, possibly from another origin.
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["GET", "POST"], allow_headers=["*"]
    )
    app.state.engine = engine

    def _engine() -> RetrievalEngine:
        current = app.state.engine
        if current is None:
            raise EmptyCorpusError("corpus not loaded")
        return current

    @app.exception_handler(_BadRequest)
    async def _bad_request(_request: Request, exc: _BadRequest):
        return JSONResponse(status_code=400, content={"detail": {exc.field: exc.message}})

    @app.exception_handler(EmptyCorpusError)
    async def _not_ready(_request: Request, exc: EmptyCorpusError):
        return JSONResponse(status_code=503, content={"detail": str(exc)})

    @app.exception_handler(UnknownCaseError)
    async def _unknown_case(_request: Request, exc: UnknownCaseError):
        return JSONResponse(status_code=404, content={"detail": str(exc)})

    @app.get("/health")
    async def health():
        engine = _engine()
        return {"status": "ok", "cases": len(engine.graph.case_ids), "chunks": len(engine.index)}

    @app.get("/stats")
    async def stats():
        engine = _engine()
        s = engine.graph.corpus_stats()
        return {
            "case_count": s.case_count,
            "opinion_count": s.opinion_count,
            "court_count": s.court_count,
            "year_min": s.year_min,
            "year_max": s.year_max,
        }

    @app.get("/cases/{case_id}")
    async def case_detail(case_id: str):
        engine = _engine()
        case = engine.graph.case(case_id)
        opinions = []
        for opinion in engine.graph.opinions_of_case(case_id):
            passages = [
                {"passage_id": p.passage_id, "factor": p.factor.value, "text": p.text}
                for p in engine.graph.passages_of_opinion(opinion.opinion_id)
            ]
            opinions.append(
                {
                    "opinion_id": opinion.opinion_id,
                    "opinion_kind": opinion.opinion_kind.value,
                    "passages": passages,
                }
            )
        return {
            "case_id": case.case_id,
            "name": case.name,
            "year": case.year,
            "court_id": case.court_id,
            "cited_cases": engine.graph.cited_cases(case_id),
            "citing_cases": engine.graph.citing_cases(case_id),
            "opinions": opinions,
        }

    @app.get("/scores/{case_id}")
    async def case_scores(case_id: str):
        engine = _engine()
        case = engine.graph.case(case_id)
        scores = engine.scores
        return {
            "case_id": case_id,
            "citation": {
                "raw": scores.citation_rank[case_id],
                "scaled": scores.citation_rank_scaled[case_id],
            },
            "court": {
                "court_id": case.court_id,
                "raw": scores.court_rank[case.court_id],
                "scaled": scores.court_rank_scaled[case.court_id],
            },
        }

    @app.post("/query")
    async def query(request: Request):
        engine = _engine()
        try:
            payload = await request.json()
        except Exception:
            raise _BadRequest("body", "request body must be valid JSON") from None
        query_request = _parse_query_payload(payload, defaults)
        response = engine.query(query_request)
        return response_to_dict(response)

    return app


def serve(
    engine: RetrievalEngine, bind: str, defaults: RequestDefaults | None = None
) -> None:  # pragma: no cover - wraps uvicorn
    import uvicorn

    host, _, port = bind.partition(":")
    uvicorn.run(
        create_app(engine, defaults),
        host=host or "127.0.0.1",
        port=int(port or 8800),
        log_level="info",
    )
