"""Lenient corpus ingest with a validation report.

Real corpora are messy: fail soft, report loud. Records that violate the
schema are collected instead of aborting the whole run; cases pointing at
unknown courts get the court auto-created (appeals_to unset) and flagged.
Citation edges come from two sources: explicit citation records, and reporter
citations extracted from opinion texts and resolved against the corpus
metadata index.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .citations import ReporterRegistry, build_citation_edges, index_from_graph
from .errors import EngineError, MalformedInputError, SelfCitationError
from .graph import (
    CaseNode,
    CorpusStats,
    CourtNode,
    FactorPassage,
    KnowledgeGraph,
    OpinionNode,
    parse_record,
    _KIND_ORDER,
)


@dataclass
class IngestReport:
    files: list[str] = field(default_factory=list)
    record_count: int = 0
    auto_created_courts: list[str] = field(default_factory=list)
    schema_violations: list[str] = field(default_factory=list)
    parse_errors: list[str] = field(default_factory=list)
    unresolved_citations: list[str] = field(default_factory=list)
    ambiguous_citation_keys: list[str] = field(default_factory=list)
    self_citations: int = 0
    citation_edges: int = 0
    stats: CorpusStats | None = None

    @property
    def ok(self) -> bool:
        return not self.schema_violations and not self.parse_errors

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "files": self.files,
            "record_count": self.record_count,
            "auto_created_courts": self.auto_created_courts,
            "schema_violations": self.schema_violations,
            "parse_errors": self.parse_errors,
            "unresolved_citations": self.unresolved_citations,
            "ambiguous_citation_keys": self.ambiguous_citation_keys,
            "self_citations": self.self_citations,
            "citation_edges": self.citation_edges,
            "stats": {
                "case_count": self.stats.case_count,
                "opinion_count": self.stats.opinion_count,
                "court_count": self.stats.court_count,
                "year_min": self.stats.year_min,
                "year_max": self.stats.year_max,
            }
            if self.stats
            else None,
        }

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n", "utf-8")


def _collect_records(paths: list[Path], report: IngestReport) -> list[dict]:
    records = []
    for path in paths:
        report.files.append(path.name)
        with open(path, encoding="utf-8") as handle:
            for line_no, line in enumerate(handle, start=1):
                if not line.strip():
                    continue
                try:
                    records.append(parse_record(line, path.name, line_no))
                except MalformedInputError as exc:
                    report.parse_errors.append(str(exc))
    return records


def build_graph(records: list[dict], report: IngestReport | None = None,
                registry: ReporterRegistry | None = None) -> tuple[KnowledgeGraph, IngestReport]:
    """Assemble and freeze a graph from parsed records, collecting violations."""
    report = report or IngestReport()
    report.record_count += len(records)
    graph = KnowledgeGraph()
    rank = {kind: i for i, kind in enumerate(_KIND_ORDER)}
    ordered = sorted(records, key=lambda record: rank[record["kind"]])

    def admit(action, description: str) -> bool:
        try:
            action()
            return True
        except (EngineError, ValueError, TypeError) as exc:
            report.schema_violations.append(f"{description}: {exc}")
            return False

    for record in ordered:
        kind = record["kind"]
        if kind == "court":
            admit(
                lambda: graph.add_node(
                    CourtNode(record["court_id"], record["name"], record.get("appeals_to"))
                ),
                f"court {record.get('court_id')!r}",
            )
        elif kind == "appeal":
            admit(
                lambda: graph.set_appeal(record["court_id"], record["appeals_to"]),
                f"appeal {record.get('court_id')!r} -> {record.get('appeals_to')!r}",
            )
        elif kind == "case":
            court_id = record["court_id"]
            if isinstance(court_id, str) and court_id and not graph.has_court(court_id):
                graph.add_node(CourtNode(court_id, court_id, None))
                report.auto_created_courts.append(court_id)
            admit(
                lambda: graph.add_node(
                    CaseNode(
                        record["case_id"],
                        record["name"],
                        int(record["year"]),
                        court_id,
                        tuple(record.get("reporter_cites", ())),
                    )
                ),
                f"case {record.get('case_id')!r}",
            )
        elif kind == "opinion":
            admit(
                lambda: graph.add_node(
                    OpinionNode(
                        record["opinion_id"],
                        record["case_id"],
                        record["opinion_kind"],
                        record["full_text"],
                    )
                ),
                f"opinion {record.get('opinion_id')!r}",
            )
        elif kind == "passage":
            admit(
                lambda: graph.add_node(
                    FactorPassage(
                        record["passage_id"], record["opinion_id"], record["factor"], record["text"]
                    )
                ),
                f"passage {record.get('passage_id')!r}",
            )
        elif kind == "citation":
            try:
                graph.add_citation(record["from_case"], record["to_case"])
            except SelfCitationError:
                report.self_citations += 1
            except (EngineError, ValueError, TypeError) as exc:
                report.schema_violations.append(
                    f"citation {record.get('from_case')!r} -> {record.get('to_case')!r}: {exc}"
                )

    # Extract citations from opinion texts, resolved via reporter metadata.
    index = index_from_graph(graph, registry)
    report.ambiguous_citation_keys.extend(index.ambiguous)
    opinions = [graph.opinion(opinion_id) for opinion_id in graph.opinion_ids]
    edges, diagnostics = build_citation_edges(opinions, index, registry)
    for from_case, to_case in edges:
        graph.add_citation(from_case, to_case)
    report.self_citations += diagnostics.self_citations
    report.unresolved_citations.extend(str(citation) for citation in diagnostics.unresolved)

    report.schema_violations.extend(graph.validate())
    graph.freeze()
    report.citation_edges = len(graph.citation_edges())
    report.stats = graph.corpus_stats()
    return graph, report


def ingest_directory(corpus_dir: str | Path, registry: ReporterRegistry | None = None) -> tuple[KnowledgeGraph, IngestReport]:
    """Load every .jsonl file under a directory (sorted, non-recursive)."""
    corpus_dir = Path(corpus_dir)
    report = IngestReport()
    paths = sorted(corpus_dir.glob("*.jsonl")) if corpus_dir.is_dir() else []
    if corpus_dir.is_file():
        paths = [corpus_dir]
    if not paths:
        report.parse_errors.append(f"no corpus records found under {corpus_dir}")
        return KnowledgeGraph().freeze(), report
    records = _collect_records(paths, report)
    if not records:
        report.parse_errors.append(f"no records in {len(paths)} file(s)")
        return KnowledgeGraph().freeze(), report
    return build_graph(records, report, registry)
