"""Embedded typed property graph for the case-law corpus.

Nodes are cases, courts, opinions, and factor passages. Edges are case-to-case
citations, case-to-court assignments, and lower-to-higher court appeals. The
graph is built once by a single writer, frozen, and then shared read-only; a
frozen graph is safe to use from many threads.

Persistence is a line-delimited record file, one JSON object per line, with a
``kind`` discriminator: ``court``, ``appeal``, ``case``, ``opinion``,
``passage``, ``citation``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import IO, Iterable, Iterator

from .errors import (
    CyclicAppealError,
    DanglingReferenceError,
    DuplicateIdError,
    FrozenGraphError,
    InvalidFactorKindError,
    MalformedInputError,
    SelfCitationError,
    UnknownCaseError,
)


class Factor(str, Enum):
    """Extraction targets: the four statutory factors plus facts and conclusion."""

    FACTS = "Facts"
    PURPOSE = "Purpose"
    NATURE = "Nature"
    AMOUNT = "Amount"
    MARKET = "Market"
    CONCLUSION = "Conclusion"

    @classmethod
    def coerce(cls, value: "Factor | str") -> "Factor":
        if isinstance(value, cls):
            return value
        try:
            return cls(value)
        except ValueError:
            raise InvalidFactorKindError(f"unknown factor kind: {value!r}") from None


#: The four factors a dispute is analyzed against (facts/conclusion are
#: extraction targets only, not query dimensions).
QUERY_FACTORS = (Factor.PURPOSE, Factor.NATURE, Factor.AMOUNT, Factor.MARKET)


class OpinionKind(str, Enum):
    MAJORITY = "majority"
    CONCURRENCE = "concurrence"
    DISSENT = "dissent"
    APPELLATE = "appellate"

    @classmethod
    def coerce(cls, value: "OpinionKind | str") -> "OpinionKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(value)
        except ValueError:
            raise ValueError(f"unknown opinion kind: {value!r}") from None


YEAR_MIN = 1976
YEAR_MAX = 2100


@dataclass(frozen=True)
class CourtNode:
    court_id: str
    name: str
    appeals_to: str | None = None


@dataclass(frozen=True)
class CaseNode:
    case_id: str
    name: str
    year: int
    court_id: str
    #: Reporter citations identifying this case (e.g. "801 F.3d 1126"); used
    #: to build the citation-resolution index. Optional corpus metadata.
    reporter_cites: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "reporter_cites", tuple(self.reporter_cites))


@dataclass(frozen=True)
class OpinionNode:
    opinion_id: str
    case_id: str
    opinion_kind: OpinionKind
    full_text: str

    def __post_init__(self):
        object.__setattr__(self, "opinion_kind", OpinionKind.coerce(self.opinion_kind))


@dataclass(frozen=True)
class FactorPassage:
    passage_id: str
    opinion_id: str
    factor: Factor
    text: str

    def __post_init__(self):
        object.__setattr__(self, "factor", Factor.coerce(self.factor))
        if not self.text:
            raise ValueError(f"passage {self.passage_id!r} has empty text")


@dataclass(frozen=True)
class CorpusStats:
    case_count: int
    opinion_count: int
    court_count: int
    year_min: int | None
    year_max: int | None


class KnowledgeGraph:
    """In-memory store implementing the typed schema with citation edges."""

    def __init__(self):
        self._courts: dict[str, CourtNode] = {}
        self._cases: dict[str, CaseNode] = {}
        self._opinions: dict[str, OpinionNode] = {}
        self._passages: dict[str, FactorPassage] = {}
        self._opinions_by_case: dict[str, list[str]] = {}
        self._passages_by_opinion: dict[str, list[str]] = {}
        self._cite_out: dict[str, set[str]] = {}
        self._cite_in: dict[str, set[str]] = {}
        self._citation_order: list[tuple[str, str]] = []
        self._frozen = False

    # -- mutation ------------------------------------------------------------

    def _check_mutable(self):
        if self._frozen:
            raise FrozenGraphError("graph is frozen; mutation is not allowed")

    def add_node(self, node: CourtNode | CaseNode | OpinionNode | FactorPassage) -> str:
        """Add a typed node, enforcing referential integrity. Returns its id."""
        self._check_mutable()
        if isinstance(node, CourtNode):
            return self._add_court(node)
        if isinstance(node, CaseNode):
            return self._add_case(node)
        if isinstance(node, OpinionNode):
            return self._add_opinion(node)
        if isinstance(node, FactorPassage):
            return self._add_passage(node)
        raise TypeError(f"not a graph node: {type(node).__name__}")

    def _add_court(self, court: CourtNode) -> str:
        if court.court_id in self._courts:
            raise DuplicateIdError(f"court {court.court_id!r} already exists")
        target = court.appeals_to
        if target is not None:
            if target == court.court_id:
                raise CyclicAppealError(f"court {court.court_id!r} cannot appeal to itself")
            if target not in self._courts:
                raise DanglingReferenceError(
                    f"court {court.court_id!r} appeals to missing court {target!r}"
                )
        self._courts[court.court_id] = court
        return court.court_id

    def set_appeal(self, court_id: str, appeals_to: str) -> None:
        """Point an existing court at its reviewing court (at most one target)."""
        self._check_mutable()
        if court_id not in self._courts:
            raise DanglingReferenceError(f"unknown court {court_id!r}")
        if appeals_to not in self._courts:
            raise DanglingReferenceError(f"unknown court {appeals_to!r}")
        current = self._courts[court_id].appeals_to
        if current is not None and current != appeals_to:
            raise DuplicateIdError(
                f"court {court_id!r} already appeals to {current!r}"
            )
        # Walking up from the target must not come back to court_id.
        seen = {court_id}
        probe: str | None = appeals_to
        while probe is not None:
            if probe in seen:
                raise CyclicAppealError(
                    f"appeal {court_id!r} -> {appeals_to!r} would create a cycle"
                )
            seen.add(probe)
            probe = self._courts[probe].appeals_to
        self._courts[court_id] = replace(self._courts[court_id], appeals_to=appeals_to)

    def _add_case(self, case: CaseNode) -> str:
        if case.case_id in self._cases:
            raise DuplicateIdError(f"case {case.case_id!r} already exists")
        if case.court_id not in self._courts:
            raise DanglingReferenceError(
                f"case {case.case_id!r} decided in missing court {case.court_id!r}"
            )
        self._cases[case.case_id] = case
        self._opinions_by_case[case.case_id] = []
        self._cite_out[case.case_id] = set()
        self._cite_in[case.case_id] = set()
        return case.case_id

    def _add_opinion(self, opinion: OpinionNode) -> str:
        if opinion.opinion_id in self._opinions:
            raise DuplicateIdError(f"opinion {opinion.opinion_id!r} already exists")
        if opinion.case_id not in self._cases:
            raise DanglingReferenceError(
                f"opinion {opinion.opinion_id!r} belongs to missing case {opinion.case_id!r}"
            )
        self._opinions[opinion.opinion_id] = opinion
        self._opinions_by_case[opinion.case_id].append(opinion.opinion_id)
        self._passages_by_opinion[opinion.opinion_id] = []
        return opinion.opinion_id

    def _add_passage(self, passage: FactorPassage) -> str:
        if passage.passage_id in self._passages:
            raise DuplicateIdError(f"passage {passage.passage_id!r} already exists")
        if passage.opinion_id not in self._opinions:
            raise DanglingReferenceError(
                f"passage {passage.passage_id!r} belongs to missing opinion {passage.opinion_id!r}"
            )
        self._passages[passage.passage_id] = passage
        self._passages_by_opinion[passage.opinion_id].append(passage.passage_id)
        return passage.passage_id

    def add_citation(self, from_case: str, to_case: str) -> None:
        """Record a citation edge; repeated pairs collapse to one edge."""
        self._check_mutable()
        if from_case == to_case:
            raise SelfCitationError(f"case {from_case!r} cannot cite itself")
        for case_id in (from_case, to_case):
            if case_id not in self._cases:
                raise DanglingReferenceError(f"citation endpoint {case_id!r} is not a known case")
        if to_case in self._cite_out[from_case]:
            return
        self._cite_out[from_case].add(to_case)
        self._cite_in[to_case].add(from_case)
        self._citation_order.append((from_case, to_case))

    def freeze(self) -> "KnowledgeGraph":
        """Mark the graph immutable. Returns self for chaining."""
        self._frozen = True
        return self

    @property
    def frozen(self) -> bool:
        return self._frozen

    # -- lookup ----------------------------------------------------------------

    def court(self, court_id: str) -> CourtNode:
        try:
            return self._courts[court_id]
        except KeyError:
            raise DanglingReferenceError(f"unknown court {court_id!r}") from None

    def case(self, case_id: str) -> CaseNode:
        try:
            return self._cases[case_id]
        except KeyError:
            raise UnknownCaseError(f"unknown case {case_id!r}") from None

    def opinion(self, opinion_id: str) -> OpinionNode:
        try:
            return self._opinions[opinion_id]
        except KeyError:
            raise DanglingReferenceError(f"unknown opinion {opinion_id!r}") from None

    def passage(self, passage_id: str) -> FactorPassage:
        try:
            return self._passages[passage_id]
        except KeyError:
            raise DanglingReferenceError(f"unknown passage {passage_id!r}") from None

    def has_case(self, case_id: str) -> bool:
        return case_id in self._cases

    def has_court(self, court_id: str) -> bool:
        return court_id in self._courts

    @property
    def case_ids(self) -> list[str]:
        return sorted(self._cases)

    @property
    def court_ids(self) -> list[str]:
        return sorted(self._courts)

    @property
    def opinion_ids(self) -> list[str]:
        return sorted(self._opinions)

    @property
    def passage_ids(self) -> list[str]:
        return sorted(self._passages)

    def opinions_of_case(self, case_id: str) -> list[OpinionNode]:
        self.case(case_id)
        return [self._opinions[oid] for oid in sorted(self._opinions_by_case[case_id])]

    def passages_of_opinion(self, opinion_id: str) -> list[FactorPassage]:
        self.opinion(opinion_id)
        return [self._passages[pid] for pid in sorted(self._passages_by_opinion[opinion_id])]

    def passages_of_case(self, case_id: str) -> list[FactorPassage]:
        out: list[FactorPassage] = []
        for opinion in self.opinions_of_case(case_id):
            out.extend(self.passages_of_opinion(opinion.opinion_id))
        return out

    def case_of_passage(self, passage_id: str) -> CaseNode:
        return self.case(self.opinion(self.passage(passage_id).opinion_id).case_id)

    def cited_cases(self, case_id: str, depth: int = 1) -> list[str]:
        """Cases reachable along citation edges within ``depth`` hops."""
        return self._neighbors(case_id, depth, self._cite_out)

    def citing_cases(self, case_id: str, depth: int = 1) -> list[str]:
        """Cases that cite ``case_id`` within ``depth`` hops."""
        return self._neighbors(case_id, depth, self._cite_in)

    def _neighbors(self, case_id: str, depth: int, adjacency: dict[str, set[str]]) -> list[str]:
        self.case(case_id)
        if depth < 1:
            return []
        found: set[str] = set()
        frontier = {case_id}
        for _ in range(depth):
            frontier = {nbr for node in frontier for nbr in adjacency[node]} - found
            if not frontier:
                break
            found |= frontier
        return sorted(found)

    def citation_edges(self) -> list[tuple[str, str]]:
        """All citation edges in insertion order."""
        return list(self._citation_order)

    def appeal_edges(self) -> list[tuple[str, str]]:
        """(lower court, higher court) pairs, sorted."""
        return sorted(
            (c.court_id, c.appeals_to) for c in self._courts.values() if c.appeals_to is not None
        )

    def court_depth(self, court_id: str) -> int:
        """Hops from this court up to its apex (apex courts are depth 0)."""
        depth = 0
        probe = self.court(court_id)
        while probe.appeals_to is not None:
            probe = self.court(probe.appeals_to)
            depth += 1
        return depth

    # -- statistics and validation ----------------------------------------------

    def corpus_stats(self) -> CorpusStats:
        years = [case.year for case in self._cases.values()]
        return CorpusStats(
            case_count=len(self._cases),
            opinion_count=len(self._opinions),
            court_count=len(self._courts),
            year_min=min(years) if years else None,
            year_max=max(years) if years else None,
        )

    def validate(self) -> list[str]:
        """Full-scan schema check. Returns human-readable violations."""
        violations = []
        for case_id in self.case_ids:
            if not self._opinions_by_case[case_id]:
                violations.append(f"case {case_id!r} has no opinions")
            year = self._cases[case_id].year
            if not (YEAR_MIN <= year <= YEAR_MAX):
                violations.append(
                    f"case {case_id!r} year {year} outside {YEAR_MIN}-{YEAR_MAX}"
                )
        for court_id in self.court_ids:
            # set_appeal guarantees acyclicity; re-assert by bounded walk.
            probe: str | None = court_id
            for _ in range(len(self._courts) + 1):
                probe = self._courts[probe].appeals_to if probe is not None else None
                if probe is None:
                    break
            else:
                violations.append(f"court {court_id!r} appeal chain does not terminate")
        return violations

    # -- persistence ---------------------------------------------------------

    def to_records(self) -> Iterator[dict]:
        """Emit the corpus as dict records, parents before children."""
        for court in self._courts.values():
            yield {"kind": "court", "court_id": court.court_id, "name": court.name}
        for court in self._courts.values():
            if court.appeals_to is not None:
                yield {"kind": "appeal", "court_id": court.court_id, "appeals_to": court.appeals_to}
        for case in self._cases.values():
            record = {
                "kind": "case",
                "case_id": case.case_id,
                "name": case.name,
                "year": case.year,
                "court_id": case.court_id,
            }
            if case.reporter_cites:
                record["reporter_cites"] = list(case.reporter_cites)
            yield record
        for opinion in self._opinions.values():
            yield {
                "kind": "opinion",
                "opinion_id": opinion.opinion_id,
                "case_id": opinion.case_id,
                "opinion_kind": opinion.opinion_kind.value,
                "full_text": opinion.full_text,
            }
        for passage in self._passages.values():
            yield {
                "kind": "passage",
                "passage_id": passage.passage_id,
                "opinion_id": passage.opinion_id,
                "factor": passage.factor.value,
                "text": passage.text,
            }
        for from_case, to_case in self._citation_order:
            yield {"kind": "citation", "from_case": from_case, "to_case": to_case}


def export_records(graph: KnowledgeGraph, sink: str | Path | IO[str]) -> int:
    """Write the graph as UTF-8 JSON lines. Returns the record count."""
    count = 0
    if isinstance(sink, (str, Path)):
        with open(sink, "w", encoding="utf-8") as handle:
            return export_records(graph, handle)
    for record in graph.to_records():
        sink.write(json.dumps(record, ensure_ascii=False, sort_keys=True))
        sink.write("\n")
        count += 1
    return count


_REQUIRED_FIELDS = {
    "court": ("court_id", "name"),
    "appeal": ("court_id", "appeals_to"),
    "case": ("case_id", "name", "year", "court_id"),
    "opinion": ("opinion_id", "case_id", "opinion_kind", "full_text"),
    "passage": ("passage_id", "opinion_id", "factor", "text"),
    "citation": ("from_case", "to_case"),
}

#: Apply order. Within a kind, records keep file order; across kinds, parents
#: are applied before children so a well-formed file may interleave kinds.
_KIND_ORDER = ("court", "appeal", "case", "opinion", "passage", "citation")


def parse_record(line: str, source: str = "<memory>", line_no: int = 0) -> dict:
    """Parse and shape-check one corpus record line."""
    try:
        record = json.loads(line)
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"invalid JSON: {exc.msg}", source, line_no) from None
    if not isinstance(record, dict):
        raise MalformedInputError("record is not a JSON object", source, line_no)
    kind = record.get("kind")
    if kind not in _REQUIRED_FIELDS:
        raise MalformedInputError(f"unknown record kind: {kind!r}", source, line_no)
    for field_name in _REQUIRED_FIELDS[kind]:
        if field_name not in record:
            raise MalformedInputError(f"{kind} record missing field {field_name!r}", source, line_no)
    return record


def apply_record(graph: KnowledgeGraph, record: dict) -> None:
    """Apply one parsed record to a mutable graph."""
    kind = record["kind"]
    if kind == "court":
        graph.add_node(CourtNode(record["court_id"], record["name"], record.get("appeals_to")))
    elif kind == "appeal":
        graph.set_appeal(record["court_id"], record["appeals_to"])
    elif kind == "case":
        graph.add_node(
            CaseNode(
                record["case_id"],
                record["name"],
                int(record["year"]),
                record["court_id"],
                tuple(record.get("reporter_cites", ())),
            )
        )
    elif kind == "opinion":
        graph.add_node(
            OpinionNode(
                record["opinion_id"], record["case_id"], record["opinion_kind"], record["full_text"]
            )
        )
    elif kind == "passage":
        graph.add_node(
            FactorPassage(record["passage_id"], record["opinion_id"], record["factor"], record["text"])
        )
    elif kind == "citation":
        graph.add_citation(record["from_case"], record["to_case"])
    else:  # pragma: no cover - parse_record rejects unknown kinds
        raise MalformedInputError(f"unknown record kind: {kind!r}")


def import_records(source: str | Path | IO[str] | Iterable[str], name: str | None = None) -> KnowledgeGraph:
    """Rebuild a graph from JSON lines. Strict: any bad record raises.

    ``import_records(export_records(g))`` is node- and edge-identical to ``g``.
    """
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as handle:
            return import_records(handle, name=str(source))
    source_name = name or "<stream>"
    parsed: list[tuple[int, dict]] = []
    for line_no, line in enumerate(source, start=1):
        if not line.strip():
            continue
        parsed.append((line_no, parse_record(line, source_name, line_no)))
    graph = KnowledgeGraph()
    rank = {kind: i for i, kind in enumerate(_KIND_ORDER)}
    parsed.sort(key=lambda item: rank[item[1]["kind"]])
    for line_no, record in parsed:
        try:
            apply_record(graph, record)
        except (ValueError, TypeError) as exc:
            raise MalformedInputError(str(exc), source_name, line_no) from None
    return graph.freeze()
