"""Reporter-citation extraction and resolution.

Finds volume-reporter-page citations (e.g. "801 F.3d 1126 (9th Cir. 2015)")
in opinion text, normalizes the reporter against a registry, and resolves
citations to known cases to produce the case-to-case citation network.

Id-style references ("Id.", "supra"), signal phrases, and statute citations
are out of scope; the network only needs case-to-case edges.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Mapping

from .errors import MalformedInputError
from .graph import KnowledgeGraph, OpinionNode

#: Canonical reporter -> spacing/punctuation variants seen in the wild.
DEFAULT_REPORTERS: dict[str, tuple[str, ...]] = {
    "U.S.": ("U. S.",),
    "S. Ct.": ("S.Ct.",),
    "L. Ed.": ("L.Ed.",),
    "L. Ed. 2d": ("L.Ed.2d", "L. Ed.2d"),
    "F.": (),
    "F.2d": ("F. 2d",),
    "F.3d": ("F. 3d",),
    "F.4th": ("F. 4th",),
    "F. Supp.": ("F.Supp.",),
    "F. Supp. 2d": ("F.Supp.2d", "F. Supp.2d"),
    "F. Supp. 3d": ("F.Supp.3d", "F. Supp.3d"),
    "F. App'x": ("Fed. Appx.", "F. Appx."),
    "A.2d": ("A. 2d",),
    "A.3d": ("A. 3d",),
    "P.2d": ("P. 2d",),
    "P.3d": ("P. 3d",),
    "N.E.2d": ("N.E. 2d",),
    "N.Y.S.2d": ("N.Y.S. 2d",),
    "So. 2d": ("So.2d",),
    "S.W.3d": ("S.W. 3d",),
    "Cal. Rptr. 3d": ("Cal.Rptr.3d",),
    "U.S.P.Q.2d": ("U.S.P.Q. 2d",),
}


@dataclass(frozen=True)
class Citation:
    """One parsed reporter citation with its location in the source text."""

    volume: int
    reporter: str
    page: int
    year: int | None = None
    court_hint: str | None = None
    case_name_hint: str | None = None
    span: tuple[int, int] = (0, 0)

    @property
    def key(self) -> tuple[int, str, int]:
        return (self.volume, self.reporter, self.page)

    def __str__(self) -> str:
        return f"{self.volume} {self.reporter} {self.page}"


@dataclass(frozen=True)
class NearMiss:
    """A volume-reporter-page shape whose reporter is not in the registry."""

    text: str
    span: tuple[int, int]
    reason: str


class ReporterRegistry:
    """Maps reporter spelling variants to canonical keys and compiles the scanner."""

    def __init__(self, reporters: Mapping[str, Iterable[str]] | None = None):
        table = dict(DEFAULT_REPORTERS) if reporters is None else {
            canonical: tuple(variants) for canonical, variants in reporters.items()
        }
        self._canonical: dict[str, str] = {}
        for canonical, variants in table.items():
            self._canonical[canonical] = canonical
            for variant in variants:
                self._canonical[variant] = canonical
        forms = sorted(self._canonical, key=len, reverse=True)
        # A literal space in a registry form tolerates any whitespace run.
        alternation = "|".join(re.escape(form).replace("\\ ", r"\s+") for form in forms)
        self._pattern = re.compile(
            rf"(?<![\w.§])(?P<volume>[1-9]\d{{0,3}})\s+(?P<reporter>{alternation})"
            rf"\s*(?P<page>[1-9]\d{{0,4}})"
            rf"(?:\s*\((?P<paren>[^()]{{0,60}}?)\s*(?P<year>1[6-9]\d\d|20\d\d)\))?"
        )

    def canonical(self, form: str) -> str | None:
        """Canonical key for a matched reporter string, if registered."""
        return self._canonical.get(re.sub(r"\s+", " ", form))

    @property
    def canonical_keys(self) -> list[str]:
        return sorted(set(self._canonical.values()))

    @property
    def pattern(self) -> re.Pattern:
        return self._pattern


def load_registry(source: str | Path | IO[str]) -> ReporterRegistry:
    """Read a registry file: one JSON object per line, {"canonical", "variants"}."""
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as handle:
            return load_registry(handle)
    table: dict[str, tuple[str, ...]] = {}
    for line_no, line in enumerate(source, start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
            canonical = record["canonical"]
            variants = tuple(record.get("variants", ()))
        except (json.JSONDecodeError, KeyError, TypeError):
            raise MalformedInputError("bad registry record", "<registry>", line_no) from None
        table[canonical] = variants
    return ReporterRegistry(table)


# Case-name window: "Lenz v. Universal Music Corp.," immediately before the
# volume. Party tokens must be capitalized (connectors aside) so leading prose
# ("See", "As held in") stays out of the hint. The window never crosses a
# blank line, which keeps extraction local to the paragraph the citation sits
# in.
_NAME_TOKEN = r"(?:[A-Z][\w.'&-]*|of|the|for|de|la)"
_NAME_SIDE = rf"[A-Z][\w.'&-]*(?:\s+{_NAME_TOKEN})*"
_NAME_RE = re.compile(
    rf"(?P<name>{_NAME_SIDE}\s+v\.?\s+{_NAME_SIDE}(?:,\s+(?:Inc|Corp|LLC|Ltd|Co)\.?)?),?\s*$"
)
_NAME_WINDOW = 120

# Near-miss shape: looks like a citation but the reporter is unregistered.
_GENERIC_RE = re.compile(
    r"(?<![\w.§])([1-9]\d{0,3})\s+([A-Z][A-Za-z0-9.' ]{0,18}?\.)\s*([1-9]\d{0,4})(?![\d.])"
)


def _name_hint(text: str, start: int) -> str | None:
    window_start = max(0, start - _NAME_WINDOW)
    window = text[window_start:start]
    # Stay inside the current paragraph.
    cut = window.rfind("\n\n")
    if cut >= 0:
        window = window[cut + 2 :]
    match = _NAME_RE.search(window)
    return match.group("name") if match else None


def extract_citations(text: str, registry: ReporterRegistry | None = None) -> list[Citation]:
    """All registry-backed citations in source order, spans non-overlapping."""
    citations, _ = extract_with_diagnostics(text, registry)
    return citations


def extract_with_diagnostics(
    text: str, registry: ReporterRegistry | None = None
) -> tuple[list[Citation], list[NearMiss]]:
    """Like :func:`extract_citations`, also reporting near-miss shapes."""
    registry = registry or ReporterRegistry()
    citations: list[Citation] = []
    taken: list[tuple[int, int]] = []
    for match in registry.pattern.finditer(text):
        reporter = registry.canonical(match.group("reporter"))
        if reporter is None:  # pragma: no cover - alternation admits only registry forms
            continue
        paren = (match.group("paren") or "").strip() or None
        year = int(match.group("year")) if match.group("year") else None
        span = (match.start("volume"), match.end())
        citations.append(
            Citation(
                volume=int(match.group("volume")),
                reporter=reporter,
                page=int(match.group("page")),
                year=year,
                court_hint=paren,
                case_name_hint=_name_hint(text, match.start("volume")),
                span=span,
            )
        )
        taken.append(span)
    near_misses = [
        NearMiss(text=m.group(0), span=m.span(), reason="unknown reporter")
        for m in _GENERIC_RE.finditer(text)
        if not any(start < m.end() and m.start() < end for start, end in taken)
    ]
    return citations, near_misses


def parse_reporter_cite(text: str, registry: ReporterRegistry | None = None) -> Citation | None:
    """Parse a bare citation string like "801 F.3d 1126"; None if not exactly one."""
    found = extract_citations(text, registry)
    return found[0] if len(found) == 1 else None


@dataclass
class CitationIndex:
    """Exact-key lookup from (volume, reporter, page) to a case id.

    Keys claimed by more than one case are unusable and dropped; each
    collision is kept as an AmbiguousKey-style diagnostic string.
    """

    by_key: dict[tuple[int, str, int], str] = field(default_factory=dict)
    ambiguous: list[str] = field(default_factory=list)
    unparsed: list[str] = field(default_factory=list)

    def resolve(self, citation: Citation) -> str | None:
        return self.by_key.get(citation.key)


def build_citation_index(
    case_cites: Mapping[str, Iterable[str]], registry: ReporterRegistry | None = None
) -> CitationIndex:
    """Index corpus metadata (case id -> reporter cite strings) by exact key."""
    registry = registry or ReporterRegistry()
    index = CitationIndex()
    poisoned: set[tuple[int, str, int]] = set()
    for case_id in sorted(case_cites):
        for cite_text in case_cites[case_id]:
            citation = parse_reporter_cite(cite_text, registry)
            if citation is None:
                index.unparsed.append(f"{case_id}: {cite_text!r}")
                continue
            key = citation.key
            if key in poisoned:
                index.ambiguous.append(f"AmbiguousKey {citation}: also claimed by {case_id}")
                continue
            if key in index.by_key and index.by_key[key] != case_id:
                index.ambiguous.append(
                    f"AmbiguousKey {citation}: claimed by {index.by_key[key]} and {case_id}"
                )
                del index.by_key[key]
                poisoned.add(key)
                continue
            index.by_key[key] = case_id
    return index


def resolve(citation: Citation, index: CitationIndex) -> str | None:
    """Exact-key match to a case id; None when unresolved."""
    return index.resolve(citation)


@dataclass
class EdgeBuildDiagnostics:
    resolved: int = 0
    self_citations: int = 0
    deduped: int = 0
    unresolved: list[Citation] = field(default_factory=list)


def build_citation_edges(
    opinions: Iterable[OpinionNode],
    index: CitationIndex,
    registry: ReporterRegistry | None = None,
) -> tuple[list[tuple[str, str]], EdgeBuildDiagnostics]:
    """Extract citations from opinion texts and resolve them to (citing, cited) edges.

    Citations in every opinion kind count toward the owning case's edges.
    Parallel citations to one target dedupe; self-citations are dropped and
    counted.
    """
    registry = registry or ReporterRegistry()
    diagnostics = EdgeBuildDiagnostics()
    edges: list[tuple[str, str]] = []
    seen: set[tuple[str, str]] = set()
    for opinion in opinions:
        for citation in extract_citations(opinion.full_text, registry):
            target = index.resolve(citation)
            if target is None:
                diagnostics.unresolved.append(citation)
                continue
            diagnostics.resolved += 1
            if target == opinion.case_id:
                diagnostics.self_citations += 1
                continue
            edge = (opinion.case_id, target)
            if edge in seen:
                diagnostics.deduped += 1
                continue
            seen.add(edge)
            edges.append(edge)
    return edges, diagnostics


def index_from_graph(graph: KnowledgeGraph, registry: ReporterRegistry | None = None) -> CitationIndex:
    """Build the resolution index from the reporter cites stored on cases."""
    return build_citation_index(
        {case_id: graph.case(case_id).reporter_cites for case_id in graph.case_ids}, registry
    )
