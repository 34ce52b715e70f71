"""Seeded synthetic corpora for tests, demos, and benchmarks.

No real case text is shipped or fetched; these generators build structurally
realistic corpora (court hierarchy, multi-opinion cases, factor passages,
reporter citations planted in opinion prose) from word banks. Everything is
deterministic under the seed.
"""
from __future__ import annotations

import random

from .graph import Factor, OpinionKind

_PLAINTIFFS = (
    "Alder Press", "Brightwell Media", "Cadence Records", "Dovetail Films",
    "Ember Studios", "Fairmont Pictures", "Gossamer Press", "Halcyon Music",
    "Ironwood Publishing", "Juniper Broadcasting", "Kestrel Labs", "Lumen Arts",
)
_DEFENDANTS = (
    "Marlowe", "Northgate Video", "Oriel Software", "Pemberton", "Quarry Media",
    "Rosewood Network", "Sablewood", "Tallis Group", "Umberline", "Vantage Clips",
    "Westcliff", "Yarrow Digital",
)

#: Vocabulary for ordinary dispute-like passages; queries draw from this pool.
QUERY_VOCAB = (
    "parody", "remix", "video", "commentary", "critique", "channel", "creator",
    "upload", "takedown", "montage", "clip", "stream", "review", "reaction",
    "footage", "soundtrack", "thumbnail", "trailer", "gameplay", "tutorial",
    "excerpt", "broadcast", "podcast", "sampling", "mashup", "screenshot",
    "caption", "subtitles", "compilation", "fanfiction", "cover", "karaoke",
)

#: Vocabulary for landmark-style passages; disjoint from QUERY_VOCAB so text
#: similarity and citation authority can be anti-correlated by construction.
AUTHORITY_VOCAB = (
    "doctrine", "jurisprudence", "statutory", "interpretive", "precedential",
    "appellate", "certiorari", "remand", "injunction", "adjudication",
    "balancing", "burden", "presumption", "dispositive", "controlling",
    "persuasive", "holding", "dictum", "concurrence", "framework",
    "transformation", "substantiality", "derivative", "licensing", "equitable",
    "infringement", "damages", "liability", "analysis", "weighing",
)

_FACTOR_LEADS = {
    Factor.FACTS: "The record shows",
    Factor.PURPOSE: "Regarding the purpose and character of the use,",
    Factor.NATURE: "As to the nature of the copyrighted work,",
    Factor.AMOUNT: "Concerning the amount and substantiality taken,",
    Factor.MARKET: "On the effect upon the potential market,",
    Factor.CONCLUSION: "Weighing the factors together,",
}


def _sentence(rng: random.Random, vocab: tuple[str, ...], lead: str, words: int) -> str:
    body = " ".join(rng.choice(vocab) for _ in range(words))
    return f"{lead} the {body} weighed in the analysis."


def _passage_text(rng: random.Random, vocab: tuple[str, ...], factor: Factor) -> str:
    sentences = [
        _sentence(rng, vocab, _FACTOR_LEADS[factor], rng.randint(4, 8))
        for _ in range(rng.randint(2, 4))
    ]
    return " ".join(sentences)


def _case_name(rng: random.Random) -> str:
    return f"{rng.choice(_PLAINTIFFS)} v. {rng.choice(_DEFENDANTS)}"


def _courts(n_circuits: int = 3, districts_per_circuit: int = 2) -> list[dict]:
    records = [{"kind": "court", "court_id": "scotus", "name": "Supreme Court"}]
    for c in range(1, n_circuits + 1):
        records.append({"kind": "court", "court_id": f"ca{c}", "name": f"Court of Appeals {c}"})
        records.append({"kind": "appeal", "court_id": f"ca{c}", "appeals_to": "scotus"})
        for d in range(1, districts_per_circuit + 1):
            court_id = f"d{c}{d}"
            records.append({"kind": "court", "court_id": court_id, "name": f"District {c}-{d}"})
            records.append({"kind": "appeal", "court_id": court_id, "appeals_to": f"ca{c}"})
    return records


def _reporter_for(court_id: str) -> str:
    if court_id == "scotus":
        return "U.S."
    if court_id.startswith("ca"):
        return "F.3d"
    return "F. Supp. 2d"


def make_corpus(
    n_cases: int = 10,
    seed: int = 7,
    n_landmarks: int = 0,
    citation_density: float = 0.25,
    explicit_citations: bool = False,
) -> list[dict]:
    """Build corpus records for ``n_cases`` cases over a three-tier hierarchy.

    The first ``n_landmarks`` cases are apex-court decisions written from
    AUTHORITY_VOCAB and cited by roughly every other case; the rest are
    lower-court decisions written from QUERY_VOCAB with sparse citations.
    With ``explicit_citations`` the edges are also emitted as citation
    records; otherwise they exist only as reporter strings planted in the
    opinion prose, exercising extraction and resolution at ingest.
    """
    rng = random.Random(seed)
    records = _courts()
    court_ids = [r["court_id"] for r in records if r["kind"] == "court"]
    lower_courts = [c for c in court_ids if c != "scotus"]

    cases = []
    for i in range(n_cases):
        landmark = i < n_landmarks
        court_id = "scotus" if landmark else rng.choice(lower_courts)
        reporter = _reporter_for(court_id)
        case = {
            "case_id": f"case-{i:03d}",
            "name": _case_name(rng),
            "year": rng.randint(1978, 2024),
            "court_id": court_id,
            "cite": (100 + i, reporter, 100 + 7 * i),
            "landmark": landmark,
        }
        cases.append(case)
        volume, rep, page = case["cite"]
        records.append(
            {
                "kind": "case",
                "case_id": case["case_id"],
                "name": case["name"],
                "year": case["year"],
                "court_id": court_id,
                "reporter_cites": [f"{volume} {rep} {page}"],
            }
        )

    targets_of: dict[str, list[dict]] = {}
    for case in cases:
        targets: list[dict] = []
        if not case["landmark"] and n_landmarks:
            count = rng.randint(1, min(3, n_landmarks))
            targets.extend(rng.sample(cases[:n_landmarks], count))
        for other in cases:
            if other is case or other in targets or other["landmark"]:
                continue
            if rng.random() < citation_density / max(1, n_cases - n_landmarks):
                targets.append(other)
        targets_of[case["case_id"]] = targets

    for case in cases:
        vocab = AUTHORITY_VOCAB if case["landmark"] else QUERY_VOCAB
        opinion_count = 2 if rng.random() < 0.3 else 1
        for j in range(opinion_count):
            opinion_id = f"{case['case_id']}-op{j}"
            kind = OpinionKind.MAJORITY if j == 0 else rng.choice(
                (OpinionKind.CONCURRENCE, OpinionKind.DISSENT)
            )
            paragraphs = [
                _sentence(rng, vocab, "This dispute concerns", rng.randint(5, 9))
            ]
            if j == 0:
                for target in targets_of[case["case_id"]]:
                    volume, rep, page = target["cite"]
                    paragraphs.append(
                        f"As held in {target['name']}, {volume} {rep} {page} "
                        f"({target['year']}), the factors must be weighed together."
                    )
            records.append(
                {
                    "kind": "opinion",
                    "opinion_id": opinion_id,
                    "case_id": case["case_id"],
                    "opinion_kind": kind.value,
                    "full_text": "\n\n".join(paragraphs),
                }
            )
            for factor in Factor:
                records.append(
                    {
                        "kind": "passage",
                        "passage_id": f"{opinion_id}-{factor.value.lower()}",
                        "opinion_id": opinion_id,
                        "factor": factor.value,
                        "text": _passage_text(rng, vocab, factor),
                    }
                )

    if explicit_citations:
        for case in cases:
            for target in targets_of[case["case_id"]]:
                records.append(
                    {
                        "kind": "citation",
                        "from_case": case["case_id"],
                        "to_case": target["case_id"],
                    }
                )
    return records


def make_queries(count: int = 20, seed: int = 11) -> list[str]:
    """Dispute descriptions drawn from QUERY_VOCAB, one paragraph each."""
    rng = random.Random(seed)
    queries = []
    for _ in range(count):
        words = " ".join(rng.choice(QUERY_VOCAB) for _ in range(rng.randint(8, 14)))
        queries.append(
            f"Our client received a takedown notice after posting a {words} "
            "and believes the use was permissible."
        )
    return queries


def write_corpus(records: list[dict], path) -> None:
    """Write records as one JSONL file."""
    import json
    from pathlib import Path

    with open(Path(path), "w", encoding="utf-8") as handle:
        for record in records:
            handle.write(json.dumps(record, ensure_ascii=False, sort_keys=True) + "\n")
