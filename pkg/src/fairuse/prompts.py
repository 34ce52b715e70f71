"""Deterministic prompt assembly.

Every builder here is a pure template: same inputs, byte-identical prompt.
Generation itself happens (if at all) behind the pluggable completion client;
nothing in this module talks to a model.
"""
from __future__ import annotations

from typing import Mapping, Sequence

from .errors import EmptyInputError
from .graph import Factor, OpinionNode

#: Keyword templates steering each factor-specific sub-query.
FACTOR_QUERY_TEMPLATES: dict[Factor, str] = {
    Factor.PURPOSE: (
        "purpose and character of the use, transformative use, commercial or "
        "nonprofit educational purpose, criticism, comment, parody"
    ),
    Factor.NATURE: (
        "nature of the copyrighted work, creative or factual work, published "
        "or unpublished status"
    ),
    Factor.AMOUNT: (
        "amount and substantiality of the portion used in relation to the "
        "copyrighted work as a whole, heart of the work"
    ),
    Factor.MARKET: (
        "effect of the use upon the potential market for or value of the "
        "copyrighted work, market substitution, licensing harm"
    ),
}

_EXTRACTION_SECTIONS = (
    Factor.FACTS,
    Factor.PURPOSE,
    Factor.NATURE,
    Factor.AMOUNT,
    Factor.MARKET,
    Factor.CONCLUSION,
)

NOT_EXTRACTED_MARK = "not extracted"


def build_factor_extraction_prompt(opinion: OpinionNode) -> str:
    """Prompt an LLM to pull verbatim factor passages out of one opinion."""
    sections = "\n".join(f"- {factor.value}" for factor in _EXTRACTION_SECTIONS)
    return (
        "You are annotating a judicial opinion for fair use analysis.\n"
        "For each section listed below, return the passages of the opinion that "
        "discuss it. Return direct quotations from the opinion text, verbatim "
        "and unabridged. Do not paraphrase, summarize, or correct the text. If "
        "a section is not discussed, return an empty list for it.\n\n"
        f"Sections:\n{sections}\n\n"
        "Respond as JSON mapping each section name to a list of quoted "
        "passages.\n\n"
        f"Opinion ({opinion.opinion_id}, {opinion.opinion_kind.value}):\n"
        "---\n"
        f"{opinion.full_text}\n"
        "---\n"
    )


def build_case_analysis_prompt(
    dispute_text: str, case_name: str, passages_by_factor: Mapping[Factor, Sequence[str]]
) -> str:
    """Interleave the dispute with one precedent's factor passages."""
    if not dispute_text:
        raise EmptyInputError("dispute text is empty")
    blocks = []
    for factor in _EXTRACTION_SECTIONS:
        texts = list(passages_by_factor.get(factor, ()))
        if texts:
            body = "\n".join(f"> {text}" for text in texts)
        else:
            body = f"({NOT_EXTRACTED_MARK})"
        blocks.append(f"[{factor.value}]\n{body}")
    joined = "\n\n".join(blocks)
    return (
        "Analyze how the precedent below bears on the dispute, factor by "
        "factor. Ground every point in the quoted passages; say so explicitly "
        "when a factor was not extracted.\n\n"
        f"Dispute:\n{dispute_text}\n\n"
        f"Precedent: {case_name}\n"
        f"{joined}\n"
    )


def build_synthesis_prompt(analyses: Sequence[str]) -> str:
    """Combine per-case analyses into one structured four-factor evaluation."""
    if not analyses:
        raise EmptyInputError("no analyses to synthesize")
    blocks = "\n\n".join(
        f"=== Case analysis {rank} ===\n{analysis}" for rank, analysis in enumerate(analyses, start=1)
    )
    return (
        "Below are per-case fair use analyses, strongest retrieval match "
        "first. Synthesize them into a single structured evaluation of the "
        "dispute: one section per statutory factor (Purpose, Nature, Amount, "
        "Market), each weighing the precedents against the dispute, followed "
        "by an overall conclusion with the key authorities.\n\n"
        f"{blocks}\n"
    )
