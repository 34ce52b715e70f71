"""Sentence-boundary chunking of factor passages.

Passages are already factor-scoped paragraphs, so chunks pack whole sentences
greedily up to a token budget; a boundary never splits a sentence. Token
counts are whitespace estimates, which is all the budget needs.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .graph import Factor, FactorPassage

DEFAULT_MAX_TOKENS = 256

# Split after sentence punctuation followed by whitespace and an uppercase
# letter or opening quote. Deliberately conservative: abbreviations common in
# case prose ("v.", "Corp.", "Cir.", "U.S.") must not split, and an unsplit
# pair of sentences is harmless while a mid-sentence split is not.
_BOUNDARY_RE = re.compile(r"(?<=[.!?])[\)\"']*\s+(?=[\"'(]?[A-Z])")
_ABBREVIATIONS = {
    "v.", "vs.", "no.", "nos.", "mr.", "mrs.", "ms.", "dr.", "jr.", "sr.",
    "inc.", "corp.", "co.", "ltd.", "cir.", "ct.", "supp.", "app.", "div.",
    "dist.", "rev.", "art.", "sec.", "fig.", "al.", "seq.", "cf.", "ed.",
}


def estimate_tokens(text: str) -> int:
    return len(text.split())


def split_sentences(text: str) -> list[str]:
    """Split prose into sentences, never breaking after a known abbreviation."""
    pieces: list[str] = []
    start = 0
    for match in _BOUNDARY_RE.finditer(text):
        prefix = text[start : match.end()].rstrip()
        last_word = prefix.rsplit(None, 1)[-1].lower() if prefix.split() else ""
        last_word = last_word.strip("\"')(")
        # Block known abbreviations, single-initial forms ("J."), and
        # multi-dot forms ("u.s.", "f.3d").
        if (
            last_word in _ABBREVIATIONS
            or re.fullmatch(r"[a-z0-9]\.", last_word)
            or "." in last_word[:-1]
        ):
            continue
        pieces.append(text[start : match.end()].strip())
        start = match.end()
    tail = text[start:].strip()
    if tail:
        pieces.append(tail)
    return [piece for piece in pieces if piece]


@dataclass(frozen=True)
class Chunk:
    chunk_id: str
    passage_id: str
    factor: Factor
    text: str
    token_estimate: int

    def __post_init__(self):
        object.__setattr__(self, "factor", Factor.coerce(self.factor))
        if not self.text:
            raise ValueError(f"chunk {self.chunk_id!r} has empty text")


@dataclass
class ChunkingResult:
    chunks: list[Chunk]
    #: Chunk ids holding a single sentence that alone exceeds the budget.
    oversized: list[str] = field(default_factory=list)


def chunk_passage(passage: FactorPassage, max_tokens: int = DEFAULT_MAX_TOKENS) -> ChunkingResult:
    """Greedily pack sentences into chunks of at most ``max_tokens`` tokens.

    The chunk texts joined back together reconstruct the passage modulo
    whitespace at the boundaries. A lone sentence over the budget becomes one
    oversized chunk and is reported rather than split.
    """
    if max_tokens < 32:
        raise ValueError(f"max_tokens must be >= 32, got {max_tokens}")
    sentences = split_sentences(passage.text)
    result = ChunkingResult(chunks=[])
    if not sentences:
        return result

    groups: list[list[str]] = [[]]
    used = 0
    for sentence in sentences:
        cost = estimate_tokens(sentence)
        if groups[-1] and used + cost > max_tokens:
            groups.append([])
            used = 0
        groups[-1].append(sentence)
        used += cost

    for seq, group in enumerate(groups):
        text = " ".join(group)
        chunk = Chunk(
            chunk_id=f"{passage.passage_id}:{seq:03d}",
            passage_id=passage.passage_id,
            factor=passage.factor,
            text=text,
            token_estimate=estimate_tokens(text),
        )
        result.chunks.append(chunk)
        if chunk.token_estimate > max_tokens:
            result.oversized.append(chunk.chunk_id)
    return result


def chunk_passages(
    passages: list[FactorPassage], max_tokens: int = DEFAULT_MAX_TOKENS
) -> ChunkingResult:
    """Chunk many passages, concatenating results in passage order."""
    combined = ChunkingResult(chunks=[])
    for passage in passages:
        one = chunk_passage(passage, max_tokens)
        combined.chunks.extend(one.chunks)
        combined.oversized.extend(one.oversized)
    return combined
