"""Corpus-level vocabulary, length and cue-density statistics."""
from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .dataset import Episode
from .lexicon import CueSet, Lexicons, default_lexicons
from .text import Instruction

ROW_NAMES = {
    CueSet.NOUNS: "Density: Noun",
    CueSet.ADJECTIVES: "Density: Adjective",
    CueSet.VERBS: "Density: Verb",
    CueSet.OBJECTS: "Density: Objects",
    CueSet.NUMERICAL: "Density: Numerical",
    CueSet.SPATIAL: "Density: Spatial",
    CueSet.LEFT_RIGHT: "Density: Left-Right",
}


class EmptyCorpusError(ValueError):
    def __init__(self) -> None:
        super().__init__("empty corpus")


def _ratio(instr: Instruction, cue: CueSet) -> float:
    return sum(cue in t.cues for t in instr.tokens) / len(instr.tokens)


def density(corpus: Sequence[Instruction], cue: CueSet) -> float:
    """Mean over instructions of the fraction of tokens in ``cue``.

    Instructions without tokens are skipped.
    """
    if not corpus:
        raise EmptyCorpusError()
    ratios = [_ratio(instr, cue) for instr in corpus if instr.tokens]
    if not ratios:
        return 0.0
    return sum(ratios) / len(ratios)


@dataclass
class PartialStats:
    """Order-independent accumulator; partials from workers are merged with ``+``.

    Per-instruction ratios are kept as ``(hits, length)`` histograms so the
    final mean does not depend on the order instructions were seen in.
    """

    n_instructions: int = 0
    n_tokenized: int = 0
    n_tokens: int = 0
    path_ids: set = field(default_factory=set)
    vocab: set = field(default_factory=set)
    ratio_counts: dict = field(default_factory=lambda: {c: Counter() for c in CueSet})

    def add_episode(self, ep: Episode, lex: Lexicons) -> None:
        self.path_ids.add(str(ep.path_id))
        for raw in ep.instructions:
            self.n_instructions += 1
            instr = Instruction.parse(raw, lex)
            if not instr.tokens:
                continue
            self.n_tokenized += 1
            self.n_tokens += len(instr.tokens)
            self.vocab.update(instr.texts)
            n = len(instr.tokens)
            for cue in CueSet:
                hits = sum(cue in t.cues for t in instr.tokens)
                self.ratio_counts[cue][hits, n] += 1

    def mean_ratio(self, cue: CueSet) -> float:
        hist = self.ratio_counts[cue]
        return math.fsum(k * hits / n for (hits, n), k in sorted(hist.items())) / self.n_tokenized

    def __add__(self, other: "PartialStats") -> "PartialStats":
        return PartialStats(
            n_instructions=self.n_instructions + other.n_instructions,
            n_tokenized=self.n_tokenized + other.n_tokenized,
            n_tokens=self.n_tokens + other.n_tokens,
            path_ids=self.path_ids | other.path_ids,
            vocab=self.vocab | other.vocab,
            ratio_counts={c: self.ratio_counts[c] + other.ratio_counts[c] for c in CueSet},
        )


@dataclass(frozen=True)
class StatsReport:
    n_instructions: int
    n_paths: int
    vocab_size: int
    avg_instr_length: float
    density: dict[CueSet, float]

    @classmethod
    def from_partial(cls, part: PartialStats) -> "StatsReport":
        if part.n_instructions == 0:
            raise EmptyCorpusError()
        n = part.n_tokenized
        return cls(
            n_instructions=part.n_instructions,
            n_paths=len(part.path_ids),
            vocab_size=len(part.vocab),
            avg_instr_length=part.n_tokens / n if n else 0.0,
            density={c: (part.mean_ratio(c) if n else 0.0) for c in CueSet},
        )

    def rows(self) -> dict[str, float | int]:
        out: dict[str, float | int] = {
            "# Instructions": self.n_instructions,
            "# Paths": self.n_paths,
            "Vocab Size": self.vocab_size,
            "Avg Instr Length": self.avg_instr_length,
        }
        for cue, name in ROW_NAMES.items():
            out[name] = self.density[cue]
        return out

    def to_json(self) -> str:
        return json.dumps(self.rows(), indent=2)

    def to_tsv(self) -> str:
        return "".join(f"{k}\t{v}\n" for k, v in self.rows().items())


def partial_stats(episodes: Iterable[Episode], lex: Lexicons | None = None) -> PartialStats:
    lex = lex or default_lexicons()
    part = PartialStats()
    for ep in episodes:
        part.add_episode(ep, lex)
    return part


def report(corpus: Sequence[Episode], lex: Lexicons | None = None) -> StatsReport:
    """Table-style statistics over every instruction of every episode."""
    if not corpus:
        raise EmptyCorpusError()
    return StatsReport.from_partial(partial_stats(corpus, lex))
