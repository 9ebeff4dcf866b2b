"""Training-data emitters: shuffled hard-negative paths and MLM records."""
from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass
from typing import Any, Sequence

from .dataset import Episode
from .lexicon import CueSet
from .text import DEFAULT_MASK_TOKEN, Instruction

ORIGINAL = "original"
SHUFFLED = "shuffled"


class UnshufflableError(ValueError):
    def __init__(self, path_id: Any) -> None:
        super().__init__(f"unshufflable: episode {path_id} has a single-node path")


@dataclass(frozen=True)
class RankedPair:
    path_id: int | str
    scan: str
    path: tuple[str, ...]
    label: int
    variant_kind: str

    def to_record(self) -> dict[str, Any]:
        return {"path_id": self.path_id, "scan": self.scan, "path": list(self.path),
                "label": self.label, "variant_kind": self.variant_kind}


def count_distinct_permutations(seq: Sequence[str]) -> int:
    total = math.factorial(len(seq))
    for k in Counter(seq).values():
        total //= math.factorial(k)
    return total


def _distinct_permutations(seq: Sequence[str]):
    """Distinct orderings of ``seq`` in lexicographic order."""
    items = sorted(seq)
    n = len(items)
    while True:
        yield tuple(items)
        i = n - 2
        while i >= 0 and items[i] >= items[i + 1]:
            i -= 1
        if i < 0:
            return
        j = n - 1
        while items[j] <= items[i]:
            j -= 1
        items[i], items[j] = items[j], items[i]
        items[i + 1:] = reversed(items[i + 1:])


def shuffle_negatives(ep: Episode, rng_seed: int | str, n_negatives: int) -> list[RankedPair]:
    """The aligned path (label 1) followed by up to ``n_negatives`` distinct
    reorderings of its nodes (label 0)."""
    if n_negatives < 1:
        raise ValueError("n_negatives must be at least 1")
    original = tuple(ep.path)
    if len(original) < 2:
        raise UnshufflableError(ep.path_id)
    rng = random.Random(rng_seed)
    available = count_distinct_permutations(original) - 1
    if available <= n_negatives:
        variants = [p for p in _distinct_permutations(original) if p != original]
    else:
        seen: set[tuple[str, ...]] = set()
        variants = []
        nodes = list(original)
        while len(variants) < n_negatives:
            rng.shuffle(nodes)
            cand = tuple(nodes)
            if cand != original and cand not in seen:
                seen.add(cand)
                variants.append(cand)
    pairs = [RankedPair(ep.path_id, ep.scan, original, 1, ORIGINAL)]
    pairs.extend(RankedPair(ep.path_id, ep.scan, v, 0, SHUFFLED) for v in variants)
    return pairs


@dataclass(frozen=True)
class MlmRecord:
    masked_tokens: tuple[str, ...]
    target_positions: tuple[int, ...]
    target_tokens: tuple[str, ...]
    skippable: bool = False

    def reconstruct(self) -> list[str]:
        tokens = list(self.masked_tokens)
        for i, t in zip(self.target_positions, self.target_tokens):
            tokens[i] = t
        return tokens

    def to_record(self, **extra: Any) -> dict[str, Any]:
        rec = dict(extra)
        rec.update(masked_tokens=list(self.masked_tokens), target_positions=list(self.target_positions),
                   target_tokens=list(self.target_tokens), skippable=self.skippable)
        return rec


def _record(texts: Sequence[str], positions: Sequence[int], mask_token: str) -> MlmRecord:
    chosen = set(positions)
    masked = tuple(mask_token if i in chosen else t for i, t in enumerate(texts))
    return MlmRecord(masked, tuple(sorted(chosen)), tuple(texts[i] for i in sorted(chosen)),
                     skippable=not chosen)


def mlm_mask_standard(instr: Instruction, rng_seed: int | str, rate: float = 0.15,
                      mask_token: str = DEFAULT_MASK_TOKEN, bert_style: bool = False,
                      vocab: Sequence[str] | None = None) -> MlmRecord:
    """Select each token with probability ``rate``, redrawing until at least
    one is chosen.

    With ``bert_style`` the selected tokens become the mask 80% of the time,
    a random ``vocab`` word 10% and stay unchanged 10%; the record then no
    longer has masks exactly at its target positions.
    """
    texts = instr.texts
    if not texts:
        raise ValueError("cannot mask an empty instruction")
    if not 0.0 < rate <= 1.0:
        raise ValueError("rate must be in (0, 1]")
    rng = random.Random(rng_seed)
    while True:
        positions = [i for i in range(len(texts)) if rng.random() < rate]
        if positions:
            break
    rec = _record(texts, positions, mask_token)
    if not bert_style:
        return rec
    pool = list(vocab) if vocab else sorted(set(texts))
    tokens = list(texts)
    for i in positions:
        r = rng.random()
        if r < 0.8:
            tokens[i] = mask_token
        elif r < 0.9:
            tokens[i] = rng.choice(pool)
    return MlmRecord(tuple(tokens), rec.target_positions, rec.target_tokens)


def mlm_mask_spatial(instr: Instruction, mask_token: str = DEFAULT_MASK_TOKEN) -> MlmRecord:
    """Mask every spatial/directional token and nothing else."""
    positions = [t.index for t in instr.tokens if CueSet.SPATIAL in t.cues]
    return _record(instr.texts, positions, mask_token)
