"""Tokenization, tagging, cue classification and the instruction ablations."""
from __future__ import annotations

import re
from dataclasses import dataclass, replace
from typing import Sequence

from .lexicon import CueSet, Lexicons, PosTag, default_lexicons

DEFAULT_MASK_TOKEN = "[MASK]"

# Decimals stay whole; hyphens survive only between word characters.
_TOKEN_RE = re.compile(r"\d+\.\d+|[^\W_]+(?:-[^\W_]+)*")
_NUMBER_RE = re.compile(r"\d+(?:\.\d+)?")

_SWAP = {"left": "right", "right": "left"}


def tokenize(raw: str) -> list[str]:
    """Lowercase ``raw`` and split it into word tokens, dropping punctuation.

    >>> tokenize("Turn right, and walk one meter.")
    ['turn', 'right', 'and', 'walk', 'one', 'meter']
    """
    return _TOKEN_RE.findall(raw.lower())


def pos_tag(tokens: Sequence[str], lex: Lexicons | None = None) -> list[PosTag]:
    lex = lex or default_lexicons()
    tags = []
    for text in tokens:
        word = text.lower()
        tag = lex.tag_lexicon.get(word)
        if tag is None:
            if _NUMBER_RE.fullmatch(word):
                tag = PosTag.NUMERAL
            else:
                tag = next(
                    (t for suffix, t in lex.suffix_rules if word.endswith(suffix) and word != suffix),
                    PosTag.NOUN,
                )
        tags.append(tag)
    return tags


def cues_for(text: str, pos: PosTag, lex: Lexicons) -> frozenset[CueSet]:
    word = text.lower()
    cues = set()
    if pos is PosTag.NOUN:
        cues.add(CueSet.NOUNS)
        if word in lex.object_words:
            cues.add(CueSet.OBJECTS)
    elif pos is PosTag.ADJECTIVE:
        cues.add(CueSet.ADJECTIVES)
    elif pos is PosTag.VERB:
        cues.add(CueSet.VERBS)
    if pos is PosTag.NUMERAL or word in lex.number_words or _NUMBER_RE.fullmatch(word):
        cues.add(CueSet.NUMERICAL)
    if word in lex.spatial_words:
        cues.add(CueSet.SPATIAL)
    if word in lex.left_right_words:
        cues.add(CueSet.LEFT_RIGHT)
    return frozenset(cues)


@dataclass(frozen=True)
class Token:
    text: str
    index: int
    pos: PosTag
    cues: frozenset[CueSet] = frozenset()


def classify_cues(tokens: Sequence[str], tags: Sequence[PosTag], lex: Lexicons | None = None) -> list[Token]:
    lex = lex or default_lexicons()
    if len(tokens) != len(tags):
        raise ValueError("tokens and tags differ in length")
    return [Token(t, i, p, cues_for(t, p, lex)) for i, (t, p) in enumerate(zip(tokens, tags))]


@dataclass(frozen=True)
class Instruction:
    raw: str
    tokens: tuple[Token, ...]

    @classmethod
    def parse(cls, raw: str, lex: Lexicons | None = None) -> "Instruction":
        """Tokenize, tag and classify ``raw`` in one step."""
        lex = lex or default_lexicons()
        texts = tokenize(raw)
        return cls(raw, tuple(classify_cues(texts, pos_tag(texts, lex), lex)))

    @property
    def texts(self) -> list[str]:
        return [t.text for t in self.tokens]

    @property
    def text(self) -> str:
        return " ".join(self.texts)

    def __len__(self) -> int:
        return len(self.tokens)

    def _with_texts(self, texts: Sequence[str]) -> "Instruction":
        tokens = tuple(replace(tok, text=new) for tok, new in zip(self.tokens, texts))
        return Instruction(" ".join(texts), tokens)


def _check_mask_token(mask_token: str) -> None:
    if not mask_token or any(c.isspace() for c in mask_token):
        raise ValueError(f"mask token must be non-empty without whitespace: {mask_token!r}")


def mask(instr: Instruction, cue: CueSet, mask_token: str = DEFAULT_MASK_TOKEN) -> Instruction:
    """Replace every token carrying ``cue`` with ``mask_token``.

    Masked tokens keep their tag and cue memberships, so masking twice is a
    no-op.
    """
    _check_mask_token(mask_token)
    return instr._with_texts([mask_token if cue in t.cues else t.text for t in instr.tokens])


def swap_left_right(instr: Instruction) -> Instruction:
    return instr._with_texts([_SWAP.get(t.text, t.text) for t in instr.tokens])


def mask_all_language(instr: Instruction, mask_token: str = DEFAULT_MASK_TOKEN) -> Instruction:
    _check_mask_token(mask_token)
    return instr._with_texts([mask_token] * len(instr.tokens))


def ablate(raw: str, mode: str | CueSet, lex: Lexicons | None = None,
           mask_token: str = DEFAULT_MASK_TOKEN) -> str:
    """Apply one ablation to a raw instruction string and return the new text.

    ``mode`` is a cue-set name, ``"swap"`` or ``"no-language"``.
    """
    instr = Instruction.parse(raw, lex)
    if mode == "swap":
        return swap_left_right(instr).text
    if mode == "no-language":
        return mask_all_language(instr, mask_token).text
    cue = mode if isinstance(mode, CueSet) else CueSet.parse(mode)
    return mask(instr, cue, mask_token).text
