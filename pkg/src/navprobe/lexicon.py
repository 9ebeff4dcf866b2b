"""Word lists and the tag lexicon used by the tagger and cue classifier."""
from __future__ import annotations

import enum
import hashlib
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping


class PosTag(str, enum.Enum):
    NOUN = "Noun"
    VERB = "Verb"
    ADJECTIVE = "Adjective"
    ADVERB = "Adverb"
    PREPOSITION = "Preposition"
    DETERMINER = "Determiner"
    PRONOUN = "Pronoun"
    CONJUNCTION = "Conjunction"
    NUMERAL = "Numeral"
    OTHER = "Other"


class CueSet(str, enum.Enum):
    """Token classes targeted by the masking ablations."""

    NOUNS = "nouns"
    ADJECTIVES = "adjectives"
    VERBS = "verbs"
    OBJECTS = "objects"
    NUMERICAL = "numerical"
    SPATIAL = "spatial"
    LEFT_RIGHT = "left-right"

    @classmethod
    def parse(cls, name: str) -> "CueSet":
        key = name.strip().lower().replace("_", "-")
        aliases = {"leftright": "left-right", "object": "objects", "noun": "nouns",
                   "verb": "verbs", "adjective": "adjectives", "numeric": "numerical"}
        key = aliases.get(key, key)
        try:
            return cls(key)
        except ValueError:
            choices = ", ".join(c.value for c in cls)
            raise ValueError(f"unknown cue set {name!r} (choose from {choices})") from None


LEFT_RIGHT_WORDS = frozenset({"left", "right"})

CORE_SPATIAL_WORDS = frozenset(
    "right left straight toward around near front above through down up between past".split()
)


class LexiconError(ValueError):
    pass


def parse_word_list(text: str) -> list[str]:
    """One word per line; ``#`` starts a comment.  Words are lowercased."""
    words = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            words.append(line.lower())
    return words


def parse_tag_table(text: str) -> list[tuple[str, PosTag]]:
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        parts = body.split("\t")
        if len(parts) != 2:
            raise LexiconError(f"line {lineno}: expected 'word<TAB>tag', got {line!r}")
        word, tag = parts[0].strip().lower(), parts[1].strip()
        try:
            rows.append((word, PosTag(tag)))
        except ValueError:
            raise LexiconError(f"line {lineno}: unknown tag {tag!r}") from None
    return rows


def _read_data(name: str) -> str:
    return resources.files("navprobe.data").joinpath(name).read_text(encoding="utf-8")


@dataclass(frozen=True)
class Lexicons:
    spatial_words: frozenset[str]
    left_right_words: frozenset[str]
    object_words: frozenset[str]
    number_words: frozenset[str]
    tag_lexicon: Mapping[str, PosTag]
    suffix_rules: tuple[tuple[str, PosTag], ...]
    _digest: str = field(default="", compare=False, repr=False)

    def __post_init__(self) -> None:
        if self.left_right_words != LEFT_RIGHT_WORDS:
            raise LexiconError("left/right word list must be exactly {left, right}")
        if not self.left_right_words <= self.spatial_words:
            raise LexiconError("left/right words must also be spatial words")
        missing = CORE_SPATIAL_WORDS - self.spatial_words
        if missing:
            raise LexiconError(f"spatial list is missing required words: {sorted(missing)}")
        if not self._digest:
            object.__setattr__(self, "_digest", self._compute_digest())

    def _compute_digest(self) -> str:
        h = hashlib.sha256()
        for name, words in (("spatial", self.spatial_words), ("objects", self.object_words),
                            ("numbers", self.number_words)):
            h.update(name.encode())
            h.update("\n".join(sorted(words)).encode())
        h.update("\n".join(f"{w}\t{t.value}" for w, t in sorted(self.tag_lexicon.items())).encode())
        h.update("\n".join(f"{s}\t{t.value}" for s, t in self.suffix_rules).encode())
        return h.hexdigest()

    @property
    def digest(self) -> str:
        """sha256 over all lists; recorded in output manifests."""
        return self._digest

    def hashes(self) -> dict[str, str]:
        def sha(words: Iterable[str]) -> str:
            return hashlib.sha256("\n".join(sorted(words)).encode()).hexdigest()

        return {
            "spatial_words": sha(self.spatial_words),
            "object_words": sha(self.object_words),
            "number_words": sha(self.number_words),
            "tag_lexicon": sha(f"{w}\t{t.value}" for w, t in self.tag_lexicon.items()),
            "suffix_rules": hashlib.sha256(
                "\n".join(f"{s}\t{t.value}" for s, t in self.suffix_rules).encode()
            ).hexdigest(),
        }

    @classmethod
    def build(
        cls,
        *,
        spatial_words: Iterable[str],
        object_words: Iterable[str],
        number_words: Iterable[str],
        tag_lexicon: Mapping[str, PosTag] | Iterable[tuple[str, PosTag]],
        suffix_rules: Iterable[tuple[str, PosTag]],
        left_right_words: Iterable[str] = LEFT_RIGHT_WORDS,
    ) -> "Lexicons":
        tags = dict(tag_lexicon.items() if isinstance(tag_lexicon, Mapping) else tag_lexicon)
        return cls(
            spatial_words=frozenset(w.lower() for w in spatial_words),
            left_right_words=frozenset(w.lower() for w in left_right_words),
            object_words=frozenset(w.lower() for w in object_words),
            number_words=frozenset(w.lower() for w in number_words),
            tag_lexicon={w.lower(): PosTag(t) for w, t in tags.items()},
            suffix_rules=tuple((s.lower().lstrip("-"), PosTag(t)) for s, t in suffix_rules),
        )

    @classmethod
    def load(
        cls,
        *,
        spatial: str | Path | None = None,
        objects: str | Path | None = None,
        numbers: str | Path | None = None,
        tags: str | Path | None = None,
        suffixes: str | Path | None = None,
    ) -> "Lexicons":
        """Load the embedded lists, replacing any given as a file path."""

        def text(path, default):
            if path is None:
                return _read_data(default)
            return Path(path).read_text(encoding="utf-8")

        return cls.build(
            spatial_words=parse_word_list(text(spatial, "spatial.txt")),
            left_right_words=parse_word_list(_read_data("left_right.txt")),
            object_words=parse_word_list(text(objects, "objects.txt")),
            number_words=parse_word_list(text(numbers, "numbers.txt")),
            tag_lexicon=parse_tag_table(text(tags, "tags.tsv")),
            suffix_rules=parse_tag_table(text(suffixes, "suffixes.tsv")),
        )


_DEFAULT: Lexicons | None = None


def default_lexicons() -> Lexicons:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = Lexicons.load()
    return _DEFAULT
