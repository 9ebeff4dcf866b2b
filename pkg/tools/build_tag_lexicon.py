"""Regenerate ``src/navprobe/data/tags.tsv`` from Brill's English lexicon.

The source lexicon and word-frequency list ship inside the TextBlob wheel
(MIT licensed).  Download it once and point this script at it::

    pip download textblob --no-deps -d /tmp/dl
    python tools/build_tag_lexicon.py /tmp/dl/textblob-*.whl

The output keeps every navigation-domain word plus the most frequent English
words until the lexicon reaches ``--size`` entries.
"""
from __future__ import annotations

import argparse
import io
import zipfile
from pathlib import Path

DATA = Path(__file__).resolve().parents[1] / "src" / "navprobe" / "data"

PENN_TO_TAG = {
    "NN": "Noun", "NNS": "Noun", "NNP": "Noun", "NNPS": "Noun", "NN|JJ": "Noun",
    "VB": "Verb", "VBD": "Verb", "VBG": "Verb", "VBN": "Verb", "VBP": "Verb", "VBZ": "Verb",
    "JJ": "Adjective", "JJR": "Adjective", "JJS": "Adjective",
    "RB": "Adverb", "RBR": "Adverb", "RBS": "Adverb", "WRB": "Adverb", "RP": "Adverb",
    "IN": "Preposition", "TO": "Preposition",
    "DT": "Determiner", "PDT": "Determiner", "WDT": "Determiner",
    "PRP": "Pronoun", "PRP$": "Pronoun", "WP": "Pronoun", "WP$": "Pronoun", "EX": "Pronoun",
    "CC": "Conjunction",
    "CD": "Numeral",
}

# Imperative navigation usage overrides the general-English majority tag.
NAV_OVERRIDES = {
    **dict.fromkeys(
        "walk turn go exit enter continue stop wait take head proceed climb descend "
        "pass follow keep leave move veer bear make cross approach reach face ascend "
        "travel navigate circle pause halt return come get use look see find stand "
        "hang curve loop stay".split(),
        "Verb",
    ),
    **dict.fromkeys(
        "left right straight forward forwards ahead back backward backwards "
        "here there downstairs upstairs inside outside".split(),
        "Adverb",
    ),
    **dict.fromkeys(
        "past toward towards through between near above across along into onto "
        "beside behind below beneath under".split(),
        "Preposition",
    ),
    **dict.fromkeys(
        "stairs stair steps step staircase stairwell stairway landing top bottom "
        "end middle side corner meter meters feet foot living dining laundry "
        "hallway doorway entryway".split(),
        "Noun",
    ),
}


def read_word_list(path: Path) -> list[str]:
    words = []
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            words.append(line.lower())
    return words


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("wheel", type=Path)
    parser.add_argument("--size", type=int, default=5000)
    parser.add_argument("--output", type=Path, default=DATA / "tags.tsv")
    args = parser.parse_args()

    with zipfile.ZipFile(args.wheel) as zf:
        lexicon_text = zf.read("textblob/en/en-lexicon.txt").decode("utf-8")
        spelling_text = zf.read("textblob/en/en-spelling.txt").decode("utf-8")

    brill: dict[str, str] = {}
    for line in io.StringIO(lexicon_text):
        if line.startswith(";;;"):
            continue
        parts = line.split()
        if len(parts) >= 2 and parts[0].isalpha() and parts[0].islower():
            brill.setdefault(parts[0], parts[1])

    freq: list[tuple[int, str]] = []
    for line in io.StringIO(spelling_text):
        if line.startswith(";;;"):
            continue
        parts = line.split()
        if len(parts) == 2 and parts[0].isalpha():
            freq.append((int(parts[1]), parts[0].lower()))
    freq.sort(key=lambda item: (-item[0], item[1]))

    domain = set(NAV_OVERRIDES)
    for name in ("objects.txt", "spatial.txt", "numbers.txt"):
        domain.update(read_word_list(DATA / name))

    def tag_for(word: str) -> str | None:
        if word in NAV_OVERRIDES:
            return NAV_OVERRIDES[word]
        penn = brill.get(word)
        if penn is None:
            return None
        return PENN_TO_TAG.get(penn, "Other")

    entries: dict[str, str] = {}
    for word in sorted(domain):
        tag = tag_for(word) or "Noun"
        entries[word] = tag
    for _, word in freq:
        if len(entries) >= args.size:
            break
        if word in entries:
            continue
        tag = tag_for(word)
        if tag is not None:
            entries[word] = tag

    with args.output.open("w", encoding="utf-8") as fh:
        fh.write("# word<TAB>tag; derived from Brill's tagger lexicon (via TextBlob, MIT license)\n")
        fh.write("# plus navigation-domain overrides; regenerate with tools/build_tag_lexicon.py\n")
        for word in sorted(entries):
            fh.write(f"{word}\t{entries[word]}\n")
    print(f"wrote {len(entries)} entries to {args.output}")


if __name__ == "__main__":
    main()
