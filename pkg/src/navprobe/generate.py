"""Object-free, direction-dense instructions built from path geometry alone."""
from __future__ import annotations

import json
import logging
import math
import random
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Collection, Mapping, Sequence

from .dataset import GENERATED, Episode
from .graph import (
    AROUND_THRESHOLD,
    STAIR_Z_THRESHOLD,
    TURN_THRESHOLD,
    Direction,
    InvalidPathError,
    NavGraph,
    SamplingExhaustedError,
    TurnKind,
    detect_turns,
    heading,
    path_length_meters,
    sample_paths,
    stair_segments,
)

log = logging.getLogger(__name__)

NUMBER_WORDS = ("zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten")


@dataclass(frozen=True)
class Segment:
    """One instruction unit.

    ``start``/``end`` are node indices; a turn happens in place so its span is
    empty (``start == end``).  Consecutive segments share endpoints.
    """

    kind: str  # "straight" | "turn" | "stairs"
    start: int
    end: int
    distance: float = 0.0
    turn: TurnKind | None = None
    direction: Direction | None = None


def Straight(distance: float, start: int, end: int) -> Segment:  # noqa: N802
    return Segment("straight", start, end, distance=distance)


def Turn(kind: TurnKind, at: int) -> Segment:  # noqa: N802
    return Segment("turn", at, at, turn=kind)


def Stairs(direction: Direction, start: int, end: int) -> Segment:  # noqa: N802
    return Segment("stairs", start, end, direction=direction)


def segment_path(path: Sequence[str], g: NavGraph, turn_threshold: float = TURN_THRESHOLD,
                 around_threshold: float = AROUND_THRESHOLD,
                 z_threshold: float = STAIR_Z_THRESHOLD) -> list[Segment]:
    if len(path) < 2:
        raise InvalidPathError("a path needs at least two nodes to describe")
    turns = {t.node_index: t.kind for t in detect_turns(path, g, turn_threshold, around_threshold)}
    stair_dir: dict[int, Direction] = {}
    for seg in stair_segments(path, g, z_threshold):
        for e in range(seg.start, seg.end):
            stair_dir[e] = seg.direction

    out: list[Segment] = []
    run_start, run_len = None, 0.0

    def flush(end: int) -> None:
        nonlocal run_start, run_len
        if run_start is not None:
            out.append(Straight(run_len, run_start, end))
        run_start, run_len = None, 0.0

    for e in range(len(path) - 1):  # edge e joins node e and node e + 1
        if e in turns:
            flush(e)
            out.append(Turn(turns[e], e))
        d = stair_dir.get(e)
        if d is not None:
            flush(e)
            last = out[-1] if out else None
            if last is not None and last.kind == "stairs" and last.direction is d and last.end == e:
                out[-1] = Stairs(d, last.start, e + 1)
            else:
                out.append(Stairs(d, e, e + 1))
            continue
        if run_start is None:
            run_start = e
        run_len += g.distance(path[e], path[e + 1])
    flush(len(path) - 1)
    return out


@dataclass(frozen=True)
class PhraseSets:
    straight_templates: tuple[str, ...] = ("go straight", "go forward", "continue straight")
    stop_phrases: tuple[str, ...] = ("stop", "wait here")
    turn_templates: Mapping[str, str] = field(default_factory=lambda: {
        "left": "turn left", "right": "turn right", "around": "turn around"})
    stairs_templates: Mapping[str, str] = field(default_factory=lambda: {
        "up": "go up the stairs", "down": "go down the stairs"})
    distance_template: str = "for {distance}"
    turn_walk_template: str = "and walk {distance}"

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> "PhraseSets":
        kwargs: dict[str, Any] = {}
        for key in ("straight_templates", "stop_phrases"):
            if key in data:
                kwargs[key] = tuple(data[key])
        for key in ("turn_templates", "stairs_templates"):
            if key in data:
                kwargs[key] = dict(data[key])
        for key in ("distance_template", "turn_walk_template"):
            if key in data:
                kwargs[key] = str(data[key])
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown phrase-set keys: {sorted(unknown)}")
        phrases = cls(**kwargs)
        if not phrases.straight_templates or not phrases.stop_phrases:
            raise ValueError("straight_templates and stop_phrases must be non-empty")
        return phrases

    @classmethod
    def load(cls, file: str | Path | None = None) -> "PhraseSets":
        if file is None:
            text = resources.files("navprobe.data").joinpath("phrases.json").read_text(encoding="utf-8")
        else:
            text = Path(file).read_text(encoding="utf-8")
        return cls.from_mapping(json.loads(text))


def render_distance(meters: float) -> str:
    """Round to whole meters (at least one); 1-10 are spelled out."""
    n = max(1, int(math.floor(meters + 0.5)))
    word = NUMBER_WORDS[n] if n <= 10 else str(n)
    return f"{word} meter" if n == 1 else f"{word} meters"


def _sentence(text: str) -> str:
    return text[:1].upper() + text[1:] + "."


def realize(segments: Sequence[Segment], phrases: PhraseSets | None = None,
            rng_seed: int | str | random.Random = 0) -> str:
    """Render segments as sentences: "Go forward for three meters. Turn
    right, and walk one meter. Stop."

    A turn immediately followed by a straight run is merged into one sentence.
    """
    if not segments:
        raise ValueError("cannot realize an empty segment list")
    phrases = phrases or PhraseSets()
    rng = rng_seed if isinstance(rng_seed, random.Random) else random.Random(rng_seed)
    sentences = []
    i = 0
    while i < len(segments):
        seg = segments[i]
        if seg.kind == "turn":
            text = phrases.turn_templates[seg.turn.value]
            nxt = segments[i + 1] if i + 1 < len(segments) else None
            if nxt is not None and nxt.kind == "straight":
                walk = phrases.turn_walk_template.format(distance=render_distance(nxt.distance))
                text = f"{text}, {walk}"
                i += 1
        elif seg.kind == "straight":
            phrase = rng.choice(phrases.straight_templates)
            text = f"{phrase} {phrases.distance_template.format(distance=render_distance(seg.distance))}"
        elif seg.kind == "stairs":
            text = phrases.stairs_templates[seg.direction.value]
        else:
            raise ValueError(f"unknown segment kind {seg.kind!r}")
        sentences.append(_sentence(text))
        i += 1
    sentences.append(_sentence(rng.choice(phrases.stop_phrases)))
    return " ".join(sentences)


@dataclass
class GenerationResult:
    episodes: list[Episode]
    warnings: list[str]
    shortfall: int = 0


def _scan_seed(seed: int | str, scan: str) -> str:
    return f"{seed}:{scan}"


def generate_for_scan(g: NavGraph, seed: int | str, count: int,
                      exclusion: Collection[Sequence[str]] = frozenset(),
                      phrases: PhraseSets | None = None, min_edges: int = 6, max_edges: int = 9,
                      turn_threshold: float = TURN_THRESHOLD,
                      around_threshold: float = AROUND_THRESHOLD,
                      z_threshold: float = STAIR_Z_THRESHOLD) -> tuple[list[Episode], list[str]]:
    """All randomness flows from ``(seed, scan id)``, so scans can run in any order."""
    phrases = phrases or PhraseSets()
    scan_seed = _scan_seed(seed, g.scan_id)
    try:
        paths = sample_paths(g, scan_seed, count, min_edges, max_edges, exclusion)
    except SamplingExhaustedError as exc:
        return [], [str(exc)]
    warnings = []
    if len(paths) < count:
        warnings.append(f"scan {g.scan_id}: only {len(paths)} of {count} paths available")
    rng = random.Random(scan_seed + ":realize")
    episodes = []
    for k, path in enumerate(paths):
        segments = segment_path(path, g, turn_threshold, around_threshold, z_threshold)
        text = realize(segments, phrases, rng)
        pos = g.positions
        episodes.append(Episode(
            path_id=f"gen-{g.scan_id}-{k:05d}",
            scan=g.scan_id,
            path=tuple(path),
            instructions=(text,),
            heading=math.radians(heading(pos[path[0]], pos[path[1]])),
            distance=round(path_length_meters(path, g), 4),
            source=GENERATED,
        ))
    return episodes, warnings


def split_quota(total: int, scans: Sequence[str]) -> dict[str, int]:
    n = len(scans)
    return {s: total // n + (1 if i < total % n else 0) for i, s in enumerate(scans)}


def generate_dataset(graphs: Mapping[str, NavGraph], rng_seed: int | str, target_count: int,
                     exclusion: Collection[Sequence[str]] = frozenset(),
                     phrases: PhraseSets | None = None, workers: int = 1,
                     **kwargs: Any) -> GenerationResult:
    """Generate about ``target_count`` episodes spread evenly over the scans.

    Output is ordered by (scan id, sample index) whatever ``workers`` is.
    """
    if not graphs:
        raise ValueError("at least one graph is required")
    scans = sorted(graphs)
    quota = split_quota(target_count, scans)
    excluded = frozenset(tuple(p) for p in exclusion)
    jobs = [(graphs[s], rng_seed, quota[s], excluded, phrases) for s in scans if quota[s] > 0]
    if workers > 1 and len(jobs) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_generate_job, jobs, [kwargs] * len(jobs)))
    else:
        results = [_generate_job(job, kwargs) for job in jobs]
    episodes: list[Episode] = []
    warnings: list[str] = []
    for eps, warns in results:
        episodes.extend(eps)
        warnings.extend(warns)
    for w in warnings:
        log.warning(w)
    return GenerationResult(episodes, warnings, max(0, target_count - len(episodes)))


def _generate_job(job, kwargs):
    g, seed, count, exclusion, phrases = job
    return generate_for_scan(g, seed, count, exclusion, phrases, **kwargs)
