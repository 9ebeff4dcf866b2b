"""Counterfactual options at turns: could the agent have gone another way?"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .dataset import Episode
from .graph import (
    AROUND_THRESHOLD,
    TURN_THRESHOLD,
    DegenerateEdgeError,
    GraphError,
    NavGraph,
    TurnAnnotation,
    detect_turns,
    heading,
    heading_change,
)


class Bin(str, enum.Enum):
    STRAIGHT = "straight"
    LEFT = "left"
    RIGHT = "right"
    AROUND = "around"


def direction_bin(delta: float, threshold: float = TURN_THRESHOLD,
                  around_threshold: float = AROUND_THRESHOLD) -> Bin:
    if abs(delta) <= threshold:
        return Bin.STRAIGHT
    if abs(delta) > around_threshold:
        return Bin.AROUND
    return Bin.RIGHT if delta > 0 else Bin.LEFT


def counterfactuals_at_turn(g: NavGraph, path: Sequence[str], turn: TurnAnnotation,
                            threshold: float = TURN_THRESHOLD,
                            around_threshold: float = AROUND_THRESHOLD) -> int:
    """Number of neighbours of the turn node lying in a different direction
    bin than the one the path takes.  The node the agent arrived from is not
    a candidate; neighbours directly above/below the turn node have no
    heading and are skipped.
    """
    i = turn.node_index
    if not 0 < i < len(path) - 1:
        raise GraphError(f"turn index {i} is not an interior node of the path")
    pos = g.positions
    prev, node, nxt = path[i - 1], path[i], path[i + 1]
    h_in = heading(pos[prev], pos[node])
    taken_delta = heading_change(h_in, heading(pos[node], pos[nxt]))
    if not math.isclose(taken_delta, turn.delta_heading, abs_tol=1e-6):
        raise GraphError(f"turn at index {i} does not match the path geometry")
    taken = direction_bin(taken_delta, threshold, around_threshold)
    count = 0
    for n in sorted(g.neighbors(node)):
        if n == prev or n == nxt:
            continue
        try:
            delta = heading_change(h_in, heading(pos[node], pos[n]))
        except DegenerateEdgeError:
            continue
        if direction_bin(delta, threshold, around_threshold) is not taken:
            count += 1
    return count


@dataclass(frozen=True)
class EpisodeCounterfactuals:
    path_id: int | str
    turns: int
    counts: tuple[int, ...]


@dataclass(frozen=True)
class CounterfactualReport:
    episodes: int
    turns: int
    avg_turns_per_episode: float
    avg_counterfactuals_per_turn: float
    pct_turns_with_cf: float

    def to_dict(self) -> dict:
        return {
            "episodes": self.episodes,
            "turns": self.turns,
            "avg_turns_per_episode": self.avg_turns_per_episode,
            "avg_counterfactuals_per_turn": self.avg_counterfactuals_per_turn,
            "pct_turns_with_cf": self.pct_turns_with_cf,
        }


def analyze_episode(ep: Episode, g: NavGraph, threshold: float = TURN_THRESHOLD,
                    around_threshold: float = AROUND_THRESHOLD) -> EpisodeCounterfactuals:
    turns = detect_turns(ep.path, g, threshold, around_threshold)
    counts = tuple(counterfactuals_at_turn(g, ep.path, t, threshold, around_threshold) for t in turns)
    return EpisodeCounterfactuals(ep.path_id, len(turns), counts)


def summarize(per_episode: Sequence[EpisodeCounterfactuals]) -> CounterfactualReport:
    n = len(per_episode)
    turns = sum(e.turns for e in per_episode)
    cf = sum(sum(e.counts) for e in per_episode)
    with_cf = sum(c > 0 for e in per_episode for c in e.counts)
    return CounterfactualReport(
        episodes=n,
        turns=turns,
        avg_turns_per_episode=turns / n if n else 0.0,
        avg_counterfactuals_per_turn=cf / turns if turns else 0.0,
        pct_turns_with_cf=100.0 * with_cf / turns if turns else 0.0,
    )


def analyze_corpus(episodes: Sequence[Episode], graphs: Mapping[str, NavGraph],
                   threshold: float = TURN_THRESHOLD,
                   around_threshold: float = AROUND_THRESHOLD,
                   ) -> tuple[CounterfactualReport, list[EpisodeCounterfactuals]]:
    missing = sorted({ep.scan for ep in episodes if ep.scan not in graphs})
    if missing:
        raise GraphError(f"no graph loaded for scan {missing[0]}"
                         + (f" (and {len(missing) - 1} more)" if len(missing) > 1 else ""))
    per_episode = [analyze_episode(ep, graphs[ep.scan], threshold, around_threshold) for ep in episodes]
    return summarize(per_episode), per_episode
