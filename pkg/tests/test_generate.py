import json
import re

import pytest

from conftest import line_graph
from navprobe.dataset import GENERATED
from navprobe.graph import Direction, InvalidPathError, TurnKind, detect_turns
from navprobe.generate import (
    PhraseSets,
    Stairs,
    Straight,
    Turn,
    generate_dataset,
    realize,
    render_distance,
    segment_path,
    split_quota,
)
from navprobe.lexicon import CueSet
from navprobe.text import Instruction


def test_segment_straight_line():
    g = line_graph([(0, 0, 0), (0, 1, 0), (0, 2, 0), (0, 3, 0)])
    assert segment_path(["n0", "n1", "n2", "n3"], g) == [Straight(3.0, 0, 3)]


def test_segment_with_left_turn():
    g = line_graph([(0, 0, 0), (0, 1, 0), (0, 3, 0), (-1, 3, 0)])
    assert segment_path(["n0", "n1", "n2", "n3"], g) == [
        Straight(3.0, 0, 2), Turn(TurnKind.LEFT, 2), Straight(1.0, 2, 3)]


def test_segment_flat_then_stairs():
    g = line_graph([(0, 0, 0), (0, 2, 0), (0, 3, 1), (0, 4, 2)])
    assert segment_path(["n0", "n1", "n2", "n3"], g) == [Straight(2.0, 0, 1), Stairs(Direction.UP, 1, 3)]


def test_segment_turn_inside_stairs_emits_both():
    g = line_graph([(0, 0, 0), (0, 1, 1), (1, 1, 2)])
    assert segment_path(["n0", "n1", "n2"], g) == [
        Stairs(Direction.UP, 0, 1), Turn(TurnKind.RIGHT, 1), Stairs(Direction.UP, 1, 2)]


def test_segment_needs_two_nodes():
    g = line_graph([(0, 0, 0), (0, 1, 0)])
    with pytest.raises(InvalidPathError):
        segment_path(["n0"], g)


@pytest.mark.parametrize("meters, text", [(0.2, "one meter"), (1.49, "one meter"), (2.5, "three meters"),
                                          (10.4, "ten meters"), (10.5, "11 meters"), (23, "23 meters")])
def test_render_distance(meters, text):
    assert render_distance(meters) == text


FIXED = PhraseSets(straight_templates=("go forward",), stop_phrases=("stop",))


def test_realize_examples():
    assert realize([Straight(3.0, 0, 3)], FIXED) == "Go forward for three meters. Stop."
    segs = [Straight(3.0, 0, 2), Turn(TurnKind.RIGHT, 2), Straight(1.0, 2, 3)]
    assert realize(segs, FIXED) == "Go forward for three meters. Turn right, and walk one meter. Stop."
    segs = [Straight(2.0, 0, 1), Turn(TurnKind.AROUND, 1), Straight(2.0, 1, 2)]
    assert "Turn around, and walk two meters." in realize(segs, FIXED)
    segs = [Straight(2.0, 0, 1), Stairs(Direction.DOWN, 1, 3)]
    assert realize(segs, FIXED) == "Go forward for two meters. Go down the stairs. Stop."


def test_realize_empty():
    with pytest.raises(ValueError):
        realize([], FIXED)


def test_realize_deterministic():
    segs = [Straight(4.0, 0, 3), Turn(TurnKind.LEFT, 3), Straight(2.0, 3, 5)]
    assert len({realize(segs, None, 11) for _ in range(5)}) == 1


def test_phrase_loading(tmp_path):
    assert PhraseSets.load() == PhraseSets()
    f = tmp_path / "p.json"
    f.write_text(json.dumps({"stop_phrases": ["halt"], "turn_templates": {"left": "bear left", "right": "bear right",
                                                                          "around": "turn back"}}))
    p = PhraseSets.load(f)
    assert realize([Turn(TurnKind.LEFT, 1)], p) == "Bear left. Halt."
    f.write_text(json.dumps({"colour": ["red"]}))
    with pytest.raises(ValueError):
        PhraseSets.load(f)


def test_split_quota():
    assert split_quota(10, ["a", "b", "c"]) == {"a": 4, "b": 3, "c": 3}


TURN_WORD = re.compile(r"turn (left|right|around)")


def test_generated_dataset(fixture_graphs, lex):
    res = generate_dataset(fixture_graphs, 7, 60)
    assert len(res.episodes) == 60 and res.shortfall == 0
    assert res.episodes == sorted(res.episodes, key=lambda e: (e.scan, e.path_id))
    for ep in res.episodes:
        g = fixture_graphs[ep.scan]
        assert ep.source == GENERATED
        assert 6 <= len(ep.path) - 1 <= 9
        (text,) = ep.instructions
        # turn phrases come back out in the order the geometry dictates
        assert TURN_WORD.findall(text.lower()) == [t.kind.value for t in detect_turns(ep.path, g)]
        instr = Instruction.parse(text, lex)
        assert not any(CueSet.OBJECTS in t.cues for t in instr.tokens)
    again = generate_dataset(fixture_graphs, 7, 60)
    assert [e.to_record() for e in again.episodes] == [e.to_record() for e in res.episodes]


def test_generation_parallel_matches_serial(fixture_graphs):
    serial = generate_dataset(fixture_graphs, "abc", 30)
    parallel = generate_dataset(fixture_graphs, "abc", 30, workers=2)
    assert serial.episodes == parallel.episodes


def test_full_exclusion_warns(fixture_graphs):
    g = line_graph([(0, i, 0) for i in range(4)])
    res = generate_dataset({"s": g}, 1, 5)
    assert res.episodes == [] and res.shortfall == 5
    assert res.warnings and "sampling exhausted" in res.warnings[0]


def test_exclusion_respected(fixture_graphs):
    first = generate_dataset(fixture_graphs, 3, 30)
    excluded = {tuple(e.path) for e in first.episodes}
    second = generate_dataset(fixture_graphs, 3, 30, exclusion=excluded)
    assert not excluded & {tuple(e.path) for e in second.episodes}
