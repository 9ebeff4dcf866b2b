import json

import pytest

from navprobe.dataset import (
    GENERATED,
    Episode,
    SchemaError,
    dump_jsonl,
    episode_from_record,
    load_episodes,
    validate_against_graphs,
    write_episodes,
)
from conftest import line_graph

REC = {"distance": 3.5, "scan": "s", "path_id": 12, "path": ["n0", "n1", "n2"], "heading": 1.2,
       "instructions": ["Walk forward.", "Go ahead."]}


def test_load_json_and_jsonl(tmp_path):
    a = tmp_path / "a.json"
    a.write_text(json.dumps([REC, dict(REC, path_id="x")]))
    b = tmp_path / "b.jsonl"
    b.write_text(json.dumps(REC) + "\n\n" + json.dumps(dict(REC, path_id="x")) + "\n")
    assert load_episodes(a) == load_episodes(b)
    (tmp_path / "e.json").write_text("[]")
    assert load_episodes(tmp_path / "e.json") == []


def test_missing_field_reports_index(tmp_path):
    bad = dict(REC, path_id=2)
    del bad["path"]
    f = tmp_path / "bad.json"
    f.write_text(json.dumps([REC, bad]))
    with pytest.raises(SchemaError) as info:
        load_episodes(f)
    assert info.value.index == 1 and info.value.field == "path"


@pytest.mark.parametrize("patch", [
    {"path": []}, {"path": "n0"}, {"scan": ""}, {"path_id": True}, {"heading": "north"},
    {"instructions": []}, {"instructions": [3]}, {"source": "made-up"}, {"distance": "far"},
])
def test_schema_rejections(patch):
    with pytest.raises(SchemaError):
        episode_from_record(dict(REC, **patch))


def test_generated_may_lack_instructions():
    ep = episode_from_record(dict(REC, instructions=[], source=GENERATED))
    assert ep.source == GENERATED


def test_duplicate_path_id(tmp_path):
    f = tmp_path / "d.json"
    f.write_text(json.dumps([REC, REC]))
    with pytest.raises(SchemaError, match="duplicate"):
        load_episodes(f)


def test_round_trip_preserves_extras(tmp_path):
    rec = dict(REC, instr_id="12_0", extra_field={"k": [1, 2]})
    ep = episode_from_record(rec)
    assert ep.extra == {"instr_id": "12_0", "extra_field": {"k": [1, 2]}}
    f = tmp_path / "out.jsonl"
    write_episodes([ep], f)
    assert json.loads(f.read_text()) == rec
    assert list(ep.to_record())[:6] == ["distance", "scan", "path_id", "path", "heading", "instructions"]


def test_generated_source_written():
    ep = Episode("g-1", "s", ("a", "b"), ("go",), source=GENERATED)
    assert ep.to_record()["source"] == GENERATED
    assert "source" not in Episode(1, "s", ("a",), ("go",)).to_record()
    assert dump_jsonl([{"a": "é"}]) == '{"a": "é"}\n'


def test_validate():
    g = line_graph([(0, 0, 0), (0, 1, 0), (0, 2, 0)])
    good = Episode(1, "s", ("n0", "n1", "n2"), ("x",))
    skip = Episode(2, "s", ("n0", "n2"), ("x",))
    ghost = Episode(3, "s", ("n0", "n9"), ("x",))
    lost = Episode(4, "other", ("n0",), ("x",))
    out = validate_against_graphs([good, skip, ghost, lost], {"s": g})
    assert [(v.index, v.kind) for v in out] == [(1, "not-adjacent"), (2, "unknown-node"), (3, "missing-scan")]
