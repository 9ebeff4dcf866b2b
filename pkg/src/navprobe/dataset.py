"""R2R-compatible episode records: loading, validation and JSONL output."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, Any, Iterable, Mapping, Sequence

if TYPE_CHECKING:
    from .graph import NavGraph

ORIGINAL = "original"
GENERATED = "generated"

_KNOWN = ("distance", "scan", "path_id", "path", "heading", "instructions", "source")


class SchemaError(ValueError):
    """A record does not match the episode schema."""

    def __init__(self, index: int, field_name: str, message: str) -> None:
        self.index = index
        self.field = field_name
        super().__init__(f"record {index}: field {field_name!r}: {message}")


@dataclass(frozen=True)
class Episode:
    path_id: int | str
    scan: str
    path: tuple[str, ...]
    instructions: tuple[str, ...] = ()
    heading: float = 0.0
    distance: float | None = None
    source: str = ORIGINAL
    extra: Mapping[str, Any] = field(default_factory=dict, compare=False)

    @property
    def goal(self) -> str:
        return self.path[-1]

    def to_record(self) -> dict[str, Any]:
        """Field order follows the R2R release files."""
        rec: dict[str, Any] = {}
        if self.distance is not None:
            rec["distance"] = self.distance
        rec["scan"] = self.scan
        rec["path_id"] = self.path_id
        rec["path"] = list(self.path)
        rec["heading"] = self.heading
        rec["instructions"] = list(self.instructions)
        rec.update(self.extra)
        if self.source != ORIGINAL:
            rec["source"] = self.source
        return rec


def _number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def episode_from_record(rec: Any, index: int = 0) -> Episode:
    if not isinstance(rec, dict):
        raise SchemaError(index, "<record>", "expected a JSON object")
    for name in ("path_id", "scan", "path", "instructions"):
        if name not in rec:
            raise SchemaError(index, name, "missing")
    path_id = rec["path_id"]
    if not isinstance(path_id, (int, str)) or isinstance(path_id, bool):
        raise SchemaError(index, "path_id", "must be an integer or string")
    if not isinstance(rec["scan"], str) or not rec["scan"]:
        raise SchemaError(index, "scan", "must be a non-empty string")
    path = rec["path"]
    if not isinstance(path, list) or not path or not all(isinstance(n, str) for n in path):
        raise SchemaError(index, "path", "must be a non-empty list of node ids")
    source = rec.get("source", ORIGINAL)
    if source not in (ORIGINAL, GENERATED):
        raise SchemaError(index, "source", f"unknown source {source!r}")
    instructions = rec["instructions"]
    if not isinstance(instructions, list) or not all(isinstance(s, str) for s in instructions):
        raise SchemaError(index, "instructions", "must be a list of strings")
    if not instructions and source == ORIGINAL:
        raise SchemaError(index, "instructions", "must not be empty")
    heading = rec.get("heading", 0.0)
    if not _number(heading):
        raise SchemaError(index, "heading", "must be a number (radians)")
    distance = rec.get("distance")
    if distance is not None and not _number(distance):
        raise SchemaError(index, "distance", "must be a number (meters)")
    extra = {k: v for k, v in rec.items() if k not in _KNOWN}
    return Episode(
        path_id=path_id,
        scan=rec["scan"],
        path=tuple(path),
        instructions=tuple(instructions),
        heading=heading,
        distance=distance,
        source=source,
        extra=extra,
    )


def read_records(file: str | Path) -> list[Any]:
    """Read a JSON array or a JSONL file."""
    text = Path(file).read_text(encoding="utf-8")
    stripped = text.lstrip()
    if not stripped:
        return []
    if stripped.startswith("["):
        data = json.loads(text)
        return data
    records = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if line.strip():
            try:
                records.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise ValueError(f"{file}:{lineno}: invalid JSON: {exc.msg}") from None
    return records


def load_episodes(file: str | Path) -> list[Episode]:
    episodes = [episode_from_record(rec, i) for i, rec in enumerate(read_records(file))]
    seen: dict[Any, int] = {}
    for i, ep in enumerate(episodes):
        if ep.path_id in seen:
            raise SchemaError(i, "path_id", f"duplicate of record {seen[ep.path_id]}")
        seen[ep.path_id] = i
    return episodes


def dump_jsonl(records: Iterable[Mapping[str, Any]]) -> str:
    return "".join(json.dumps(rec, ensure_ascii=False) + "\n" for rec in records)


def write_jsonl(records: Iterable[Mapping[str, Any]], file: str | Path) -> None:
    Path(file).write_text(dump_jsonl(records), encoding="utf-8")


def write_episodes(episodes: Iterable[Episode], file: str | Path) -> None:
    write_jsonl((ep.to_record() for ep in episodes), file)


@dataclass(frozen=True)
class Violation:
    index: int
    path_id: int | str
    kind: str  # "missing-scan" | "unknown-node" | "not-adjacent"
    detail: str

    def to_record(self) -> dict[str, Any]:
        return {"index": self.index, "path_id": self.path_id, "kind": self.kind, "detail": self.detail}


def validate_against_graphs(episodes: Sequence[Episode], graphs: Mapping[str, "NavGraph"]) -> list[Violation]:
    """List every episode whose path is not walkable in its scan's graph."""
    out = []
    for i, ep in enumerate(episodes):
        g = graphs.get(ep.scan)
        if g is None:
            out.append(Violation(i, ep.path_id, "missing-scan", f"no graph for scan {ep.scan}"))
            continue
        unknown = [n for n in ep.path if n not in g.positions]
        if unknown:
            out.append(Violation(i, ep.path_id, "unknown-node", f"unknown nodes: {', '.join(unknown)}"))
            continue
        for a, b in zip(ep.path, ep.path[1:]):
            if b not in g.adjacency.get(a, ()):
                out.append(Violation(i, ep.path_id, "not-adjacent", f"{a} -> {b}"))
    return out
