"""Navigation graphs: loading, heading geometry, turns, stairs, shortest paths,
path sampling and the SR/SPL/NE metrics."""
from __future__ import annotations

import enum
import json
import math
import random
from array import array
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Any, Collection, Iterable, Mapping, Sequence

from . import kernels

Point = tuple[float, float, float]

TURN_THRESHOLD = 30.0
AROUND_THRESHOLD = 120.0
STAIR_Z_THRESHOLD = 0.3
SUCCESS_RADIUS = 3.0


class GraphError(ValueError):
    pass


class DegenerateEdgeError(GraphError):
    def __init__(self) -> None:
        super().__init__("degenerate edge")


class InvalidPathError(GraphError):
    pass


class DisconnectedError(GraphError):
    def __init__(self, start: str, goal: str) -> None:
        super().__init__(f"disconnected: no path from {start} to {goal}")


class SamplingExhaustedError(GraphError):
    def __init__(self, scan_id: str, attempts: int) -> None:
        super().__init__(f"sampling exhausted: scan {scan_id} gave no valid path in {attempts} attempts")


@dataclass(frozen=True, eq=False)
class NavGraph:
    scan_id: str
    positions: Mapping[str, Point]
    adjacency: Mapping[str, frozenset[str]]

    def __post_init__(self) -> None:
        for u, nbrs in self.adjacency.items():
            if u not in self.positions:
                raise GraphError(f"{self.scan_id}: node {u} has edges but no position")
            for v in nbrs:
                if v == u:
                    raise GraphError(f"{self.scan_id}: self-loop at {u}")
                if v not in self.positions:
                    raise GraphError(f"{self.scan_id}: edge endpoint {v} has no position")
                if u not in self.adjacency.get(v, ()):
                    raise GraphError(f"{self.scan_id}: edge {u}-{v} is not symmetric")

    @classmethod
    def from_edges(cls, scan_id: str, positions: Mapping[str, Sequence[float]],
                   edges: Iterable[Sequence[str]]) -> "NavGraph":
        """Build a graph, symmetrizing edges and dropping self-loops."""
        pos = {str(k): (float(p[0]), float(p[1]), float(p[2])) for k, p in positions.items()}
        adj: dict[str, set[str]] = {k: set() for k in pos}
        for a, b in edges:
            a, b = str(a), str(b)
            if a == b:
                continue
            for n in (a, b):
                if n not in pos:
                    raise GraphError(f"{scan_id}: edge endpoint {n} has no position")
            adj[a].add(b)
            adj[b].add(a)
        return cls(scan_id, pos, {k: frozenset(v) for k, v in adj.items()})

    def __contains__(self, node: str) -> bool:
        return node in self.positions

    def __len__(self) -> int:
        return len(self.positions)

    def neighbors(self, node: str) -> frozenset[str]:
        return self.adjacency.get(node, frozenset())

    def edges(self) -> list[tuple[str, str]]:
        return sorted((u, v) for u, nbrs in self.adjacency.items() for v in nbrs if u < v)

    def distance(self, a: str, b: str) -> float:
        return math.dist(self.positions[a], self.positions[b])

    # CSR view for the kernels; node index order == sorted node-id order
    @cached_property
    def node_ids(self) -> tuple[str, ...]:
        return tuple(sorted(self.positions))

    @cached_property
    def node_index(self) -> dict[str, int]:
        return {n: i for i, n in enumerate(self.node_ids)}

    @cached_property
    def csr(self) -> tuple[array, array, array]:
        indptr, indices, weights = array("q", [0]), array("q"), array("d")
        index = self.node_index
        for u in self.node_ids:
            nbrs = sorted(index[v] for v in self.adjacency.get(u, ()))
            for j in nbrs:
                indices.append(j)
                weights.append(self.distance(u, self.node_ids[j]))
            indptr.append(len(indices))
        return indptr, indices, weights

    def to_json(self) -> dict[str, Any]:
        return {
            "scan": self.scan_id,
            "nodes": [{"id": n, "x": p[0], "y": p[1], "z": p[2]}
                      for n, p in sorted(self.positions.items())],
            "edges": [list(e) for e in self.edges()],
        }


# ---------------------------------------------------------------- loading

def graph_from_json(data: Any, scan_id: str | None = None) -> NavGraph:
    """Parse either the native graph JSON or a Matterport connectivity list."""
    if isinstance(data, dict) and "nodes" in data:
        scan = data.get("scan") or scan_id
        if not scan:
            raise GraphError("graph JSON has no 'scan' field")
        positions = {}
        for i, node in enumerate(data["nodes"]):
            try:
                positions[str(node["id"])] = (node["x"], node["y"], node["z"])
            except (KeyError, TypeError):
                raise GraphError(f"{scan}: node {i} needs id, x, y, z") from None
        return NavGraph.from_edges(scan, positions, data.get("edges", []))
    if isinstance(data, list):
        if not scan_id:
            raise GraphError("connectivity data needs a scan id")
        return graph_from_connectivity(scan_id, data)
    raise GraphError("unrecognized graph format")


def graph_from_connectivity(scan_id: str, nodes: Sequence[Mapping[str, Any]]) -> NavGraph:
    """Matterport ``*_connectivity.json``: 4x4 row-major poses, unobstructed masks."""
    positions = {}
    for node in nodes:
        if not node.get("included", True):
            continue
        pose = node["pose"]
        positions[node["image_id"]] = (pose[3], pose[7], pose[11])
    edges = []
    for i, node in enumerate(nodes):
        if node["image_id"] not in positions:
            continue
        for j, free in enumerate(node.get("unobstructed", ())):
            if free and j != i and nodes[j]["image_id"] in positions:
                edges.append((node["image_id"], nodes[j]["image_id"]))
    return NavGraph.from_edges(scan_id, positions, edges)


def _scan_from_filename(path: Path) -> str:
    name = path.stem
    return name[: -len("_connectivity")] if name.endswith("_connectivity") else name


def load_graph(file: str | Path) -> NavGraph:
    path = Path(file)
    data = json.loads(path.read_text(encoding="utf-8"))
    return graph_from_json(data, _scan_from_filename(path))


def load_graphs(source: str | Path, scans: Collection[str] | None = None) -> dict[str, NavGraph]:
    """Load every ``*.json`` graph in a directory (or a single file)."""
    source = Path(source)
    files = [source] if source.is_file() else sorted(source.glob("*.json"))
    graphs = {}
    for f in files:
        if scans is not None and _scan_from_filename(f) not in scans:
            continue
        g = load_graph(f)
        graphs[g.scan_id] = g
    return graphs


# ---------------------------------------------------------------- geometry

def heading(a: Sequence[float], b: Sequence[float]) -> float:
    """Compass bearing of ``b`` seen from ``a``: 0 = +y, clockwise, in [0, 360)."""
    dx, dy = b[0] - a[0], b[1] - a[1]
    if math.hypot(dx, dy) < 1e-9:
        raise DegenerateEdgeError()
    deg = math.degrees(math.atan2(dx, dy)) % 360.0
    return 0.0 if deg >= 360.0 else deg


def heading_change(h_in: float, h_out: float) -> float:
    """Signed change wrapped to (-180, 180]; positive is a right turn."""
    d = (h_out - h_in) % 360.0
    return d - 360.0 if d > 180.0 else d


class TurnKind(str, enum.Enum):
    LEFT = "left"
    RIGHT = "right"
    AROUND = "around"


class Direction(str, enum.Enum):
    UP = "up"
    DOWN = "down"


@dataclass(frozen=True)
class TurnAnnotation:
    node_index: int
    delta_heading: float
    kind: TurnKind


def classify_turn(delta: float, around_threshold: float = AROUND_THRESHOLD) -> TurnKind:
    if abs(delta) > around_threshold:
        return TurnKind.AROUND
    return TurnKind.RIGHT if delta > 0 else TurnKind.LEFT


def check_path(path: Sequence[str], g: NavGraph) -> None:
    if not path:
        raise InvalidPathError("empty path")
    for n in path:
        if n not in g.positions:
            raise InvalidPathError(f"node {n} not in scan {g.scan_id}")
    for a, b in zip(path, path[1:]):
        if b not in g.adjacency.get(a, ()):
            raise InvalidPathError(f"{a} -> {b} is not an edge of scan {g.scan_id}")


def detect_turns(path: Sequence[str], g: NavGraph, threshold: float = TURN_THRESHOLD,
                 around_threshold: float = AROUND_THRESHOLD) -> list[TurnAnnotation]:
    check_path(path, g)
    pos = g.positions
    turns = []
    for i in range(1, len(path) - 1):
        h_in = heading(pos[path[i - 1]], pos[path[i]])
        h_out = heading(pos[path[i]], pos[path[i + 1]])
        delta = heading_change(h_in, h_out)
        if abs(delta) > threshold:
            turns.append(TurnAnnotation(i, delta, classify_turn(delta, around_threshold)))
    return turns


@dataclass(frozen=True)
class StairSegment:
    start: int  # node index where the climb begins
    end: int  # node index where it ends
    direction: Direction


def stair_segments(path: Sequence[str], g: NavGraph, z_threshold: float = STAIR_Z_THRESHOLD) -> list[StairSegment]:
    """Maximal runs of same-sign edges whose height change exceeds ``z_threshold``."""
    check_path(path, g)
    out: list[StairSegment] = []
    run_start, run_dir = None, None
    for i in range(len(path) - 1):
        dz = g.positions[path[i + 1]][2] - g.positions[path[i]][2]
        d = None
        if abs(dz) > z_threshold:
            d = Direction.UP if dz > 0 else Direction.DOWN
        if d is not run_dir:
            if run_dir is not None:
                out.append(StairSegment(run_start, i, run_dir))
            run_start, run_dir = (i, d) if d is not None else (None, None)
    if run_dir is not None:
        out.append(StairSegment(run_start, len(path) - 1, run_dir))
    return out


def path_length_meters(path: Sequence[str], g: NavGraph) -> float:
    check_path(path, g)
    return sum(g.distance(a, b) for a, b in zip(path, path[1:]))


# ---------------------------------------------------------------- shortest paths

class _GoalCache:
    """Distance-to-goal arrays, reused across queries against one graph."""

    def __init__(self, g: NavGraph) -> None:
        self.g = g
        self._dist: dict[int, array] = {}

    def path(self, start: str, goal: str) -> list[str] | None:
        g = self.g
        indptr, indices, weights = g.csr
        gi = g.node_index[goal]
        dist = self._dist.get(gi)
        if dist is None:
            dist = self._dist[gi] = kernels.distances_from(indptr, indices, weights, gi)
        found = kernels.lex_path(indptr, indices, weights, dist, g.node_index[start], gi)
        if found is None:
            return None
        ids = g.node_ids
        return [ids[i] for i in found]


def shortest_path(g: NavGraph, start: str, goal: str) -> list[str]:
    """Minimum-length path by 3D edge length.

    Equal-length alternatives resolve to the lexicographically smallest
    node-id sequence.
    """
    for n in (start, goal):
        if n not in g.positions:
            raise GraphError(f"unknown node {n} in scan {g.scan_id}")
    found = _GoalCache(g).path(start, goal)
    if found is None:
        raise DisconnectedError(start, goal)
    return found


def sample_paths(
    g: NavGraph,
    rng_seed: int | str,
    count: int,
    min_edges: int = 6,
    max_edges: int = 9,
    exclusion: Collection[Sequence[str]] = frozenset(),
    max_attempts: int | None = None,
) -> list[list[str]]:
    """Shortest paths between uniformly drawn start/goal pairs.

    A path is kept when its edge count lies in ``[min_edges, max_edges]`` and
    its node sequence is not in ``exclusion``.  Returns up to ``count``
    distinct paths; raises :class:`SamplingExhaustedError` if none qualifies
    within the attempt budget.
    """
    if not g.positions:
        raise GraphError(f"scan {g.scan_id} has no nodes")
    if count <= 0:
        return []
    excluded = {tuple(p) for p in exclusion}
    attempts = max_attempts if max_attempts is not None else max(2000, 50 * count)
    rng = random.Random(rng_seed)
    nodes = g.node_ids
    cache = _GoalCache(g)
    seen: set[tuple[str, ...]] = set()
    out: list[list[str]] = []
    for _ in range(attempts):
        if len(out) >= count or len(nodes) < 2:
            break
        start = rng.choice(nodes)
        goal = rng.choice(nodes)
        if start == goal:
            continue
        path = cache.path(start, goal)
        if path is None or not min_edges <= len(path) - 1 <= max_edges:
            continue
        key = tuple(path)
        if key in excluded or key in seen:
            continue
        seen.add(key)
        out.append(path)
    if not out:
        raise SamplingExhaustedError(g.scan_id, attempts)
    return out


# ---------------------------------------------------------------- metrics

@dataclass(frozen=True)
class PathMetrics:
    nav_error: float
    success: bool
    spl: float
    path_length: float = field(default=0.0, compare=False)
    shortest_length: float = field(default=0.0, compare=False)


def evaluate(predicted: Sequence[str], goal: str, g: NavGraph,
             success_radius: float = SUCCESS_RADIUS) -> PathMetrics:
    """NE, success (strictly within ``success_radius``) and SPL for one episode."""
    check_path(predicted, g)
    if goal not in g.positions:
        raise GraphError(f"unknown goal {goal} in scan {g.scan_id}")
    shortest = path_length_meters(shortest_path(g, predicted[0], goal), g)
    taken = path_length_meters(predicted, g)
    ne = g.distance(predicted[-1], goal)
    success = ne < success_radius
    if not success:
        spl = 0.0
    elif shortest == 0.0:
        spl = 1.0
    else:
        spl = shortest / max(taken, shortest)
    return PathMetrics(ne, success, spl, taken, shortest)


def aggregate_metrics(metrics: Sequence[PathMetrics]) -> dict[str, float]:
    n = len(metrics)
    if n == 0:
        return {"episodes": 0, "sr": 0.0, "spl": 0.0, "ne": 0.0}
    return {
        "episodes": n,
        "sr": math.fsum(m.success for m in metrics) / n,
        "spl": math.fsum(m.spl for m in metrics) / n,
        "ne": math.fsum(m.nav_error for m in metrics) / n,
    }
