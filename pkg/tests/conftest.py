from __future__ import annotations

import math
import random
from pathlib import Path

import pytest

from navprobe.graph import NavGraph, load_graphs
from navprobe.lexicon import Lexicons, PosTag, default_lexicons

FIXTURES = Path(__file__).parent / "fixtures"
GRAPHS_DIR = FIXTURES / "graphs"


@pytest.fixture(scope="session")
def lex() -> Lexicons:
    return default_lexicons()


@pytest.fixture(scope="session")
def small_lex() -> Lexicons:
    """A tiny hand-written lexicon for tagger examples."""
    return Lexicons.build(
        spatial_words="right left straight toward around near front above through down up between past".split(),
        object_words=["sofa", "table", "door"],
        number_words=["one", "two", "three"],
        tag_lexicon={"walk": PosTag.VERB, "turn": PosTag.VERB, "the": PosTag.DETERMINER,
                     "green": PosTag.ADJECTIVE, "sofa": PosTag.NOUN, "and": PosTag.CONJUNCTION,
                     "right": PosTag.OTHER, "left": PosTag.OTHER, "past": PosTag.PREPOSITION,
                     "quickly": PosTag.ADVERB, "one": PosTag.NUMERAL},
        suffix_rules=[("-table", PosTag.NOUN), ("ly", PosTag.ADVERB)],
    )


@pytest.fixture(scope="session")
def fixture_graphs() -> dict[str, NavGraph]:
    return load_graphs(GRAPHS_DIR)


def line_graph(points, scan="s") -> NavGraph:
    """Nodes n0, n1, ... at ``points`` joined in order."""
    ids = [f"n{i}" for i in range(len(points))]
    return NavGraph.from_edges(scan, dict(zip(ids, points)), list(zip(ids, ids[1:])))


def random_graph(rng: random.Random, n_nodes: int, p_edge: float = 0.4, scan: str = "r") -> NavGraph:
    ids = [f"{c}" for c in "abcdefghijklmnopqrstuvwxyz"[:n_nodes]]
    pos = {i: (rng.uniform(0, 10), rng.uniform(0, 10), rng.uniform(0, 1)) for i in ids}
    edges = [(a, b) for k, a in enumerate(ids) for b in ids[k + 1:] if rng.random() < p_edge]
    return NavGraph.from_edges(scan, pos, edges)


def brute_force_shortest(g: NavGraph, start: str, goal: str):
    """Enumerate every simple path; return (best length, all simple paths)."""
    best = math.inf
    paths = []

    def length(p):
        return sum(math.dist(g.positions[a], g.positions[b]) for a, b in zip(p, p[1:]))

    def dfs(path, visited):
        nonlocal best
        u = path[-1]
        if u == goal:
            paths.append(list(path))
            best = min(best, length(path))
            return
        for v in g.adjacency[u]:
            if v not in visited:
                visited.add(v)
                path.append(v)
                dfs(path, visited)
                path.pop()
                visited.remove(v)

    dfs([start], {start})
    return best, paths


# ------------------------------------------------ acceptance summary lines

_CRITERIA: dict[str, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    label = marker.args[0]
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[rep.outcome]
        detail = ""
        if rep.skipped and isinstance(rep.longrepr, tuple):
            detail = rep.longrepr[2]
        _CRITERIA[item.nodeid] = (f"{status}  {label}", detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for line, detail in _CRITERIA.values():
        terminalreporter.write_line(line + (f"  ({detail})" if detail else ""))
