import random
from pathlib import Path

import pytest
from hypothesis import settings

from divcw.graph import (
    AddEdges,
    CwDecomposition,
    Intro,
    Recolor,
    Union,
    gen_clique,
    gen_complete_bipartite,
    gen_path,
    parse_decomposition,
    validate,
)

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "data"


def load(name: str) -> CwDecomposition:
    return parse_decomposition((DATA / name).read_text())


def random_decomposition(rng: random.Random, n: int, width: int = 3) -> CwDecomposition:
    """Random valid decomposition on vertices x1..xn with colors in [1, width]."""
    nodes = {}
    ids = iter(range(1, 10**6))

    def new(cls, *args):
        t = f"r{next(ids)}"
        nodes[t] = cls(t, *args)
        return t

    def sprinkle(t):
        for _ in range(rng.randint(0, 2)):
            a, b = rng.sample(range(1, width + 1), 2)
            t = new(AddEdges if rng.random() < 0.6 else Recolor, t, a, b)
        return t

    forest = [new(Intro, f"x{i}", rng.randint(1, width)) for i in range(1, n + 1)]
    forest = [sprinkle(t) for t in forest]
    while len(forest) > 1:
        i, j = sorted(rng.sample(range(len(forest)), 2))
        right = forest.pop(j)
        left = forest.pop(i)
        forest.append(sprinkle(new(Union, left, right)))
    D = CwDecomposition(nodes, forest[0], width)
    assert validate(D) == []
    return D


def corpus(max_vertices: int = 8) -> list[tuple[str, CwDecomposition]]:
    """Paths, cliques, bicliques, hand-written files and seeded random decompositions."""
    out = []
    out += [(f"path{n}", gen_path(n)) for n in range(2, 9)]
    out += [(f"clique{n}", gen_clique(n)) for n in range(2, 7)]
    out += [
        (f"biclique{p}x{q}", gen_complete_bipartite(p, q))
        for p, q in [(1, 2), (1, 3), (2, 2), (2, 3), (3, 3), (2, 4), (1, 5)]
    ]
    out += [(name, load(f"{name}.cw")) for name in ("c5", "paw", "matching")]
    for seed in range(8):
        rng = random.Random(1000 + seed)
        out.append((f"random{seed}", random_decomposition(rng, rng.randint(4, 7))))
    return [(name, D) for name, D in out if D.num_vertices <= max_vertices]


@pytest.fixture(scope="session")
def small_corpus():
    return corpus(5)


# ------------------------------------------------------------------ acceptance report

_CRITERIA: dict[int, tuple[str, str, float]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is not None and report.when == "call":
        number, title = marker.args
        _CRITERIA[number] = (title, "PASS" if report.passed else "FAIL", report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, status, seconds = _CRITERIA[number]
        terminalreporter.write_line(f"{status}  criterion {number:2d}: {title} ({seconds:.2f}s)")
