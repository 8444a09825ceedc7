from __future__ import annotations

import random
from itertools import combinations

import pytest

from chamberlab import exact
from chamberlab.corpus import corpus

CORPUS = corpus()
SMALL = {k: v for k, v in CORPUS.items() if v.n <= 5}


def whitney_chamber_count(arr) -> int:
    """Chamber count of a central arrangement from ranks of subsets alone."""
    normals = arr.normals
    total = 0
    for k in range(arr.n + 1):
        for sub in combinations(normals, k):
            total += (-1) ** (k - exact.rank(list(sub)))
    return total


def random_walk(arr, rng: random.Random, length: int, start: int | None = None) -> tuple[int, ...]:
    c = rng.randrange(len(arr.chambers)) if start is None else start
    path = [c]
    for _ in range(length):
        c = rng.choice(arr.neighbors[c])[0]
        path.append(c)
    return tuple(path)


@pytest.fixture(params=sorted(CORPUS), scope="session")
def named_arrangement(request):
    return request.param, CORPUS[request.param]


@pytest.fixture(params=sorted(SMALL), scope="session")
def small_arrangement(request):
    return request.param, SMALL[request.param]


ACCEPTANCE: list[tuple[int, str, str, float]] = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is not None and rep.when == "call":
        ACCEPTANCE.append((marker.args[0], marker.args[1], rep.outcome, rep.duration))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, outcome, duration in sorted(ACCEPTANCE):
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {number:2d}: {title} ({duration:.1f}s)")
