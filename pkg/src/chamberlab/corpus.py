"""Small named arrangements used in tests and as CLI examples."""
from __future__ import annotations

from itertools import combinations

from .arrangement import Arrangement, essentialize, from_normals


def coordinate(d: int) -> Arrangement:
    return from_normals([[int(i == j) for j in range(d)] for i in range(d)])


def pencil(n: int) -> Arrangement:
    """``n`` distinct lines through the origin of the plane."""
    normals = [[1, 0], [0, 1], [1, 1], [1, -1], [1, 2], [2, 1], [1, -2]][:n]
    if len(normals) < n:
        raise ValueError("pencil supports at most 7 lines")
    return from_normals(normals)


def braid(k: int, essential: bool = True) -> Arrangement:
    """Hyperplanes ``x_i = x_j`` in ``k`` coordinates."""
    normals = []
    for i, j in combinations(range(k), 2):
        v = [0] * k
        v[i], v[j] = 1, -1
        normals.append(v)
    arr = from_normals(normals)
    return essentialize(arr) if essential else arr


def generic4() -> Arrangement:
    """Four planes in general position in 3-space."""
    return from_normals([[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]])


def generic5() -> Arrangement:
    return from_normals([[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1], [1, 2, 3]])


def b2() -> Arrangement:
    """Reflection arrangement of type B2: four lines."""
    return from_normals([[1, 0], [0, 1], [1, 1], [1, -1]])


def pencil_times_line() -> Arrangement:
    """Product of three lines in the plane with a point on a line (simplicial)."""
    return from_normals([[1, 0, 0], [0, 1, 0], [1, 1, 0], [0, 0, 1]])


def near_pencil() -> Arrangement:
    """Three planes through a common line plus one transverse plane."""
    return from_normals([[1, 0, 0], [0, 1, 0], [1, 1, 0], [1, 1, 1]])


def corpus() -> dict[str, Arrangement]:
    return {
        "coordinate-2": coordinate(2),
        "coordinate-3": coordinate(3),
        "coordinate-4": coordinate(4),
        "pencil-2": pencil(2),
        "pencil-3": pencil(3),
        "pencil-4": pencil(4),
        "pencil-5": pencil(5),
        "braid-3": braid(3),
        "b2": b2(),
        "pencil-times-line": pencil_times_line(),
        "near-pencil": near_pencil(),
        "generic-4": generic4(),
        "generic-5": generic5(),
        "braid-4": braid(4),
    }


def random_arrangement(n: int, d: int, seed: int, spread: int = 3) -> Arrangement:
    """Seeded essential arrangement with small integer normals."""
    import random

    from . import exact

    rng = random.Random(seed)
    normals: list[list[int]] = []
    while len(normals) < n:
        v = [rng.randint(-spread, spread) for _ in range(d)]
        if any(v) and not any(exact.proportional(u, v) for u in normals):
            normals.append(v)
    arr = from_normals(normals)
    if not arr.is_essential:
        return random_arrangement(n, d, seed + 1000, spread)
    return arr


def random_family() -> dict[str, Arrangement]:
    shapes = [(5, 3), (6, 3), (5, 4), (6, 4)]
    return {
        f"random-{n}-{d}-{seed}": random_arrangement(n, d, seed)
        for seed, (n, d) in enumerate(shapes * 2)
    }
