from itertools import combinations

import pytest

from chamberlab import (
    ArrangementError,
    InputError,
    adjacency_and_walls,
    brute_force_chambers,
    enumerate_chambers,
    essentialize,
    from_topes,
    is_simplicial_arrangement,
    is_simplicial_chamber,
    parse_arrangement,
    separation_set,
    strict_feasible,
)
from chamberlab.arrangement import interior_point, negate
from chamberlab.corpus import braid, coordinate, generic4, pencil

from conftest import CORPUS, whitney_chamber_count


def test_parse_coordinate():
    arr = parse_arrangement({"dimension": 2, "normals": [[1, 0], [0, 1]]})
    assert (arr.n, arr.rank, arr.dimension) == (2, 2, 2)


def test_parse_json_text_and_fractions():
    arr = parse_arrangement('{"dimension": 2, "normals": [["1/2", 0], [0, "-3/7"]]}')
    assert arr.n == 2 and arr.rank == 2


def test_parse_generic_rank():
    arr = parse_arrangement({"dimension": 3, "normals": [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]]})
    assert arr.n == 4 and arr.rank == 3


@pytest.mark.parametrize(
    "doc, where",
    [
        ({"dimension": 2, "normals": [[1, 0], [2, 0]]}, "normals[1]"),
        ({"dimension": 2, "normals": [[0, 0]]}, "normals[0]"),
        ({"dimension": 2, "normals": [[1, "a/b"]]}, "normals[0]"),
        ({"dimension": 2, "normals": [[1, 0, 0]]}, "normals[0]"),
        ({"elements": 2, "topes": ["++", "-"]}, "topes[1]"),
    ],
)
def test_parse_errors_are_located(doc, where):
    with pytest.raises(InputError) as err:
        parse_arrangement(doc)
    assert err.value.where == where


def test_parse_error_reports_json_position():
    with pytest.raises(InputError) as err:
        parse_arrangement('{"dimension": 2,\n "normals": [[1, 0],]}')
    assert err.value.where.startswith("line 2")


def test_duplicate_hyperplane_message():
    with pytest.raises(InputError, match="duplicate"):
        parse_arrangement({"dimension": 2, "normals": [[1, 0], [-2, 0]]})


def test_strict_feasible_examples():
    assert strict_feasible(coordinate(2), "++")
    lines = parse_arrangement({"dimension": 2, "normals": [[1, 0], [0, 1], [1, 1]]})
    assert not strict_feasible(lines, "++-")
    assert sum(strict_feasible(generic4(), p) for p in _patterns(4)) == 14


def _patterns(n):
    from itertools import product

    return ["".join(s) for s in product("+-", repeat=n)]


def test_strict_feasible_rejects_tope_mode():
    t = from_topes(2, ["++", "+-", "-+", "--"])
    with pytest.raises(ArrangementError):
        strict_feasible(t, "++")


def test_enumeration_examples():
    assert [c.tope for c in enumerate_chambers(coordinate(2))] == ["++", "+-", "-+", "--"]
    assert len(enumerate_chambers(pencil(3))) == 6
    assert len(enumerate_chambers(generic4())) == 14


def test_enumeration_matches_brute_force_and_whitney(named_arrangement):
    _, arr = named_arrangement
    topes = [c.tope for c in arr.chambers]
    assert topes == brute_force_chambers(arr)
    assert len(topes) == whitney_chamber_count(arr)
    assert [c.id for c in arr.chambers] == list(range(len(topes)))


def test_every_chamber_has_a_certified_interior_point(named_arrangement):
    _, arr = named_arrangement
    for c in arr.chambers:
        assert arr.sign_of(interior_point(arr, c)) == c.tope


def test_central_symmetry(named_arrangement):
    _, arr = named_arrangement
    topes = {c.tope for c in arr.chambers}
    assert all(negate(t) in topes for t in topes)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_planar_pencils_have_2n_chambers_with_two_walls(n):
    arr = pencil(n)
    assert len(arr.chambers) == 2 * n
    assert all(len(adjacency_and_walls(arr, c)[1]) == 2 for c in arr.chambers)


def test_separation_sets():
    arr = coordinate(2)
    c = {c.tope: c for c in arr.chambers}
    assert separation_set(arr, c["++"], c["-+"]) == {0}
    for x in arr.chambers:
        assert separation_set(arr, x, x) == frozenset()
        assert separation_set(arr, x, arr.chamber(negate(x.tope))) == {0, 1}


def test_separation_set_laws_exhaustive():
    for name, arr in CORPUS.items():
        if arr.n > 6:
            continue
        ch = arr.chambers
        for a in ch:
            for b in ch:
                s = separation_set(arr, a, b)
                assert s == separation_set(arr, b, a)
                assert len(s) == sum(x != y for x, y in zip(a.tope, b.tope))
        if len(ch) <= 14:
            for a in ch:
                for b in ch:
                    for c in ch:
                        assert separation_set(arr, a, c) <= separation_set(arr, a, b) | separation_set(arr, b, c)


def test_separation_rejects_foreign_chamber():
    a, b = coordinate(2), coordinate(3)
    with pytest.raises(ArrangementError):
        separation_set(a, a.chambers[0], b.chambers[0])


def test_adjacency_examples():
    arr = coordinate(2)
    adj, walls = adjacency_and_walls(arr, arr.chamber("++"))
    assert {c.tope for c in adj} == {"-+", "+-"} and walls == {0, 1}
    g = generic4()
    assert max(len(adjacency_and_walls(g, c)[1]) for c in g.chambers) == 4


def test_adjacency_matches_pair_scan(named_arrangement):
    _, arr = named_arrangement
    for c in arr.chambers:
        adj, _ = adjacency_and_walls(arr, c)
        scan = {d for d in arr.chambers if len(separation_set(arr, c, d)) == 1}
        assert adj == scan


def test_simpliciality_examples():
    assert is_simplicial_arrangement(coordinate(2))
    assert is_simplicial_arrangement(pencil(3))
    g = generic4()
    assert not is_simplicial_arrangement(g)
    four = [c for c in g.chambers if len(adjacency_and_walls(g, c)[1]) == 4]
    assert four and not any(is_simplicial_chamber(g, c) for c in four)
    for n in range(2, 6):
        arr = pencil(n)
        assert all(is_simplicial_chamber(arr, c) for c in arr.chambers)


def test_simpliciality_needs_essential_input():
    raw = braid(3, essential=False)
    assert raw.rank == 2 and raw.dimension == 3
    with pytest.raises(ArrangementError, match="essentialize"):
        is_simplicial_arrangement(raw)
    ess = essentialize(raw)
    assert ess.dimension == 2 and ess.rank == 2
    assert [c.tope for c in ess.chambers] == [c.tope for c in raw.chambers]
    assert is_simplicial_arrangement(ess)


def test_from_topes_round_trip():
    arr = generic4()
    t = from_topes(arr.n, [c.tope for c in arr.chambers])
    assert [c.tope for c in t.chambers] == [c.tope for c in arr.chambers]
    assert t.neighbors == arr.neighbors
    with pytest.raises(ArrangementError):
        is_simplicial_arrangement(t)


@pytest.mark.parametrize(
    "topes, match",
    [
        (["++", "--"], "degenerate"),
        (["++", "+-", "-+"], "symmetric"),
        (["++", "++", "--"], "duplicate"),
        (["++", "-+"], "symmetric"),
        (["+++", "-+-", "+-+", "---"], "degenerate"),
    ],
)
def test_from_topes_rejects(topes, match):
    with pytest.raises(ArrangementError, match=match):
        from_topes(len(topes[0]), topes)


def test_hamming_scan_oracle_for_degenerate_tope_set():
    topes = ["++", "--"]
    assert not any(sum(a != b for a, b in zip(x, y)) == 1 for x, y in combinations(topes, 2))
