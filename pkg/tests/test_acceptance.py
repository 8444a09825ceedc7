"""Exit criteria. Every check is exact; runtime budgets are asserted where stated."""
import json
import random
import time

import pytest

from chamberlab import (
    brute_force_chambers,
    build_counterexample_path,
    build_positive_complex,
    build_region_poset,
    crossing_vector,
    end_decompositions,
    enumerate_chambers,
    find_non_lattice_witness,
    from_topes,
    interval_isomorphic_to_lower_set,
    is_simplicial_arrangement,
    lattice_properties,
    property_d_at,
    separation_set,
    verify_property_d_bounded,
)
from chamberlab.complex import contractibility_report
from chamberlab.corpus import corpus, random_family
from chamberlab.paths import VERIFIED, PathClasses, build_graph, galleries
from chamberlab.poset import is_lattice_by_covers, is_lattice_by_definition
from chamberlab.report import poset_report

from conftest import random_walk

NAMED = corpus()
RANDOM = random_family()
ALL = {**NAMED, **RANDOM}
SIMPLICIAL = {k: a for k, a in NAMED.items() if is_simplicial_arrangement(a)}
NON_SIMPLICIAL = {k: a for k, a in ALL.items() if not is_simplicial_arrangement(a)}


def banner(msg):
    print(f"  {msg}")


@pytest.mark.criterion(1, "incremental chamber enumeration equals the 2^n oracle")
def test_chamber_count_oracle():
    fresh = {**corpus(), **random_family()}
    assert len(fresh) >= 10
    assert all(a.n <= 6 and a.dimension <= 4 for a in fresh.values())
    for required in ("coordinate-2", "coordinate-3", "pencil-2", "pencil-3", "pencil-4", "pencil-5", "braid-3", "generic-4"):
        assert required in fresh
    start = time.perf_counter()
    for name, arr in fresh.items():
        assert [c.tope for c in enumerate_chambers(arr)] == brute_force_chambers(arr), name
    elapsed = time.perf_counter() - start
    assert len(enumerate_chambers(fresh["generic-4"])) == 14
    banner(f"{len(fresh)} arrangements in {elapsed:.2f}s")
    assert elapsed < 10


@pytest.mark.criterion(2, "simplicial iff strong lattice property")
def test_simplicial_iff_strong_lattice():
    for name, arr in ALL.items():
        assert arr.is_essential
        assert is_simplicial_arrangement(arr) == lattice_properties(arr).strong, name
    assert SIMPLICIAL and NON_SIMPLICIAL


@pytest.mark.criterion(3, "simplicial arrangements: no property-D violation up to length 2n, all bases")
def test_property_d_forward():
    for name, arr in SIMPLICIAL.items():
        start = time.perf_counter()
        for base in arr.chambers:
            rep = verify_property_d_bounded(arr, base, 2 * arr.n)
            assert rep.verdict == VERIFIED, (name, base)
        elapsed = time.perf_counter() - start
        banner(f"{name}: {len(arr.chambers)} bases, length {2 * arr.n}, {elapsed:.1f}s")
        assert elapsed < 60, name


@pytest.mark.criterion(4, "non-simplicial arrangements: witness path violates property D")
def test_property_d_converse():
    for name, arr in NON_SIMPLICIAL.items():
        bases = [c for c in arr.chambers if find_non_lattice_witness(build_region_poset(arr, c))]
        assert bases, name
        for base in bases:
            w = find_non_lattice_witness(build_region_poset(arr, base))
            ce = build_counterexample_path(arr, w)
            res = property_d_at(arr, ce.path_class)
            assert not res.holds
            e = end_decompositions(arr, ce.path_class)
            assert w.a in e and w.b in e
            for view in (w.c, ce.atom):
                q = build_region_poset(arr, view)
                assert not [k for k in e if q.leq(w.a, k) and q.leq(w.b, k)], (name, base, view)


@pytest.mark.criterion(5, "equivalent paths share crossing vectors; parity law")
def test_crossing_invariance():
    classes = 0
    for name, arr in NAMED.items():
        if arr.n > 4:
            continue
        walls = galleries(arr).walls
        for base in arr.chambers:
            pcs = PathClasses(arr, base)
            for cls in pcs.upto(2 * arr.n):
                classes += 1
                vectors = set()
                for p in cls.members:
                    counts = [0] * arr.n
                    for a, b in zip(p, p[1:]):
                        counts[walls[a][b]] += 1
                    vectors.add(tuple(counts))
                assert len(vectors) == 1, (name, cls)
    rng = random.Random(20261016)
    arrs = list(NAMED.values())
    samples = 10_000
    for _ in range(samples):
        arr = rng.choice(arrs)
        p = random_walk(arr, rng, rng.randint(0, 16))
        cv = crossing_vector(arr, p)
        sep = separation_set(arr, arr.chambers[p[0]], arr.chambers[p[-1]])
        assert all(c % 2 == (i in sep) for i, c in enumerate(cv))
        assert sum(cv) == len(p) - 1
    banner(f"{classes} classes checked, {samples} random paths")


@pytest.mark.criterion(6, "intervals are base independent")
def test_intervals():
    pairs = 0
    for name, arr in ALL.items():
        if arr.n > 5:
            continue
        for base in arr.chambers:
            p = build_region_poset(arr, base)
            for lo in arr.chambers:
                for hi in arr.chambers:
                    if p.leq(lo, hi):
                        pairs += 1
                        assert interval_isomorphic_to_lower_set(arr, p, lo, hi), (name, base, lo, hi)
    banner(f"{pairs} intervals")


@pytest.mark.criterion(7, "local covering criterion agrees with the lattice definition")
def test_local_cover_criterion():
    posets = 0
    for name, arr in ALL.items():
        for base in arr.chambers:
            p = build_region_poset(arr, base)
            assert is_lattice_by_covers(p) == is_lattice_by_definition(p), (name, base)
            posets += 1
    banner(f"{posets} posets")
    assert posets >= 200


@pytest.mark.criterion(8, "retraction of the bounded cover complex")
def test_retraction():
    for name, arr in SIMPLICIAL.items():
        for base in arr.chambers:
            rep = contractibility_report(arr, base, 4)
            assert rep.collapses, (name, base)
            for d in rep.depths:
                assert d.euler == 1 and d.reduced_betti == (0, 0), (name, base, d.depth)
                if d.retraction is not None:
                    assert d.retraction.passed and d.retraction.stars_disjoint
    arr = NAMED["generic-4"]
    w = next(
        w for w in (find_non_lattice_witness(build_region_poset(arr, c)) for c in arr.chambers) if w
    )
    ce = build_counterexample_path(arr, w)
    rep = contractibility_report(arr, ce.top, ce.path_class.length)
    assert not rep.collapses
    blocked = rep.first_blocked
    assert blocked.c_gamma is None and blocked.violation["C_gamma"] is None
    top = next(d for d in rep.depths if d.depth == ce.path_class.length)
    cx = build_positive_complex(arr, ce.top, ce.path_class.length)
    assert cx.vertex_index(ce.path_class) in {s.vertex for s in top.retraction.blocked}
    for d in rep.depths:
        if d.retraction is None:
            continue
        for s in d.retraction.blocked:
            g = cx.vertices[s.vertex]
            assert not property_d_at(arr, g).holds


def _reports(arr, depth=3):
    out = {}
    for base in arr.chambers:
        out[base.tope] = {
            "poset": poset_report(arr, base),
            "property_d": verify_property_d_bounded(arr, base, arr.n + 1).to_document(arr),
        }
    base = arr.chambers[0]
    out["complex"] = build_positive_complex(arr, base, depth).to_document()
    out["contractibility"] = contractibility_report(arr, base, depth).to_document()
    return json.dumps(out, sort_keys=True)


@pytest.mark.criterion(9, "tope-mode round trip reproduces every report")
def test_tope_round_trip():
    for name, arr in NAMED.items():
        topes = from_topes(arr.n, [c.tope for c in enumerate_chambers(arr)])
        assert _reports(arr) == _reports(topes), name


@pytest.mark.criterion(10, "Hasse diagram equals the arrangement graph")
def test_hasse_equals_graph():
    for name, arr in ALL.items():
        undirected = {frozenset(e) for e in build_graph(arr).edges}
        for base in arr.chambers:
            assert build_region_poset(arr, base).cover_pairs == undirected, (name, base)
