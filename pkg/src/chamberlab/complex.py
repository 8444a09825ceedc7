"""Order complexes and the bounded positive cover complex.

The bounded complex has one vertex per class of positive paths from a base
chamber with at most ``m`` edges. A set of classes is a simplex when it reads
``gamma, gamma.a1, gamma.a1.a2, ...`` with every ``a_i`` positive minimal and
the composite ``a1...ad`` positive minimal as well.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .arrangement import Arrangement, ArrangementError, Chamber
from .paths import PathClass, PathClasses, galleries, path_class, path_topes, property_d_at
from .poset import Interval, RegionPoset, _bits

Simplex = frozenset[int]


@dataclass(frozen=True)
class SimplicialComplexData:
    """A finite simplicial complex given by labeled vertices and its facets."""

    labels: tuple[str, ...]
    facets: frozenset[Simplex]

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset().union(*self.facets) if self.facets else frozenset()

    def simplices(self) -> set[Simplex]:
        return all_faces(self.facets)

    def f_vector(self) -> list[int]:
        return f_vector(self.simplices())

    def euler_characteristic(self) -> int:
        return euler_characteristic(self.simplices())

    def labeled_facets(self) -> set[frozenset[str]]:
        return {frozenset(self.labels[v] for v in f) for f in self.facets}


def all_faces(facets: Iterable[Simplex]) -> set[Simplex]:
    out: set[Simplex] = set()
    for f in facets:
        if f in out:
            continue
        items = sorted(f)
        for r in range(1, len(items) + 1):
            out.update(frozenset(c) for c in combinations(items, r))
    return out


def maximal_sets(sets: Iterable[Simplex]) -> frozenset[Simplex]:
    """Inclusion-maximal members of a down-closed family of sets."""
    sets = set(sets)
    dominated = {s - {v} for s in sets for v in s}
    return frozenset(s for s in sets if s not in dominated)


def f_vector(simplices: Iterable[Simplex]) -> list[int]:
    counts: dict[int, int] = {}
    for s in simplices:
        counts[len(s) - 1] = counts.get(len(s) - 1, 0) + 1
    return [counts.get(d, 0) for d in range(max(counts, default=-1) + 1)]


def euler_characteristic(simplices: Iterable[Simplex]) -> int:
    return sum((-1) ** (len(s) - 1) for s in simplices)


def gf2_rank(rows: Iterable[int]) -> int:
    """Rank over the two-element field of rows given as int bitmasks."""
    basis: dict[int, int] = {}
    for r in rows:
        while r:
            top = r.bit_length() - 1
            if top not in basis:
                basis[top] = r
                break
            r ^= basis[top]
    return len(basis)


def reduced_betti_mod2(simplices: set[Simplex], upto: int = 1) -> list[int]:
    """Reduced Betti numbers over GF(2) in degrees ``0..upto``."""
    by_dim: dict[int, list[Simplex]] = {}
    for s in simplices:
        by_dim.setdefault(len(s) - 1, []).append(s)
    index = {d: {s: i for i, s in enumerate(sorted(ss, key=sorted))} for d, ss in by_dim.items()}

    def boundary_rank(d: int) -> int:
        if d == 0:
            return 1 if by_dim.get(0) else 0  # augmentation to the empty simplex
        lower = index.get(d - 1, {})
        rows = []
        for s in by_dim.get(d, []):
            row = 0
            for v in s:
                row |= 1 << lower[s - {v}]
            rows.append(row)
        return gf2_rank(rows)

    ranks = [boundary_rank(d) for d in range(upto + 2)]
    return [len(by_dim.get(d, [])) - ranks[d] - ranks[d + 1] for d in range(upto + 1)]


# -- order complexes -------------------------------------------------------------

def order_complex(p: RegionPoset | Interval) -> SimplicialComplexData:
    """Chains of the poset (or interval); facets are the maximal chains."""
    if isinstance(p, Interval):
        poset, members = p.poset, [c.id for c in p.members]
    else:
        poset, members = p, list(range(len(p)))
    mask = sum(1 << i for i in members)
    chains: list[Simplex] = []

    def extend(chain: list[int], top: int) -> None:
        nxt = [j for j in poset.cover_ids(top) if mask >> j & 1]
        if not nxt:
            chains.append(frozenset(chain))
            return
        for j in nxt:
            chain.append(j)
            extend(chain, j)
            chain.pop()

    for lo in poset.minimal_ids(mask):
        extend([lo], lo)
    labels = tuple(c.tope for c in poset.arr.chambers)
    return SimplicialComplexData(labels, maximal_sets(all_faces(chains)))


# -- bounded positive complex ------------------------------------------------------

@dataclass(frozen=True, eq=False)
class BoundedCoverComplex:
    arr: Arrangement
    base: Chamber
    depth: int
    vertices: tuple[PathClass, ...]
    facets: frozenset[Simplex]
    _classes: PathClasses = field(repr=False)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(">".join(path_topes(self.arr, v.representative)) for v in self.vertices)

    def vertex_index(self, g: PathClass | Sequence[int]) -> int:
        rep = g.representative if isinstance(g, PathClass) else self._classes.class_of(g).representative
        return self._index[rep]

    @property
    def _index(self) -> dict:
        idx = self.__dict__.get("_idx")
        if idx is None:
            idx = {v.representative: i for i, v in enumerate(self.vertices)}
            object.__setattr__(self, "_idx", idx)
        return idx

    def length(self, v: int) -> int:
        return self.vertices[v].length

    def simplices(self) -> set[Simplex]:
        return all_faces(self.facets)

    def as_data(self) -> SimplicialComplexData:
        return SimplicialComplexData(self.labels, self.facets)

    def restrict(self, m: int) -> "BoundedCoverComplex":
        """The subcomplex on classes with at most ``m`` edges."""
        keep = [i for i, v in enumerate(self.vertices) if v.length <= m]
        renum = {old: new for new, old in enumerate(keep)}
        faces = {
            frozenset(renum[v] for v in s)
            for s in self.simplices()
            if all(v in renum for v in s)
        }
        return BoundedCoverComplex(
            self.arr, self.base, m, tuple(self.vertices[i] for i in keep),
            maximal_sets(faces), self._classes,
        )

    def to_document(self) -> dict:
        labels = [path_topes(self.arr, v.representative) for v in self.vertices]
        return {
            "base": self.base.tope,
            "depth": self.depth,
            "vertices": labels,
            "facets": [[labels[v] for v in sorted(f)] for f in sorted(self.facets, key=sorted)],
        }


def _chains_from(p: RegionPoset, bottom: int, limit: int) -> list[list[int]]:
    """Maximal saturated chains from ``bottom`` among elements of rank <= limit."""
    out = []

    def extend(chain: list[int]) -> None:
        nxt = [j for j in p.cover_ids(chain[-1]) if p.rank_list[j] <= limit]
        if not nxt:
            out.append(list(chain))
            return
        for j in nxt:
            chain.append(j)
            extend(chain)
            chain.pop()

    extend([bottom])
    return out


def build_positive_complex(arr: Arrangement, base: Chamber | str, m: int) -> BoundedCoverComplex:
    """Build the complex on path classes of length at most ``m``.

    Every simplex has a unique shortest vertex ``gamma`` ending at ``D``; the
    simplices with bottom ``gamma`` are the images of chains from ``D`` in the
    poset based at ``D``, each chamber ``X`` going to the class of
    ``gamma`` followed by a minimal path ``D -> X``.
    """
    if m < 0:
        raise ArrangementError("depth must be non-negative")
    classes = PathClasses(arr, base)
    gal = galleries(arr)
    vertices = tuple(classes.upto(m))
    index = {v.representative: i for i, v in enumerate(vertices)}
    simplices: set[Simplex] = set()
    for vi, g in enumerate(vertices):
        d = g.end
        p = gal.poset(d)
        room = m - g.length
        image: dict[int, int] = {}
        for chain in _chains_from(p, d, room):
            ids = []
            for x in chain:
                if x not in image:
                    rep = classes.class_of(g.representative + gal.minimal(d, x)[0][1:]).representative
                    image[x] = index[rep]
                ids.append(image[x])
            rest = ids[1:]
            for r in range(len(rest) + 1):
                for sub in combinations(rest, r):
                    simplices.add(frozenset((vi,) + sub))
    return BoundedCoverComplex(
        arr, classes.base, m, vertices, maximal_sets(simplices), classes
    )


def is_simplex(cx: BoundedCoverComplex, vertex_set: Iterable[int]) -> bool:
    """Decide the simplex condition directly, through the prefix order.

    Sorts the classes by length, then looks for a member of the longest
    class of the form ``rep(shortest) + mu`` with ``mu`` minimal whose
    prefixes land in each intermediate class. Class members come from a
    fresh breadth-first closure, independent of the complex construction.
    """
    vs = sorted(set(vertex_set), key=lambda v: cx.vertices[v].length)
    if not vs:
        return False
    lengths = [cx.vertices[v].length for v in vs]
    if len(set(lengths)) != len(lengths):
        return False
    if len(vs) == 1:
        return True
    arr = cx.arr
    gal = galleries(arr)
    first = cx.vertices[vs[0]].representative
    closures = [path_class(arr, cx.vertices[v].representative) for v in vs[1:]]
    l0 = len(first)
    for q in closures[-1].members:
        if q[:l0] != first:
            continue
        mu = q[l0 - 1 :]
        if len(mu) - 1 != gal.distance(mu[0], mu[-1]):
            continue
        if all(q[: len(cl.representative)] in cl for cl in closures[:-1]):
            return True
    return False


def link_and_star(cx: BoundedCoverComplex, v: int | PathClass) -> tuple[SimplicialComplexData, SimplicialComplexData]:
    """Star and link of a vertex, both on the labels of ``cx``."""
    if isinstance(v, PathClass):
        v = cx.vertex_index(v)
    if not 0 <= v < len(cx.vertices):
        raise ArrangementError(f"vertex {v} is not in the complex")
    star = frozenset(f for f in cx.facets if v in f)
    link = frozenset(f - {v} for f in star if len(f) > 1)
    labels = cx.labels
    return SimplicialComplexData(labels, link), SimplicialComplexData(labels, star)


# -- retraction ----------------------------------------------------------------

@dataclass(frozen=True)
class RetractionStep:
    vertex: int
    path: tuple[str, ...]
    end: str
    c_gamma: str | None
    link_matches_interval: bool
    link_is_cone: bool
    violation: dict | None = None

    @property
    def passed(self) -> bool:
        return self.c_gamma is not None and self.link_matches_interval and self.link_is_cone

    def to_document(self) -> dict:
        doc = {
            "vertex": list(self.path),
            "end": self.end,
            "C_gamma": self.c_gamma,
            "link_is_interval": self.link_matches_interval,
            "link_is_cone": self.link_is_cone,
            "pass": self.passed,
        }
        if self.violation is not None:
            doc["violation"] = self.violation
        return doc


@dataclass(frozen=True)
class RetractionReport:
    depth: int
    vertices: int
    facets: int
    euler: int
    steps: tuple[RetractionStep, ...]
    stars_disjoint: bool

    @property
    def passed(self) -> bool:
        return self.stars_disjoint and all(s.passed for s in self.steps)

    @property
    def blocked(self) -> tuple[RetractionStep, ...]:
        return tuple(s for s in self.steps if s.c_gamma is None)

    def to_document(self) -> dict:
        return {
            "depth": self.depth,
            "vertices": self.vertices,
            "facets": self.facets,
            "euler": self.euler,
            "stars_disjoint": self.stars_disjoint,
            "pass": self.passed,
            "steps": [s.to_document() for s in self.steps],
        }


def verify_retraction_step(cx: BoundedCoverComplex) -> RetractionReport:
    """Check, for each top-length vertex, that its link is the cone ``Delta((C, C_gamma])``."""
    m = cx.depth
    if m < 1:
        raise ArrangementError("retraction needs depth at least 1")
    arr = cx.arr
    gal = galleries(arr)
    top = [i for i, v in enumerate(cx.vertices) if v.length == m]
    simplices = cx.simplices()
    steps = []
    for vi in top:
        g = cx.vertices[vi]
        res = property_d_at(arr, g)
        path = tuple(path_topes(arr, g.representative))
        end = arr.chambers[g.end]
        if not res.holds:
            steps.append(RetractionStep(vi, path, end.tope, None, False, False, res.to_document(arr)))
            continue
        link, _ = link_and_star(cx, vi)
        ends = {u: cx.vertices[u].end for u in link.vertices}
        p = gal.poset(end.id)
        interval_ids = set(_bits(p.down[res.c_gamma.id] & ~(1 << end.id)))
        injective = len(set(ends.values())) == len(ends)
        matches = injective and set(ends.values()) == interval_ids
        if matches:
            link_chains = {frozenset(ends[u] for u in s) for s in link.simplices()}
            interval_chains = {
                frozenset(c)
                for r in range(1, len(interval_ids) + 1)
                for c in combinations(sorted(interval_ids), r)
                if all(p.leq_id(x, y) or p.leq_id(y, x) for x, y in combinations(c, 2))
            }
            matches = link_chains == interval_chains
        apex = [u for u, e in ends.items() if e == res.c_gamma.id]
        cone = len(apex) == 1 and all(apex[0] in f for f in link.facets)
        steps.append(RetractionStep(vi, path, end.tope, res.c_gamma.tope, matches, cone))
    # no simplex may hold two vertices of top length
    top_set = set(top)
    disjoint = all(len(s & top_set) <= 1 for s in cx.facets)
    return RetractionReport(
        m, len(cx.vertices), len(cx.facets), euler_characteristic(simplices), tuple(steps), disjoint
    )


@dataclass(frozen=True)
class DepthSummary:
    depth: int
    vertices: int
    facets: int
    euler: int
    reduced_betti: tuple[int, int]
    retraction: RetractionReport | None

    def to_document(self) -> dict:
        doc = {
            "depth": self.depth,
            "vertices": self.vertices,
            "facets": self.facets,
            "euler": self.euler,
            "reduced_betti_mod2": list(self.reduced_betti),
        }
        if self.retraction is not None:
            doc["retraction"] = self.retraction.to_document()
        return doc


@dataclass(frozen=True)
class ContractibilityReport:
    base: Chamber
    m_max: int
    depths: tuple[DepthSummary, ...]

    @property
    def collapses(self) -> bool:
        return all(d.retraction is None or d.retraction.passed for d in self.depths)

    @property
    def first_blocked_depth(self) -> int | None:
        blocked = [d.depth for d in self.depths if d.retraction is not None and d.retraction.blocked]
        return min(blocked) if blocked else None

    @property
    def first_blocked(self) -> RetractionStep | None:
        m = self.first_blocked_depth
        if m is None:
            return None
        return next(d.retraction.blocked[0] for d in self.depths if d.depth == m)

    def to_document(self) -> dict:
        doc = {
            "base": self.base.tope,
            "m_max": self.m_max,
            "verdict": "collapses to a point" if self.collapses else "blocked",
            "depths": [d.to_document() for d in self.depths],
        }
        if not self.collapses:
            doc["first_blocked_depth"] = self.first_blocked_depth
            blocked = self.first_blocked
            if blocked is not None:
                doc["witness"] = blocked.to_document()
        return doc


def contractibility_report(arr: Arrangement, base: Chamber | str, m_max: int) -> ContractibilityReport:
    """Run the retraction check from ``m_max`` down to 1, with homology as a cross-check."""
    if m_max < 1:
        raise ArrangementError("m_max must be at least 1")
    full = build_positive_complex(arr, base, m_max)
    depths = []
    for m in range(m_max, -1, -1):
        cx = full if m == m_max else full.restrict(m)
        simplices = cx.simplices()
        betti = reduced_betti_mod2(simplices, upto=1)
        step = verify_retraction_step(cx) if m >= 1 else None
        depths.append(DepthSummary(
            m, len(cx.vertices), len(cx.facets), euler_characteristic(simplices), tuple(betti), step
        ))
    return ContractibilityReport(full.base, m_max, tuple(depths))
