"""Positive paths on the arrangement graph and their equivalence classes.

A path is a tuple of chamber ids. Two positive paths are equivalent when one
can be turned into the other by repeatedly replacing a positive minimal
subpath with another positive minimal path between the same chambers.
"""
from __future__ import annotations

import weakref
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .arrangement import Arrangement, ArrangementError, Chamber
from .poset import InconsistencyError, NonLatticeWitness, RegionPoset, _bits

Path = tuple[int, ...]

DEFAULT_STATE_CAP = 10**6


class ClosureLimitError(RuntimeError):
    """A rewriting closure grew past the configured safety cap."""


@dataclass(frozen=True)
class ArrangementGraph:
    vertices: tuple[Chamber, ...]
    edges: tuple[tuple[int, int], ...]

    def out_degree(self, c: Chamber) -> int:
        return sum(1 for a, _ in self.edges if a == c.id)

    def dot(self) -> str:
        lines = ['graph "arrangement" {']
        lines += [f'  "{c.tope}";' for c in self.vertices]
        for a, b in self.edges:
            if a < b:
                lines.append(f'  "{self.vertices[a].tope}" -- "{self.vertices[b].tope}";')
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_graph(arr: Arrangement) -> ArrangementGraph:
    edges = tuple((i, j) for i, nb in enumerate(arr.neighbors) for j, _ in nb)
    return ArrangementGraph(arr.chambers, edges)


class _Galleries:
    """Per-arrangement caches of walls and minimal paths."""

    def __init__(self, arr: Arrangement):
        self.arr = arr
        self.masks = arr.masks
        self._minimal: dict[tuple[int, int], tuple[Path, ...]] = {}
        self._posets: dict[int, RegionPoset] = {}
        self.walls = [dict(nb) for nb in arr.neighbors]

    def poset(self, base: int) -> RegionPoset:
        p = self._posets.get(base)
        if p is None:
            p = self._posets[base] = RegionPoset(self.arr, base)
        return p

    def wall(self, a: int, b: int) -> int:
        diff = self.masks[a] ^ self.masks[b]
        if diff == 0 or diff & (diff - 1):
            raise ArrangementError(f"chambers {a} and {b} are not adjacent")
        return diff.bit_length() - 1

    def distance(self, a: int, b: int) -> int:
        return (self.masks[a] ^ self.masks[b]).bit_count()

    def minimal(self, a: int, b: int) -> tuple[Path, ...]:
        key = (a, b)
        hit = self._minimal.get(key)
        if hit is None:
            hit = tuple(sorted(self._minimal_paths(a, b)))
            self._minimal[key] = hit
        return hit

    def _minimal_paths(self, a: int, b: int) -> list[Path]:
        target = self.masks[b]
        nbrs = self.arr.neighbors
        out = []

        def walk(x: int, trail: list[int]) -> None:
            remaining = self.masks[x] ^ target
            if not remaining:
                out.append(tuple(trail))
                return
            for y, h in nbrs[x]:
                if remaining >> h & 1:
                    trail.append(y)
                    walk(y, trail)
                    trail.pop()

        walk(a, [a])
        return out

    def minimal_suffix_start(self, path: Sequence[int]) -> int:
        """Smallest i such that ``path[i:]`` is a positive minimal path."""
        walls = self.walls
        seen = 0
        i = len(path) - 1
        while i > 0:
            h = 1 << walls[path[i - 1]][path[i]]
            if seen & h:
                break
            seen |= h
            i -= 1
        return i

    def rewrites(self, path: Path) -> Iterable[Path]:
        """Every path one substitution away from ``path``.

        Only maximal minimal segments are rewritten: a substitution inside a
        minimal segment is also a substitution of the whole segment.
        """
        k = len(path) - 1
        last_end = -1
        for i in range(k):
            seen = 0
            j = i
            while j < k:
                h = 1 << self.wall(path[j], path[j + 1])
                if seen & h:
                    break
                seen |= h
                j += 1
            if j <= last_end or j - i < 2:
                continue
            last_end = j
            seg = path[i : j + 1]
            for alt in self.minimal(path[i], path[j]):
                if alt != seg:
                    yield path[:i] + alt + path[j + 1 :]


_cache: "weakref.WeakKeyDictionary[Arrangement, _Galleries]" = weakref.WeakKeyDictionary()


def galleries(arr: Arrangement) -> _Galleries:
    g = _cache.get(arr)
    if g is None:
        g = _cache[arr] = _Galleries(arr)
    return g


def path_ids(arr: Arrangement, path: Sequence) -> Path:
    """Normalize a path given as chambers, topes, or ids, and check adjacency."""
    ids = tuple(arr.chamber(c).id for c in path)
    if not ids:
        raise ArrangementError("a path has at least one chamber")
    g = galleries(arr)
    for a, b in zip(ids, ids[1:]):
        g.wall(a, b)
    return ids


def path_topes(arr: Arrangement, path: Sequence[int]) -> list[str]:
    return [arr.chambers[i].tope for i in path]


def minimal_paths(arr: Arrangement, c1: Chamber, c2: Chamber) -> list[Path]:
    return list(galleries(arr).minimal(arr.chamber(c1).id, arr.chamber(c2).id))


def is_minimal(arr: Arrangement, path: Sequence[int]) -> bool:
    return len(path) - 1 == galleries(arr).distance(path[0], path[-1])


def crossing_vector(arr: Arrangement, path: Sequence) -> tuple[int, ...]:
    ids = path_ids(arr, path)
    g = galleries(arr)
    counts = [0] * arr.n
    for a, b in zip(ids, ids[1:]):
        counts[g.wall(a, b)] += 1
    return tuple(counts)


# -- classes -------------------------------------------------------------------

class PathClass:
    """An equivalence class of positive paths.

    Classes produced by :class:`PathClasses` list their members lazily; the
    end-decomposition chambers are then known without expanding them.
    """

    def __init__(self, representative: Path, members=None, *, loader=None, end_ids=None):
        self.representative = tuple(representative)
        self._members = None if members is None else tuple(members)
        self._loader = loader
        self._end_ids = end_ids

    @property
    def members(self) -> tuple[Path, ...]:
        if self._members is None:
            self._members = self._loader()
        return self._members

    @property
    def start(self) -> int:
        return self.representative[0]

    @property
    def end(self) -> int:
        return self.representative[-1]

    @property
    def length(self) -> int:
        return len(self.representative) - 1

    def __eq__(self, other):
        return isinstance(other, PathClass) and self.representative == other.representative

    def __hash__(self):
        return hash(self.representative)

    def __repr__(self):
        return f"PathClass({self.representative})"

    def __contains__(self, path) -> bool:
        return tuple(path) in self._member_set

    @cached_property
    def _member_set(self) -> frozenset[Path]:
        return frozenset(self.members)


def path_class(arr: Arrangement, path: Sequence, cap: int = DEFAULT_STATE_CAP) -> PathClass:
    """Breadth-first closure of ``path`` under minimal-path substitution."""
    start = path_ids(arr, path)
    g = galleries(arr)
    seen = {start}
    todo = deque([start])
    while todo:
        p = todo.popleft()
        for q in g.rewrites(p):
            if q not in seen:
                seen.add(q)
                if len(seen) > cap:
                    raise ClosureLimitError(f"closure exceeded {cap} paths")
                todo.append(q)
    members = tuple(sorted(seen))
    return PathClass(members[0], members)


def path_equivalent(arr: Arrangement, p: Sequence, q: Sequence, cap: int = DEFAULT_STATE_CAP) -> bool:
    p, q = path_ids(arr, p), path_ids(arr, q)
    if len(p) != len(q) or p[0] != q[0] or p[-1] != q[-1]:
        return False
    if p == q:
        return True
    g = galleries(arr)
    seen = {p}
    todo = deque([p])
    while todo:
        x = todo.popleft()
        for y in g.rewrites(x):
            if y == q:
                return True
            if y not in seen:
                seen.add(y)
                if len(seen) > cap:
                    raise ClosureLimitError(f"closure exceeded {cap} paths")
                todo.append(y)
    return False


class PathClasses:
    """All classes of positive paths from ``base``, built one length at a time.

    The class of ``gamma.e`` is a union of blocks ``(class of gamma', e')``.
    Blocks are merged by rewriting the longest minimal suffix of each member:
    a rewrite that avoids the last edge stays inside its block.

    Members are never enumerated here. Each class keeps the set of its
    *signatures* ``(lambda, sigma)``: ``sigma`` is the longest minimal suffix
    of some member and ``lambda`` the class of the prefix in front of it.
    Merging and end decompositions only depend on signatures, and the
    successor table ``step[(class, chamber)]`` folds any prefix.
    """

    def __init__(self, arr: Arrangement, base: Chamber | str | int, cap: int = DEFAULT_STATE_CAP):
        self.arr = arr
        self.base = arr.chamber(base)
        self.cap = cap
        self._g = galleries(arr)
        b = self.base.id
        # global class ids; level boundaries in _levels
        self._reps: list[Path] = [(b,)]
        self._sigs: list[frozenset[tuple[int, Path]]] = [frozenset({(0, (b,))})]
        self._blocks: list[tuple[tuple[int, int], ...]] = [()]
        self._levels: list[list[int]] = [[0]]
        self._step: dict[tuple[int, int], int] = {}
        self._objects: dict[int, PathClass] = {}
        self._size = 1

    def level(self, k: int) -> list[PathClass]:
        """Classes of length ``k`` in canonical (representative) order."""
        while len(self._levels) <= k:
            self._grow()
        return [self._object(i) for i in self._levels[k]]

    def upto(self, k: int) -> list[PathClass]:
        return [c for j in range(k + 1) for c in self.level(j)]

    def _object(self, gid: int) -> PathClass:
        obj = self._objects.get(gid)
        if obj is None:
            end_ids = set()
            for _, sigma in self._sigs[gid]:
                end_ids.update(sigma[:-1])
            obj = PathClass(
                self._reps[gid], loader=lambda: self._members(gid), end_ids=frozenset(end_ids)
            )
            self._objects[gid] = obj
        return obj

    def _members(self, gid: int) -> tuple[Path, ...]:
        if not self._blocks[gid]:
            return (self._reps[gid],)
        out = []
        for prev, e in self._blocks[gid]:
            out.extend(p + (e,) for p in self._members(prev))
        return tuple(sorted(out))

    def _fold(self, gid: int, chambers: Sequence[int]) -> int:
        step = self._step
        for c in chambers:
            gid = step[(gid, c)]
        return gid

    def class_id(self, path: Sequence[int]) -> int:
        path = tuple(path)
        if path[0] != self.base.id:
            raise ArrangementError("path does not start at the base chamber")
        self.level(len(path) - 1)
        try:
            return self._fold(0, path[1:])
        except KeyError:
            raise ArrangementError(f"{path} is not a positive path") from None

    def class_of(self, path: Sequence[int]) -> PathClass:
        return self._object(self.class_id(path))

    def _grow(self) -> None:
        prev = self._levels[-1]
        nbrs = self.arr.neighbors
        walls = self._g.walls
        minimal = self._g.minimal
        fold = self._fold
        block_list: list[tuple[int, int]] = [(ci, e) for ci in prev for e, _ in nbrs[self._reps[ci][-1]]]
        blocks = {blk: i for i, blk in enumerate(block_list)}
        parent = list(range(len(block_list)))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        block_sigs: list[set[tuple[int, Path]]] = []
        for bi, (ci, e) in enumerate(block_list):
            new_sigs = set()
            for lam, sigma in self._sigs[ci]:
                h = walls[sigma[-1]][e]
                t = len(sigma) - 1
                while t > 0 and walls[sigma[t - 1]][sigma[t]] != h:
                    t -= 1
                if t:
                    lam = fold(lam, sigma[1 : t + 1])
                    sigma = sigma[t:]
                sigma = sigma + (e,)
                new_sigs.add((lam, sigma))
                if len(sigma) < 3:
                    continue
                for alt in minimal(sigma[0], e):
                    if alt == sigma:
                        continue
                    other = blocks[(fold(lam, alt[1:-1]), alt[-1])]
                    ra, rb = find(bi), find(other)
                    if ra != rb:
                        parent[ra] = rb
            block_sigs.append(new_sigs)
        groups: dict[int, list[int]] = {}
        for bi in range(len(block_list)):
            groups.setdefault(find(bi), []).append(bi)
        made = []
        for bis in groups.values():
            rep = min(self._reps[block_list[b][0]] + (block_list[b][1],) for b in bis)
            sigs = frozenset().union(*(block_sigs[b] for b in bis))
            made.append((rep, sigs, tuple(block_list[b] for b in bis)))
        made.sort(key=lambda x: x[0])
        ids = []
        for rep, sigs, blks in made:
            gid = len(self._reps)
            self._reps.append(rep)
            self._sigs.append(sigs)
            self._blocks.append(blks)
            ids.append(gid)
            self._size += len(sigs)
            for blk in blks:
                self._step[blk] = gid
        if self._size > self.cap:
            raise ClosureLimitError(f"class enumeration exceeded {self.cap} states")
        self._levels.append(ids)


_class_cache: "weakref.WeakKeyDictionary[Arrangement, dict[int, PathClasses]]" = weakref.WeakKeyDictionary()


def path_classes(arr: Arrangement, base: Chamber | str | int) -> PathClasses:
    """Shared, lazily grown class table for ``(arr, base)``."""
    per_arr = _class_cache.setdefault(arr, {})
    b = arr.chamber(base).id
    if b not in per_arr:
        per_arr[b] = PathClasses(arr, b)
    return per_arr[b]


# -- property D ----------------------------------------------------------------

def end_decompositions(arr: Arrangement, g: PathClass) -> set[Chamber]:
    """Chambers ``C'`` (other than the end) with a member ending in a minimal ``C' -> end``."""
    return {arr.chambers[i] for i in _end_mask_ids(arr, g)}


def _end_mask_ids(arr: Arrangement, g: PathClass) -> set[int]:
    if g._end_ids is not None:
        return set(g._end_ids)
    gal = galleries(arr)
    out: set[int] = set()
    for p in g.members:
        out.update(p[gal.minimal_suffix_start(p) : -1])
    return out


@dataclass(frozen=True)
class PropertyDCheck:
    """Outcome of testing one path class.

    ``c_gamma`` is set when the end decompositions form ``(C, c_gamma]`` in
    the poset based at the end chamber ``C``; otherwise it is None and
    ``maximal`` lists the maximal elements of the offending set.
    """

    path_class: PathClass
    end: Chamber
    end_set: tuple[Chamber, ...]
    maximal: tuple[Chamber, ...]
    c_gamma: Chamber | None

    @property
    def holds(self) -> bool:
        return self.c_gamma is not None

    def to_document(self, arr: Arrangement) -> dict:
        return {
            "path": path_topes(arr, self.path_class.representative),
            "end": self.end.tope,
            "E": [c.tope for c in self.end_set],
            "maximal_elements": [c.tope for c in self.maximal],
            "C_gamma": self.c_gamma.tope if self.c_gamma else None,
        }


def property_d_at(arr: Arrangement, g: PathClass) -> PropertyDCheck:
    end = arr.chambers[g.end]
    p = galleries(arr).poset(end.id)
    e_ids = _end_mask_ids(arr, g)
    mask = sum(1 << i for i in e_ids)
    maxima = p.maximal_ids(mask)
    c_gamma = None
    if not e_ids:
        c_gamma = end
    elif len(maxima) == 1:
        top = maxima[0]
        if mask == p.down[top] & ~(1 << end.id):
            c_gamma = arr.chambers[top]
    ch = arr.chambers
    return PropertyDCheck(
        g, end, tuple(ch[i] for i in sorted(e_ids)), tuple(ch[i] for i in maxima), c_gamma
    )


@dataclass(frozen=True)
class PropertyDReport:
    base: Chamber
    max_length: int
    verdict: str  # "verified-to-bound" or "violated"
    classes_checked: int
    violation: PropertyDCheck | None = None

    def to_document(self, arr: Arrangement) -> dict:
        doc = {
            "base": self.base.tope,
            "max_length": self.max_length,
            "verdict": self.verdict,
            "classes_checked": self.classes_checked,
        }
        if self.violation is not None:
            doc["violation"] = self.violation.to_document(arr)
        return doc


VERIFIED = "verified-to-bound"
VIOLATED = "violated"


def verify_property_d_bounded(arr: Arrangement, base: Chamber | str, max_length: int) -> PropertyDReport:
    """Check every path class from ``base`` up to ``max_length`` edges.

    Stops at the first violation in canonical order (by length, then
    representative). A clean pass is evidence up to the bound only.
    """
    if max_length < 1:
        raise ArrangementError("max_length must be at least 1")
    classes = PathClasses(arr, base)
    checked = 0
    for k in range(max_length + 1):
        for g in classes.level(k):
            checked += 1
            res = property_d_at(arr, g)
            if not res.holds:
                return PropertyDReport(classes.base, max_length, VIOLATED, checked, res)
    return PropertyDReport(classes.base, max_length, VERIFIED, checked)


@dataclass(frozen=True)
class Counterexample:
    """A path ``(M -> C)(C -> A1)`` violating property D, with its evidence."""

    witness: NonLatticeWitness
    top: Chamber  # M
    atom: Chamber  # A1
    check: PropertyDCheck
    dominating: tuple[Chamber, ...]  # elements of E above both A and B; empty by construction

    @property
    def path_class(self) -> PathClass:
        return self.check.path_class

    def to_document(self, arr: Arrangement) -> dict:
        return {
            "witness": self.witness.to_document(),
            "M": self.top.tope,
            "A1": self.atom.tope,
            "violation": self.check.to_document(arr),
            "dominating_both": [c.tope for c in self.dominating],
        }


def build_counterexample_path(arr: Arrangement, w: NonLatticeWitness | None) -> Counterexample:
    """Turn a non-lattice witness into a positive path violating property D.

    Works in the poset based at ``w.c``; tries every atom ``A1`` below a
    minimal upper bound ``M`` in canonical order.
    """
    if w is None:
        raise ArrangementError("no non-lattice witness: the poset is a lattice")
    c, a, b = (arr.chamber(x) for x in (w.c, w.a, w.b))
    pc = RegionPoset(arr, c)
    mubs = pc.minimal_ids(pc.up[a.id] & pc.up[b.id])
    if len(mubs) < 2:
        raise InconsistencyError("re-based poset has a join for the witness pair")
    gal = galleries(arr)
    for m in mubs:
        down_m = gal.minimal(m, c.id)[0]
        atoms = [x for x in pc.cover_ids(c.id) if pc.leq_id(x, m)]
        for a1 in sorted(atoms):
            gamma = path_class(arr, down_m + (a1,))
            res = property_d_at(arr, gamma)
            if res.holds:
                continue
            end_poset = RegionPoset(arr, a1)
            e_ids = {x.id for x in res.end_set}
            dom = tuple(
                arr.chambers[k] for k in sorted(e_ids)
                if end_poset.leq_id(a.id, k) and end_poset.leq_id(b.id, k)
            )
            return Counterexample(w, arr.chambers[m], arr.chambers[a1], res, dom)
    raise InconsistencyError("no candidate path violates property D for a non-lattice witness")
