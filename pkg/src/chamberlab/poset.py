"""Posets of regions: chambers ordered by separation from a base chamber."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

from .arrangement import Arrangement, ArrangementError, Chamber, negate


class InconsistencyError(RuntimeError):
    """Two routes that must agree did not; always an implementation bug."""


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class RegionPoset:
    """The poset of regions of ``arr`` based at ``base``.

    ``C1 <= C2`` iff the hyperplanes separating ``C1`` from the base are a
    subset of those separating ``C2`` from it. Comparability is stored as
    per-element bitsets over chamber ids (``up[i]``, ``down[i]``).
    """

    def __init__(self, arr: Arrangement, base: Chamber | str):
        self.arr = arr
        self.base = arr.chamber(base)
        b = arr.masks[self.base.id]
        self.sep = tuple(m ^ b for m in arr.masks)
        self.rank_list = tuple(s.bit_count() for s in self.sep)
        size = len(self.sep)
        up = [0] * size
        down = [0] * size
        for i, si in enumerate(self.sep):
            for j, sj in enumerate(self.sep):
                if si & ~sj == 0:
                    up[i] |= 1 << j
                    down[j] |= 1 << i
        self.up = tuple(up)
        self.down = tuple(down)
        self._check()

    def _check(self) -> None:
        top = self.top
        everything = (1 << len(self.sep)) - 1
        if self.up[self.base.id] != everything or self.down[top.id] != everything:
            raise InconsistencyError("poset of regions is not bounded by the base and its opposite")
        if self.rank_list[top.id] != self.arr.n:
            raise InconsistencyError("top element does not have rank n")
        for i in range(len(self.sep)):
            for j in self.cover_ids(i):
                if self.rank_list[j] != self.rank_list[i] + 1:
                    raise InconsistencyError("a cover relation skips a rank")

    def __len__(self):
        return len(self.sep)

    @property
    def elements(self) -> tuple[Chamber, ...]:
        return self.arr.chambers

    @property
    def top(self) -> Chamber:
        return self.arr.chamber(negate(self.base.tope))

    def rank_of(self, c: Chamber) -> int:
        return self.rank_list[self.arr.chamber(c).id]

    def leq(self, a: Chamber, b: Chamber) -> bool:
        return bool(self.up[self.arr.chamber(a).id] >> self.arr.chamber(b).id & 1)

    def lt(self, a: Chamber, b: Chamber) -> bool:
        return a.id != b.id and self.leq(a, b)

    # id-level helpers; the rest of the package works on ids for speed
    def leq_id(self, i: int, j: int) -> bool:
        return bool(self.up[i] >> j & 1)

    def cover_ids(self, i: int) -> list[int]:
        # covers differ by exactly one hyperplane, so they are graph neighbors
        r = self.rank_list[i]
        return [j for j, _ in self.arr.neighbors[i] if self.rank_list[j] == r + 1]

    def lower_cover_ids(self, i: int) -> list[int]:
        r = self.rank_list[i]
        return [j for j, _ in self.arr.neighbors[i] if self.rank_list[j] == r - 1]

    def minimal_ids(self, mask: int) -> list[int]:
        return [i for i in _bits(mask) if self.down[i] & mask == 1 << i]

    def maximal_ids(self, mask: int) -> list[int]:
        return [i for i in _bits(mask) if self.up[i] & mask == 1 << i]

    @cached_property
    def cover_pairs(self) -> frozenset[frozenset[int]]:
        return frozenset(
            frozenset((i, j)) for i in range(len(self)) for j in self.cover_ids(i)
        )


def build_region_poset(arr: Arrangement, base: Chamber | str) -> RegionPoset:
    return RegionPoset(arr, base)


def covers(p: RegionPoset, c: Chamber) -> set[Chamber]:
    c = p.arr.chamber(c)
    return {p.arr.chambers[j] for j in p.cover_ids(c.id)}


@dataclass(frozen=True)
class Bound:
    """Result of a join or meet query.

    ``value`` is the unique extremal bound, or None when it does not exist;
    ``candidates`` always lists every minimal (resp. maximal) common bound.
    """

    value: Chamber | None
    candidates: tuple[Chamber, ...]

    @property
    def defined(self) -> bool:
        return self.value is not None


def _bound(p: RegionPoset, ids: list[int]) -> Bound:
    cs = tuple(p.arr.chambers[i] for i in sorted(ids))
    return Bound(cs[0] if len(cs) == 1 else None, cs)


def join(p: RegionPoset, a: Chamber, b: Chamber) -> Bound:
    """Least upper bound, in the usual order-theoretic sense."""
    a, b = p.arr.chamber(a), p.arr.chamber(b)
    return _bound(p, p.minimal_ids(p.up[a.id] & p.up[b.id]))


def meet(p: RegionPoset, a: Chamber, b: Chamber) -> Bound:
    a, b = p.arr.chamber(a), p.arr.chamber(b)
    return _bound(p, p.maximal_ids(p.down[a.id] & p.down[b.id]))


def _join_ids(p: RegionPoset, i: int, j: int) -> list[int]:
    return p.minimal_ids(p.up[i] & p.up[j])


def is_lattice_by_definition(p: RegionPoset) -> bool:
    size = len(p)
    for i in range(size):
        for j in range(i + 1, size):
            if len(_join_ids(p, i, j)) != 1:
                return False
            if len(p.maximal_ids(p.down[i] & p.down[j])) != 1:
                return False
    return True


def is_lattice_by_covers(p: RegionPoset) -> bool:
    """Local criterion: joins of pairs covering a common element exist."""
    return _first_failing_cover_pair(p) is None


def _first_failing_cover_pair(p: RegionPoset):
    for c in range(len(p)):
        ups = p.cover_ids(c)
        for x, a in enumerate(ups):
            for b in ups[x + 1:]:
                mubs = _join_ids(p, a, b)
                if len(mubs) != 1:
                    return c, a, b, mubs
    return None


def is_lattice(p: RegionPoset) -> bool:
    full = is_lattice_by_definition(p)
    local = is_lattice_by_covers(p)
    if full != local:
        raise InconsistencyError(
            f"lattice routes disagree at base {p.base}: definition={full}, covers={local}"
        )
    return full


@dataclass(frozen=True)
class LatticeProperties:
    strong: bool
    weak: bool
    lattice_bases: tuple[Chamber, ...]


def lattice_properties(arr: Arrangement) -> LatticeProperties:
    bases = tuple(c for c in arr.chambers if is_lattice(RegionPoset(arr, c)))
    return LatticeProperties(len(bases) == len(arr.chambers), bool(bases), bases)


@dataclass(frozen=True)
class NonLatticeWitness:
    """Chambers ``a`` and ``b`` cover ``c`` but have no join.

    ``minimal_upper_bounds`` holds every minimal common upper bound (at
    least two of them).
    """

    base: Chamber
    c: Chamber
    a: Chamber
    b: Chamber
    minimal_upper_bounds: tuple[Chamber, ...]

    def to_document(self) -> dict:
        return {
            "base": self.base.tope,
            "c": self.c.tope,
            "a": self.a.tope,
            "b": self.b.tope,
            "minimal_upper_bounds": [m.tope for m in self.minimal_upper_bounds],
        }


def find_non_lattice_witness(p: RegionPoset) -> NonLatticeWitness | None:
    """First failing ``(c, a, b)`` in canonical order, or None for a lattice."""
    hit = _first_failing_cover_pair(p)
    if hit is None:
        if not is_lattice_by_definition(p):
            raise InconsistencyError("non-lattice poset without a failing cover pair")
        return None
    ch = p.arr.chambers
    c, a, b, mubs = hit
    if len(mubs) < 2:
        raise InconsistencyError("bounded poset with no common upper bound")
    return NonLatticeWitness(p.base, ch[c], ch[a], ch[b], tuple(ch[m] for m in mubs))


# -- intervals -----------------------------------------------------------------

@dataclass(frozen=True)
class Interval:
    poset: RegionPoset
    lo: Chamber
    hi: Chamber
    members: tuple[Chamber, ...]

    def __len__(self):
        return len(self.members)

    def order_pairs(self) -> frozenset[tuple[str, str]]:
        """All ``(x, y)`` with ``x <= y`` inside the interval, as topes."""
        p = self.poset
        return frozenset(
            (x.tope, y.tope) for x in self.members for y in self.members if p.leq_id(x.id, y.id)
        )


def interval(p: RegionPoset, lo: Chamber, hi: Chamber) -> Interval:
    lo, hi = p.arr.chamber(lo), p.arr.chamber(hi)
    if not p.leq_id(lo.id, hi.id):
        raise ArrangementError(f"{lo} and {hi} do not bound an interval in the poset based at {p.base}")
    mask = p.up[lo.id] & p.down[hi.id]
    return Interval(p, lo, hi, tuple(p.arr.chambers[i] for i in _bits(mask)))


def interval_isomorphic_to_lower_set(arr: Arrangement, p: RegionPoset, lo: Chamber, hi: Chamber) -> bool:
    """Compare ``[lo, hi]`` in ``p`` with the lower set of ``hi`` in the poset based at ``lo``.

    Elements are matched by tope; the check is that both element sets and
    both order relations coincide.
    """
    iv = interval(p, lo, hi)
    q = RegionPoset(arr, iv.lo)
    lower = tuple(arr.chambers[i] for i in _bits(q.down[iv.hi.id]))
    if {c.tope for c in lower} != {c.tope for c in iv.members}:
        return False
    q_pairs = frozenset((x.tope, y.tope) for x in lower for y in lower if q.leq_id(x.id, y.id))
    return q_pairs == iv.order_pairs()


# -- export --------------------------------------------------------------------

def hasse_dot(p: RegionPoset) -> str:
    """Rank-layered DOT drawing of the Hasse diagram, nodes labeled by tope."""
    ch = p.arr.chambers
    lines = [f'digraph "regions_{p.base.tope}" {{', "  rankdir=BT;"]
    for r in range(p.arr.n + 1):
        layer = [c for c in ch if p.rank_list[c.id] == r]
        if layer:
            names = " ".join(f'"{c.tope}";' for c in layer)
            lines.append(f"  {{ rank=same; {names} }}")
    for c in ch:
        for j in p.cover_ids(c.id):
            lines.append(f'  "{c.tope}" -> "{ch[j].tope}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def poset_document(p: RegionPoset) -> dict:
    ch = p.arr.chambers
    return {
        "base": p.base.tope,
        "elements": [c.tope for c in ch],
        "rank": {c.tope: p.rank_list[c.id] for c in ch},
        "covers": [[c.tope, ch[j].tope] for c in ch for j in p.cover_ids(c.id)],
    }
