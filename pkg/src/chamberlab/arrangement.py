"""Central hyperplane arrangements, their chambers and walls.

Chambers are identified by topes: strings over ``+``/``-`` with one
character per hyperplane. Canonical order is plain string order, which puts
``+`` before ``-``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Iterable, Sequence

from . import exact

GEOMETRIC = "geometric"
TOPE_ONLY = "tope-only"


class ArrangementError(ValueError):
    """Malformed input or violated precondition."""


class InputError(ArrangementError):
    """Input document could not be parsed; ``where`` locates the problem."""

    def __init__(self, message: str, where: str = ""):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)


def negate(tope: str) -> str:
    return tope.translate(str.maketrans("+-", "-+"))


def tope_mask(tope: str) -> int:
    """Bit i set iff hyperplane i carries a minus sign."""
    return sum(1 << i for i, s in enumerate(tope) if s == "-")


@dataclass(frozen=True)
class Hyperplane:
    index: int
    normal: tuple[Fraction, ...]


@dataclass(frozen=True, order=True)
class Chamber:
    tope: str
    id: int = field(compare=False)

    def __str__(self):
        return self.tope


@dataclass(frozen=True, eq=False)
class Arrangement:
    """A central arrangement, either given by normals or by its topes.

    In tope-only mode ``hyperplanes`` is empty and ``topes`` holds the
    validated tope set; ``dimension`` and ``rank`` are then None.
    """

    hyperplanes: tuple[Hyperplane, ...]
    dimension: int | None
    mode: str = GEOMETRIC
    topes: tuple[str, ...] | None = None
    n_elements: int | None = None

    @property
    def n(self) -> int:
        return len(self.hyperplanes) if self.mode == GEOMETRIC else self.n_elements

    @cached_property
    def rank(self) -> int | None:
        if self.mode != GEOMETRIC:
            return None
        return exact.rank([h.normal for h in self.hyperplanes])

    @property
    def is_essential(self) -> bool:
        return self.mode == GEOMETRIC and self.rank == self.dimension

    @property
    def normals(self) -> list[tuple[Fraction, ...]]:
        return [h.normal for h in self.hyperplanes]

    @cached_property
    def chambers(self) -> tuple[Chamber, ...]:
        return tuple(enumerate_chambers(self))

    @cached_property
    def _by_tope(self) -> dict[str, Chamber]:
        return {c.tope: c for c in self.chambers}

    @cached_property
    def masks(self) -> tuple[int, ...]:
        return tuple(tope_mask(c.tope) for c in self.chambers)

    @cached_property
    def neighbors(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per chamber id: ``(neighbor id, wall index)`` pairs, by neighbor id."""
        index = {m: i for i, m in enumerate(self.masks)}
        out = []
        for m in self.masks:
            nb = []
            for h in range(self.n):
                j = index.get(m ^ (1 << h))
                if j is not None:
                    nb.append((j, h))
            out.append(tuple(sorted(nb)))
        return tuple(out)

    def chamber(self, tope: str | Chamber | int) -> Chamber:
        """Look up a chamber by tope string, id, or Chamber."""
        if isinstance(tope, Chamber):
            tope = tope.tope
        if isinstance(tope, int):
            return self.chambers[tope]
        c = self._by_tope.get(tope)
        if c is None:
            raise ArrangementError(f"{tope!r} is not a chamber of this arrangement")
        return c

    def __contains__(self, c) -> bool:
        if isinstance(c, Chamber):
            own = self._by_tope.get(c.tope)
            return own is not None and own.id == c.id
        return c in self._by_tope

    def sign_of(self, point: Sequence[Fraction]) -> str:
        """Sign vector of a point (``0`` where it lies on a hyperplane)."""
        out = []
        for h in self.hyperplanes:
            v = sum(a * x for a, x in zip(h.normal, point))
            out.append("+" if v > 0 else "-" if v < 0 else "0")
        return "".join(out)

    def to_document(self) -> dict:
        if self.mode == GEOMETRIC:
            return {
                "dimension": self.dimension,
                "normals": [[_fraction_text(x) for x in h.normal] for h in self.hyperplanes],
            }
        return {"elements": self.n, "topes": list(self.topes)}


def _fraction_text(x: Fraction):
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# -- construction --------------------------------------------------------------

def from_normals(normals: Iterable[Sequence], dimension: int | None = None) -> Arrangement:
    rows = []
    for i, row in enumerate(normals):
        try:
            rows.append(tuple(exact.to_fraction(x) for x in row))
        except ValueError as exc:
            raise InputError(str(exc), f"normals[{i}]") from None
    if dimension is None:
        if not rows:
            raise InputError("cannot infer dimension of an empty arrangement")
        dimension = len(rows[0])
    hyperplanes = []
    for i, r in enumerate(rows):
        if len(r) != dimension:
            raise InputError(f"expected {dimension} coordinates, got {len(r)}", f"normals[{i}]")
        if not any(r):
            raise InputError("zero normal vector", f"normals[{i}]")
        for h in hyperplanes:
            if exact.proportional(h.normal, r):
                raise InputError(f"duplicate hyperplane (proportional to normals[{h.index}])", f"normals[{i}]")
        hyperplanes.append(Hyperplane(i, r))
    return Arrangement(tuple(hyperplanes), dimension)


def from_topes(n: int, topes: Iterable[str]) -> Arrangement:
    """Build a tope-only arrangement (oriented-matroid input)."""
    topes = list(topes)
    for i, t in enumerate(topes):
        if not isinstance(t, str) or len(t) != n:
            raise InputError(f"tope {t!r} does not have length {n}", f"topes[{i}]")
        if set(t) - {"+", "-"}:
            raise InputError(f"tope {t!r} has characters other than '+' and '-'", f"topes[{i}]")
    if len(set(topes)) != len(topes):
        raise ArrangementError("duplicate topes")
    if not topes:
        raise ArrangementError("empty tope set")
    ts = set(topes)
    for t in topes:
        if negate(t) not in ts:
            raise ArrangementError(f"tope set not centrally symmetric: {negate(t)!r} missing")
    for e in range(n):
        if len({t[e] for t in topes}) < 2:
            raise ArrangementError(f"element {e} has the same sign in every tope")
    masks = {tope_mask(t) for t in ts}
    walls = set()
    for m in masks:
        walls.update(e for e in range(n) if m ^ (1 << e) in masks)
    if walls != set(range(n)):
        missing = sorted(set(range(n)) - walls)
        raise ArrangementError(f"degenerate tope set: elements {missing} separate no adjacent pair")
    _check_connected(masks, n)
    return Arrangement((), None, TOPE_ONLY, tuple(sorted(ts)), n)


def _check_connected(masks: set[int], n: int) -> None:
    start = next(iter(masks))
    seen, todo = {start}, [start]
    while todo:
        m = todo.pop()
        for e in range(n):
            o = m ^ (1 << e)
            if o in masks and o not in seen:
                seen.add(o)
                todo.append(o)
    if len(seen) != len(masks):
        raise ArrangementError("degenerate tope set: tope graph is disconnected")


def parse_arrangement(doc: dict | str) -> Arrangement:
    """Validate an input document (a mapping, or JSON text)."""
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise InputError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    if not isinstance(doc, dict):
        raise InputError("top level must be an object")
    if "topes" in doc:
        n = doc.get("elements")
        topes = doc["topes"]
        if not isinstance(topes, list):
            raise InputError("must be a list of strings", "topes")
        if n is None:
            if not topes:
                raise InputError("cannot infer element count", "elements")
            n = len(topes[0])
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise InputError("must be a positive integer", "elements")
        return from_topes(n, topes)
    if "normals" not in doc:
        raise InputError("document needs either 'normals' or 'topes'")
    d = doc.get("dimension")
    if d is not None and (not isinstance(d, int) or isinstance(d, bool) or d < 1):
        raise InputError("must be a positive integer", "dimension")
    normals = doc["normals"]
    if not isinstance(normals, list) or not all(isinstance(r, list) for r in normals):
        raise InputError("must be a list of coordinate lists", "normals")
    return from_normals(normals, d)


def essentialize(arr: Arrangement) -> Arrangement:
    """Project onto the quotient by the common intersection of all hyperplanes.

    Chambers correspond one to one and keep their topes.
    """
    if arr.mode != GEOMETRIC:
        raise ArrangementError("essentialization needs a geometric arrangement")
    if arr.is_essential:
        return arr
    coords = exact.coordinates_in_row_space(arr.normals)
    return from_normals(coords, arr.rank)


# -- chambers ------------------------------------------------------------------

def _oriented(normals, pattern: str):
    return [a if s == "+" else tuple(-x for x in a) for a, s in zip(normals, pattern)]


def strict_feasible(arr: Arrangement, pattern: str) -> bool:
    """Whether the open cone with sign ``pattern`` is nonempty."""
    if arr.mode != GEOMETRIC:
        raise ArrangementError("strict_feasible needs a geometric arrangement")
    if len(pattern) != arr.n or set(pattern) - {"+", "-"}:
        raise ArrangementError(f"pattern {pattern!r} must have length {arr.n} over '+-'")
    return exact.strictly_feasible(_oriented(arr.normals, pattern))


def interior_point(arr: Arrangement, chamber: str | Chamber):
    tope = chamber.tope if isinstance(chamber, Chamber) else chamber
    return exact.interior_point(_oriented(arr.normals, tope))


def enumerate_chambers(arr: Arrangement) -> list[Chamber]:
    """All chambers in canonical order.

    Geometric mode inserts hyperplanes one at a time and keeps a sign
    extension only when the refined cone is still nonempty.
    """
    if arr.mode == TOPE_ONLY:
        topes = sorted(arr.topes)
    else:
        normals = arr.normals
        topes = [""]
        for k in range(arr.n):
            grown = []
            for t in topes:
                for s in "+-":
                    if exact.strictly_feasible(_oriented(normals[: k + 1], t + s)):
                        grown.append(t + s)
            topes = grown
        topes.sort()
    ts = set(topes)
    if any(negate(t) not in ts for t in topes):
        raise ArrangementError("chamber set is not centrally symmetric")
    return [Chamber(t, i) for i, t in enumerate(topes)]


def brute_force_chambers(arr: Arrangement) -> list[str]:
    """Exhaustive scan of all 2^n sign patterns; the test oracle for enumeration."""
    return sorted(
        p for p in ("".join(s) for s in product("+-", repeat=arr.n)) if strict_feasible(arr, p)
    )


def _check_member(arr: Arrangement, *cs: Chamber) -> None:
    for c in cs:
        if c not in arr:
            raise ArrangementError(f"{c} is not a chamber of this arrangement")


def separation_set(arr: Arrangement, c1: Chamber, c2: Chamber) -> frozenset[int]:
    _check_member(arr, c1, c2)
    return frozenset(i for i, (a, b) in enumerate(zip(c1.tope, c2.tope)) if a != b)


def adjacency_and_walls(arr: Arrangement, c: Chamber) -> tuple[set[Chamber], set[int]]:
    _check_member(arr, c)
    nb = arr.neighbors[c.id]
    return {arr.chambers[j] for j, _ in nb}, {h for _, h in nb}


def walls(arr: Arrangement, c: Chamber) -> set[int]:
    return adjacency_and_walls(arr, c)[1]


def _require_simpliciality_test(arr: Arrangement) -> None:
    if arr.mode != GEOMETRIC:
        raise ArrangementError("simpliciality is a geometric test; unavailable in tope mode")
    if not arr.is_essential:
        raise ArrangementError(
            f"arrangement has rank {arr.rank} < dimension {arr.dimension}; essentialize first"
        )


def is_simplicial_chamber(arr: Arrangement, c: Chamber) -> bool:
    _require_simpliciality_test(arr)
    return len(walls(arr, c)) == arr.rank


def is_simplicial_arrangement(arr: Arrangement) -> bool:
    _require_simpliciality_test(arr)
    return all(len(nb) == arr.rank for nb in arr.neighbors)


def chamber_topes(arr: Arrangement) -> list[str]:
    return [c.tope for c in arr.chambers]
