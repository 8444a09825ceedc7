"""Exact linear algebra over the rationals.

Everything here works on ``fractions.Fraction`` or plain ``int`` entries;
there is no floating point on any decision path.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

Vector = tuple[Fraction, ...]


def to_fraction(value) -> Fraction:
    """Parse an int or a ``"p/q"`` string into a Fraction.

    Floats are refused: they would smuggle rounding into exact geometry.
    """
    if isinstance(value, bool):
        raise ValueError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        text = value.strip()
        num, sep, den = text.partition("/")
        try:
            n = int(num)
            d = int(den) if sep else 1
        except ValueError:
            raise ValueError(f"malformed rational {value!r}") from None
        if d == 0:
            raise ValueError(f"zero denominator in {value!r}")
        return Fraction(n, d)
    raise ValueError(f"not a rational: {value!r}")


def primitive(row: Sequence[Fraction | int]) -> tuple[int, ...]:
    """Scale ``row`` by a positive factor to a primitive integer vector."""
    fracs = [Fraction(x) for x in row]
    den = lcm(*(f.denominator for f in fracs)) if fracs else 1
    ints = [int(f * den) for f in fracs]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g > 1:
        ints = [x // g for x in ints]
    return tuple(ints)


def row_echelon(rows: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    """Reduced row echelon form of ``rows`` (nonzero rows only)."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return []
    ncols = len(m[0])
    pivot_row = 0
    for col in range(ncols):
        pr = next((i for i in range(pivot_row, len(m)) if m[i][col] != 0), None)
        if pr is None:
            continue
        m[pivot_row], m[pr] = m[pr], m[pivot_row]
        piv = m[pivot_row][col]
        m[pivot_row] = [x / piv for x in m[pivot_row]]
        for i in range(len(m)):
            if i != pivot_row and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[pivot_row])]
        pivot_row += 1
        if pivot_row == len(m):
            break
    return [r for r in m[:pivot_row]]


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    return len(row_echelon(rows))


def coordinates_in_row_space(rows: Sequence[Sequence[Fraction]]) -> list[Vector]:
    """Express each row in a basis of the row space of ``rows``.

    The basis is the reduced echelon basis; since each basis vector has a
    pivot 1 with zeros in the other pivot columns, the coordinates of a row
    are simply its entries in the pivot columns.
    """
    basis = row_echelon(rows)
    pivots = [next(j for j, x in enumerate(b) if x != 0) for b in basis]
    return [tuple(Fraction(r[j]) for j in pivots) for r in rows]


def proportional(u: Sequence[Fraction], v: Sequence[Fraction]) -> bool:
    """True when ``u`` and ``v`` span the same line (either orientation)."""
    return rank([u, v]) < 2


# -- strict homogeneous feasibility --------------------------------------------

def _eliminate(system: set[tuple[int, ...]], k: int) -> set[tuple[int, ...]] | None:
    """One Fourier-Motzkin step on strict inequalities ``a.x > 0``.

    Returns None as soon as an inequality ``0 > 0`` is derived.
    """
    pos, neg, out = [], [], set()
    for a in system:
        if a[k] > 0:
            pos.append(a)
        elif a[k] < 0:
            neg.append(a)
        else:
            out.add(a)
    for p in pos:
        for q in neg:
            cp, cq = -q[k], p[k]
            combo = primitive([cp * x + cq * y for x, y in zip(p, q)])
            if not any(combo):
                return None
            out.add(combo)
    return out


def _fm_stages(rows: Sequence[Sequence[int | Fraction]]) -> list[set[tuple[int, ...]]] | None:
    system = set()
    for r in rows:
        a = primitive(r)
        if not any(a):
            return None
        system.add(a)
    if not system:
        return [system]
    d = len(next(iter(system)))
    stages = [system]
    for k in range(d):
        system = _eliminate(system, k)
        if system is None:
            return None
        stages.append(system)
    return stages


def strictly_feasible(rows: Sequence[Sequence[int | Fraction]]) -> bool:
    """Decide whether ``{x : a.x > 0 for every row a}`` is nonempty."""
    stages = _fm_stages(rows)
    return stages is not None and not stages[-1]


def interior_point(rows: Sequence[Sequence[int | Fraction]]) -> Vector | None:
    """A rational point strictly satisfying every ``a.x > 0``, or None.

    Back-substitutes through the elimination stages, picking each
    coordinate strictly inside its open interval of admissible values.
    """
    stages = _fm_stages(rows)
    if stages is None or stages[-1]:
        return None
    if not rows:
        return ()
    d = len(rows[0])
    x = [Fraction(0)] * d
    for k in range(d - 1, -1, -1):
        lo = hi = None
        for a in stages[k]:
            if a[k] == 0:
                continue
            rest = sum(a[j] * x[j] for j in range(k + 1, d))
            bound = Fraction(-rest, a[k])
            if a[k] > 0:
                lo = bound if lo is None else max(lo, bound)
            else:
                hi = bound if hi is None else min(hi, bound)
        if lo is not None and hi is not None:
            x[k] = (lo + hi) / 2
        elif lo is not None:
            x[k] = lo + 1
        elif hi is not None:
            x[k] = hi - 1
    return tuple(x)
