"""Structured documents for the CLI, including the cross-check report."""
from __future__ import annotations

from dataclasses import dataclass

from .arrangement import (
    GEOMETRIC,
    Arrangement,
    ArrangementError,
    Chamber,
    is_simplicial_arrangement,
    is_simplicial_chamber,
    walls,
)
from .complex import build_positive_complex, contractibility_report
from .paths import (
    VERIFIED,
    VIOLATED,
    build_counterexample_path,
    build_graph,
    verify_property_d_bounded,
)
from .poset import (
    InconsistencyError,
    RegionPoset,
    find_non_lattice_witness,
    is_lattice,
    lattice_properties,
    poset_document,
)

TOPE_MODE_NA = "n/a (tope mode)"
NON_ESSENTIAL_NA = "n/a (non-essential; use --essentialize)"


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: str = "-"
    base: str | None = None  # tope, "all", or None for the command default
    max_len: int | None = None
    depth: int | None = None
    format: str = "json"
    essentialize: bool = False

    def max_length(self, arr: Arrangement) -> int:
        k = 2 * arr.n if self.max_len is None else self.max_len
        if k < 1:
            raise ArrangementError("--max-len must be at least 1")
        return k

    def complex_depth(self, arr: Arrangement) -> int:
        m = arr.n + 1 if self.depth is None else self.depth
        if m < 0:
            raise ArrangementError("--depth must be non-negative")
        return m


def resolve_bases(arr: Arrangement, selector: str | None, default: str = "first") -> list[Chamber]:
    selector = selector or default
    if selector == "all":
        return list(arr.chambers)
    if selector == "first":
        return [arr.chambers[0]]
    return [arr.chamber(selector)]


def simplicial_field(arr: Arrangement):
    if arr.mode != GEOMETRIC:
        return TOPE_MODE_NA
    if not arr.is_essential:
        return NON_ESSENTIAL_NA
    return is_simplicial_arrangement(arr)


def chambers_document(arr: Arrangement) -> list[str]:
    return [c.tope for c in arr.chambers]


def graph_document(arr: Arrangement) -> dict:
    g = build_graph(arr)
    ch = arr.chambers
    return {
        "vertices": [c.tope for c in ch],
        "edges": [[ch[a].tope, ch[b].tope] for a, b in g.edges],
    }


def simplicial_document(arr: Arrangement) -> dict:
    doc = {"mode": arr.mode, "simplicial": simplicial_field(arr)}
    if arr.mode == GEOMETRIC:
        doc["dimension"] = arr.dimension
        doc["rank"] = arr.rank
        essential = arr.is_essential
        doc["chambers"] = [
            {
                "tope": c.tope,
                "walls": sorted(walls(arr, c)),
                "simplicial": is_simplicial_chamber(arr, c) if essential else None,
            }
            for c in arr.chambers
        ]
    return doc


def lattice_document(arr: Arrangement) -> dict:
    props = lattice_properties(arr)
    return {
        "strong": props.strong,
        "weak": props.weak,
        "lattice_bases": [c.tope for c in props.lattice_bases],
    }


def base_lattice_document(arr: Arrangement, base: Chamber) -> dict:
    p = RegionPoset(arr, base)
    w = find_non_lattice_witness(p)
    doc = {"base": base.tope, "is_lattice": w is None}
    if w is not None:
        doc["witness"] = w.to_document()
    return doc


def poset_report(arr: Arrangement, base: Chamber) -> dict:
    p = RegionPoset(arr, base)
    doc = poset_document(p)
    doc["is_lattice"] = is_lattice(p)
    return doc


def witness_document(arr: Arrangement, base: Chamber) -> dict:
    doc = base_lattice_document(arr, base)
    if not doc["is_lattice"]:
        w = find_non_lattice_witness(RegionPoset(arr, base))
        doc["counterexample"] = build_counterexample_path(arr, w).to_document(arr)
    return doc


def complex_document(arr: Arrangement, base: Chamber, depth: int) -> dict:
    return build_positive_complex(arr, base, depth).to_document()


def consistency_report(arr: Arrangement, cfg: RunConfig) -> dict:
    """Cross-check simpliciality, the lattice properties and bounded property D.

    Raises InconsistencyError (after filling ``report``) when the verdicts
    contradict each other; the partial report rides along on the exception.
    """
    max_len = cfg.max_length(arr)
    bases = resolve_bases(arr, cfg.base, default="all")
    props = lattice_properties(arr)
    simplicial = simplicial_field(arr)
    reference = simplicial if isinstance(simplicial, bool) else props.strong
    problems = []
    if isinstance(simplicial, bool) and simplicial != props.strong:
        problems.append(f"simplicial={simplicial} but strong_lattice={props.strong}")

    per_base = {}
    for b in bases:
        per_base[b.tope] = verify_property_d_bounded(arr, b, max_len).to_document(arr)

    doc = {
        "mode": arr.mode,
        "elements": arr.n,
        "chambers": len(arr.chambers),
        "simplicial": simplicial,
        "strong_lattice": props.strong,
        "weak_lattice": props.weak,
        "lattice_bases": [c.tope for c in props.lattice_bases],
        "max_length": max_len,
        "property_d": per_base,
    }
    verdicts = {d["verdict"] for d in per_base.values()}
    doc["property_d_verdict"] = VIOLATED if VIOLATED in verdicts else VERIFIED

    if reference:
        if VIOLATED in verdicts:
            problems.append("property D violated on an arrangement with the strong lattice property")
    elif not props.strong:
        base = next(c for c in arr.chambers if c not in props.lattice_bases)
        w = find_non_lattice_witness(RegionPoset(arr, base))
        ce = build_counterexample_path(arr, w)
        doc["witness"] = ce.to_document(arr)
        start = ce.top.tope
        if ce.path_class.length <= max_len and start in per_base:
            if per_base[start]["verdict"] != VIOLATED:
                problems.append(f"bounded search from {start} missed the constructed violation")

    depth = cfg.complex_depth(arr)
    if depth >= 1:
        cbase = ce.top if "witness" in doc else bases[0]
        cr = contractibility_report(arr, cbase, depth)
        summary = {
            "base": cbase.tope,
            "depth": depth,
            "verdict": "all pass" if cr.collapses else "blocked",
            "euler": [d.euler for d in cr.depths],
            "reduced_betti_mod2": [list(d.reduced_betti) for d in cr.depths],
        }
        if not cr.collapses:
            summary["first_blocked_depth"] = cr.first_blocked_depth
            summary["blocked_vertex"] = cr.first_blocked.to_document()
        doc["retraction"] = summary
        if reference and not cr.collapses:
            problems.append("retraction blocked although property D should hold")
    doc["consistent"] = not problems
    if problems:
        doc["problems"] = problems
        raise ReportInconsistency(doc)
    return doc


class ReportInconsistency(InconsistencyError):
    def __init__(self, report: dict):
        self.report = report
        super().__init__("; ".join(report.get("problems", [])))
