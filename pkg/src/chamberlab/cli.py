"""Command line front end.

Exit codes: 0 success, 2 unreadable or malformed input, 3 violated
precondition, 4 internal inconsistency.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import report as rp
from .arrangement import ArrangementError, InputError, essentialize, parse_arrangement
from .complex import contractibility_report
from .paths import build_graph, verify_property_d_bounded
from .poset import InconsistencyError, RegionPoset, hasse_dot

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_INCONSISTENT = 4

COMMANDS = (
    "chambers", "graph", "poset", "lattice", "simplicial",
    "property-d", "witness", "complex", "report", "export",
)
EXPORT_KINDS = ("chambers", "graph", "poset", "complex")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", "-i", default="-", help="arrangement JSON file ('-' for stdin)")
    common.add_argument("--base", help="base chamber tope, 'all', or 'first' (canonical first chamber)")
    common.add_argument("--max-len", type=int, help="property-D path length bound (default 2n)")
    common.add_argument("--depth", type=int, help="cover complex depth (default n+1)")
    common.add_argument("--format", choices=("json", "dot", "text"), default="json")
    common.add_argument("--essentialize", action="store_true",
                        help="project away the common intersection of all hyperplanes first")
    parser = argparse.ArgumentParser(prog="chamberlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "export":
            sp.add_argument("kind", choices=EXPORT_KINDS)
    return parser


def load(cfg: rp.RunConfig):
    if cfg.input == "-":
        text, source = sys.stdin.read(), "<stdin>"
    else:
        try:
            text, source = Path(cfg.input).read_text(encoding="utf-8"), cfg.input
        except OSError as exc:
            raise InputError(exc.strerror or str(exc), cfg.input) from None
    try:
        arr = parse_arrangement(text)
    except InputError as exc:
        raise InputError(str(exc), source) from None
    return essentialize(arr) if cfg.essentialize else arr


def _per_base(arr, cfg, fn):
    bases = rp.resolve_bases(arr, cfg.base)
    docs = [fn(arr, b) for b in bases]
    return docs if cfg.base == "all" else docs[0]


def _dot_only(kind: str):
    raise ArrangementError(f"no DOT rendering for {kind}; use --format json or text")


def run(cfg: rp.RunConfig):
    """Execute one command; returns a JSON-able document or a DOT string."""
    arr = load(cfg)
    cmd = cfg.command
    dot = cfg.format == "dot"
    if cmd == "chambers":
        if dot:
            _dot_only(cmd)
        return rp.chambers_document(arr)
    if cmd == "graph":
        return build_graph(arr).dot() if dot else rp.graph_document(arr)
    if cmd == "poset":
        if dot:
            return "".join(hasse_dot(RegionPoset(arr, b)) for b in rp.resolve_bases(arr, cfg.base))
        return _per_base(arr, cfg, rp.poset_report)
    if dot:
        _dot_only(cmd)
    if cmd == "lattice":
        doc = rp.lattice_document(arr)
        doc["bases"] = [rp.base_lattice_document(arr, b) for b in rp.resolve_bases(arr, cfg.base or "all")]
        return doc
    if cmd == "simplicial":
        return rp.simplicial_document(arr)
    if cmd == "property-d":
        k = cfg.max_length(arr)
        return _per_base(arr, cfg, lambda a, b: verify_property_d_bounded(a, b, k).to_document(a))
    if cmd == "witness":
        return _per_base(arr, cfg, rp.witness_document)
    if cmd == "complex":
        m = max(cfg.complex_depth(arr), 1)
        return _per_base(arr, cfg, lambda a, b: contractibility_report(a, b, m).to_document())
    if cmd == "report":
        return rp.consistency_report(arr, cfg)
    raise ArrangementError(f"unknown command {cmd!r}")


def run_export(cfg: rp.RunConfig, kind: str):
    arr = load(cfg)
    if kind == "chambers":
        return rp.chambers_document(arr)
    if kind == "graph":
        return build_graph(arr).dot() if cfg.format == "dot" else rp.graph_document(arr)
    if kind == "poset":
        if cfg.format == "dot":
            return "".join(hasse_dot(RegionPoset(arr, b)) for b in rp.resolve_bases(arr, cfg.base))
        return _per_base(arr, cfg, rp.poset_report)
    if kind == "complex":
        return _per_base(arr, cfg, lambda a, b: rp.complex_document(a, b, cfg.complex_depth(a)))
    raise ArrangementError(f"unknown export kind {kind!r}")


def render(result, fmt: str) -> str:
    if isinstance(result, str):
        return result
    if fmt == "text":
        return "\n".join(_text_lines(result)) + "\n"
    return json.dumps(result, indent=2) + "\n"


def _text_lines(obj, indent: str = "") -> list[str]:
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{indent}{k}:")
                lines.extend(_text_lines(v, indent + "  "))
            else:
                lines.append(f"{indent}{k}: {_scalar(v)}")
        return lines
    if isinstance(obj, list):
        if _flat(obj):
            return [indent + _scalar(obj)]
        lines = []
        for item in obj:
            sub = _text_lines(item, indent + "  ")
            lines.append(indent + "- " + sub[0].strip())
            lines.extend(sub[1:])
        return lines
    return [indent + _scalar(obj)]


def _flat(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _scalar(v) -> str:
    if isinstance(v, list):
        return " ".join(str(x) for x in v)
    if isinstance(v, bool):
        return "yes" if v else "no"
    return "-" if v is None else str(v)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = rp.RunConfig(
        command=args.command,
        input=args.input,
        base=args.base,
        max_len=args.max_len,
        depth=args.depth,
        format=args.format,
        essentialize=args.essentialize,
    )
    try:
        if cfg.command == "export":
            result = run_export(cfg, args.kind)
        else:
            result = run(cfg)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except rp.ReportInconsistency as exc:
        sys.stdout.write(render(exc.report, cfg.format))
        print(f"INTERNAL INCONSISTENCY: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except InconsistencyError as exc:
        print(f"INTERNAL INCONSISTENCY: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except ArrangementError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    sys.stdout.write(render(result, cfg.format))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
