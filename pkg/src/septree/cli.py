"""Command-line front end.

    septree <command> [--k N] [--strategy STR] [--profiles all|blocks|tangles]
                      [--format json|dot] [--max-vertices N] GRAPH_FILE

Exit codes: 0 ok, 1 usage, 2 parse, 3 resource guard, 4 verification
failure, 5 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Sequence

from .errors import (
    GraphParseError,
    InvariantViolation,
    PreconditionError,
    ResourceLimitError,
    SeptreeError,
)
from .graph import Graph, automorphisms, parse_graph
from .profiles import BLOCK, DEFAULT_MAX_PAIRS, Profile, enumerate_k_profiles, k_blocks
from .strategy import KStrategy, run_k_strategy
from .treedec import TreeDecomposition, adhesion, build_from_nested, node_map, to_dot, verify

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_RESOURCE = 3
EXIT_VERIFY = 4
EXIT_INTERNAL = 5

DEFAULT_MAX_VERTICES = 32
PROFILE_CHOICES = ("all", "blocks", "tangles")


class UsageError(SeptreeError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="septree", description="Blocks, profiles and canonical tree-decompositions of small graphs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, k=True):
        p.add_argument("graph", metavar="GRAPH_FILE")
        p.add_argument("--input-format", choices=("auto", "edge-list", "adjacency-json"), default="auto",
                       help="auto picks adjacency-json for *.json files")
        p.add_argument("--max-vertices", type=int, default=DEFAULT_MAX_VERTICES)
        p.add_argument("--max-pairs", type=int, default=DEFAULT_MAX_PAIRS,
                       help="guard on the number of proper separation pairs searched")
        p.add_argument("--time-budget", type=float, default=None, metavar="SECONDS",
                       help="wall-clock budget for profile enumeration")
        p.add_argument("--format", choices=("json", "dot"), default="json")
        if k:
            p.add_argument("--k", type=int, required=True)

    p = sub.add_parser("blocks", help="list the k-blocks")
    common(p)
    p = sub.add_parser("profiles", help="list the classified k-profiles")
    common(p)
    p.add_argument("--profiles", choices=PROFILE_CHOICES, default="all")
    p = sub.add_parser("decompose", help="canonical tree-decomposition distinguishing the chosen k-profiles")
    common(p)
    p.add_argument("--strategy", default="|ext_r", help="k-strategy, e.g. '|ext_r' or '|ext_r;|loc_r'")
    p.add_argument("--profiles", choices=PROFILE_CHOICES, default="all")
    p = sub.add_parser("verify", help="check a decomposition document against the graph")
    common(p, k=False)
    p.add_argument("--decomposition", required=True, metavar="FILE")
    p = sub.add_parser("canon-check", help="check that every automorphism fixes the computed system")
    common(p)
    p.add_argument("--strategy", default="|ext_r")
    p.add_argument("--profiles", choices=PROFILE_CHOICES, default="all")
    return parser


def read_graph(path: str, fmt: str = "auto") -> Graph:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise GraphParseError(f"cannot read {path}: {exc.strerror}") from None
    if fmt == "auto":
        fmt = "adjacency-json" if path.endswith(".json") else "edge-list"
    return parse_graph(text, fmt)


def select_profiles(profiles: list[Profile], which: str) -> list[Profile]:
    if which == "blocks":
        return [p for p in profiles if p.kind == BLOCK]
    if which == "tangles":
        return [p for p in profiles if p.tangle]
    return profiles


def emit(doc, fmt: str = "json", g: Graph | None = None) -> str:
    """Render a result; DOT is only defined for decompositions."""
    if fmt == "dot":
        if not isinstance(doc, TreeDecomposition) or g is None:
            raise UsageError("--format dot is only available for decompose")
        return to_dot(doc, g)
    if fmt != "json":
        raise UsageError(f"unknown output format {fmt!r}")
    if isinstance(doc, TreeDecomposition):
        doc = doc.to_json(g)
    return json.dumps(doc, indent=2) + "\n"


def _profiles(args, g: Graph) -> list[Profile]:
    found = enumerate_k_profiles(g, args.k, max_pairs=args.max_pairs, time_budget=args.time_budget)
    return select_profiles(found, args.profiles)


def _decompose(args, g: Graph):
    sigma = KStrategy.parse(args.strategy, args.k)
    profiles = _profiles(args, g)
    nested = run_k_strategy(sigma, g, profiles)
    return build_from_nested(nested, g), nested, profiles


def run(argv: Sequence[str], out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    if args.format == "dot" and args.command != "decompose":
        raise UsageError("--format dot is only available for decompose")
    if getattr(args, "k", 1) < 1:
        raise UsageError("--k must be at least 1")
    g = read_graph(args.graph, args.input_format)
    if g.n > args.max_vertices:
        raise ResourceLimitError(f"graph has {g.n} vertices, above --max-vertices {args.max_vertices}")

    if args.command == "blocks":
        out.write(emit([g.label(b) for b in k_blocks(g, args.k)]))
        return EXIT_OK

    if args.command == "profiles":
        out.write(emit([p.to_json(g) for p in _profiles(args, g)]))
        return EXIT_OK

    if args.command == "decompose":
        td, _, _ = _decompose(args, g)
        out.write(emit(td, args.format, g))
        return EXIT_OK

    if args.command == "verify":
        try:
            doc = json.loads(Path(args.decomposition).read_text())
        except OSError as exc:
            raise GraphParseError(f"cannot read {args.decomposition}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise GraphParseError(f"decomposition is not JSON: {exc.msg}", exc.lineno) from None
        try:
            td = TreeDecomposition.from_json(doc, g)
        except PreconditionError as exc:
            raise GraphParseError(str(exc)) from None
        report = verify(td, g)
        ok = all(report.values())
        report["adhesion"] = adhesion(td) if report["tree"] else None
        report["ok"] = ok
        out.write(emit(report))
        return EXIT_OK if ok else EXIT_VERIFY

    # canon-check
    td, nested, _ = _decompose(args, g)
    group = automorphisms(g, max_vertices=args.max_vertices)
    failures = 0
    for perm in group:
        moved = frozenset(s.permuted(perm) for s in nested)
        if moved != nested:
            failures += 1
            continue
        try:
            node_map(td, perm)
        except InvariantViolation:
            failures += 1
    ok = failures == 0
    out.write(emit({"automorphisms": len(group), "separations": len(nested),
                    "nodes": len(td), "failures": failures, "invariant": ok}))
    return EXIT_OK if ok else EXIT_VERIFY


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        return run(argv)
    except UsageError as exc:
        print(f"septree: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GraphParseError as exc:
        print(f"septree: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ResourceLimitError as exc:
        print(f"septree: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except InvariantViolation as exc:
        print(f"septree: internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except PreconditionError as exc:
        print(f"septree: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the flush at exit
        sys.stdout = open(os.devnull, "w")
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
