"""Command-line interface: ``drgcodes <command> ...`` (also ``python3 -m drgcodes``)."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from . import catalog, codes, geometry, report
from .decide import decide, default_budget
from .drg import IntersectionArray, MalformedArrayError, charpoly_eval, verify_intersection_array
from .graph import Graph, GraphError, from_json, from_text, to_json, to_text

EXIT_OK, EXIT_MISMATCH, EXIT_BUDGET, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def load_graph(spec: str) -> tuple[Graph, str]:
    """A catalog name, or a path to a graph in text (``n m`` + edges) or JSON form."""
    path = Path(spec)
    if path.is_file():
        text = path.read_text()
        g = from_json(text) if text.lstrip().startswith("{") else from_text(text)
        return g, path.name
    try:
        return catalog.build(spec), catalog.resolve(spec)
    except catalog.CatalogError as exc:
        raise UsageError(str(exc)) from None


def load_code(spec: str) -> list[int]:
    path = Path(spec)
    text = path.read_text() if path.is_file() else spec
    try:
        return [int(x) for x in text.replace("\n", ",").split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"cannot parse code {spec!r}: expected comma-separated vertex indices") from None


def _emit(text: str, output: str | None):
    if output:
        Path(output).write_text(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


# ------------------------------------------------------------ commands

def cmd_report(args) -> int:
    if args.table is not None:
        entries = catalog.rows(table=args.table)
    elif args.valency is not None:
        entries = catalog.rows(args.valency)
    else:
        entries = catalog.all_rows()
    rows = report.build_report(entries, budget=args.budget, full=args.full)
    _emit(report.FORMATS[args.format](rows), args.output)
    exhausted = [r.entry.name for r in rows if r.computed.budget_exhausted]
    bad = [r.entry.name for r in rows if not r.match and not r.computed.budget_exhausted]
    if bad:
        print("mismatched rows: " + ", ".join(bad), file=sys.stderr)
    if exhausted:
        print("budget exhausted: " + ", ".join(exhausted), file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_MISMATCH if bad else EXIT_OK


def cmd_search(args) -> int:
    g, name = load_graph(args.graph)
    budget = args.budget or default_budget()
    entry = None
    try:
        entry = catalog.entry(args.graph)
    except catalog.CatalogError:
        pass
    if entry is not None and entry.desk_infeasible and args.full:
        state = None
        if args.checkpoint and Path(args.checkpoint).is_file():
            state = json.loads(Path(args.checkpoint).read_text())
        res = codes.ghx33_nonexistence_search(g, budget, state, args.checkpoint)
        out = res.to_dict() | {"name": name}
        _emit(json.dumps(out, indent=2), None)
        return EXIT_BUDGET if res.status == "unknown" else EXIT_OK
    if entry is not None:
        v = decide(entry, g, budget=budget, method=args.method, canonical=args.canonical, full=args.full)
    else:
        array = verify_intersection_array(g)
        if array is not None:
            v = decide(array, g, budget=budget, method=args.method, canonical=args.canonical, name=name)
        else:
            if g.valency is None:
                raise UsageError(f"{name} is not regular")
            res = (codes.search_via_distance3_clique(g, budget) if args.method == "clique"
                   else codes.search_perfect_1(g, "canonical" if args.canonical else "existence", budget))
            out = res.to_dict() | {"name": name}
            _emit(json.dumps(out, indent=2), None)
            if res.witness and args.output:
                _emit(",".join(map(str, res.witness)), args.output)
            return EXIT_BUDGET if res.status == "unknown" else EXIT_OK
    _emit(json.dumps(v.to_dict(), indent=2), None)
    if v.witness is not None and args.output:
        _emit(",".join(map(str, v.witness)), args.output)
    return EXIT_BUDGET if v.budget_exhausted else EXIT_OK


def cmd_verify(args) -> int:
    g, _ = load_graph(args.graph)
    code = load_code(args.code)
    try:
        rep = codes.classify_code(g, code)
    except (codes.CodeError, GraphError) as exc:
        raise UsageError(str(exc)) from None
    _emit(json.dumps(rep.to_dict(), indent=2), None)
    return EXIT_OK if rep.is_perfect_1 else EXIT_MISMATCH


def cmd_spectrum(args) -> int:
    try:
        a = IntersectionArray.parse(args.array)
        x = Fraction(args.at)
    except (MalformedArrayError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    value = charpoly_eval(a, x)
    out = {"array": str(a), "at": str(x), "value": str(value), "is_eigenvalue": value == 0}
    _emit(json.dumps(out), None)
    return EXIT_OK


def cmd_geometry(args) -> int:
    try:
        geom = geometry.GEOMETRY_TYPES[args.type](args.q)
    except geometry.GeometryError as exc:
        raise UsageError(str(exc)) from None
    if args.dual:
        geom = geometry.dual(geom)
    data = geom.to_json()
    if args.export:
        Path(args.export).write_text(json.dumps(data))
    ig = geometry.incidence_graph(geom)
    summary = {"name": geom.name, "points": len(geom.points), "lines": len(geom.lines),
               "order": list(geom.order), "incidence_graph_vertices": ig.n,
               "incidence_array": str(verify_intersection_array(ig))}
    _emit(json.dumps(summary), None)
    return EXIT_OK


def cmd_catalog(args) -> int:
    data = catalog.catalog_json()
    if args.export:
        Path(args.export).write_text(json.dumps(data, indent=2))
    else:
        for e in catalog.all_rows():
            print(f"{e.table}  {e.name:22s} {str(e.array):40s} n={e.n:<5d} {e.expected_verdict:3s} "
                  f"{'' if e.has_builder else '(array only)'}")
    return EXIT_OK


def cmd_export(args) -> int:
    g, _ = load_graph(args.graph)
    text = json.dumps(to_json(g)) if args.format == "json" else to_text(g)
    _emit(text, args.output)
    return EXIT_OK


# ------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="drgcodes", description="Perfect 1-codes in distance-regular graphs.")
    p.add_argument("-v", "--verbose", action="store_true", help="log search progress")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("report", help="compare computed verdicts with the tables")
    grp = r.add_mutually_exclusive_group()
    grp.add_argument("--valency", choices=["3", "4", "5", "6", "7", "67"])
    grp.add_argument("--table", type=int, choices=[1, 2, 3, 4])
    r.add_argument("--format", choices=sorted(report.FORMATS), default="md")
    r.add_argument("--budget", type=int, help="node budget per search (default: DRG_BUDGET or 2000000)")
    r.add_argument("--full", action="store_true",
                   help="run the extended search instead of reporting the published verdict")
    r.add_argument("--assume-published", dest="full", action="store_false",
                   help="report published verdicts for desk-infeasible rows (default)")
    r.add_argument("--output", "-o")
    r.set_defaults(func=cmd_report)

    s = sub.add_parser("search", help="search a graph for a perfect 1-code")
    s.add_argument("--graph", required=True, help="catalog name or graph file")
    s.add_argument("--method", choices=["auto", "exact-cover", "clique"], default="auto")
    s.add_argument("--budget", type=int)
    s.add_argument("--canonical", action="store_true", help="return the lexicographically least code")
    s.add_argument("--full", action="store_true", help="allow the extended search on large rows")
    s.add_argument("--checkpoint", help="checkpoint file for the extended search (resumed if present)")
    s.add_argument("--output", "-o", help="write the witness to this file")
    s.set_defaults(func=cmd_search)

    v = sub.add_parser("verify", help="classify a vertex set")
    v.add_argument("--graph", required=True)
    v.add_argument("--code", required=True, help="file or inline comma-separated vertices")
    v.set_defaults(func=cmd_verify)

    sp = sub.add_parser("spectrum", help="evaluate the characteristic polynomial exactly")
    sp.add_argument("--array", required=True, help='e.g. "4,3,3;1,1,2"')
    sp.add_argument("--at", required=True, help="rational point, e.g. -1 or 3/2")
    sp.set_defaults(func=cmd_spectrum)

    ge = sub.add_parser("geometry", help="build a finite geometry")
    ge.add_argument("--type", required=True, choices=sorted(geometry.GEOMETRY_TYPES))
    ge.add_argument("--q", type=int, required=True)
    ge.add_argument("--dual", action="store_true")
    ge.add_argument("--export")
    ge.set_defaults(func=cmd_geometry)

    c = sub.add_parser("catalog", help="list or export the registry")
    c.add_argument("--export")
    c.set_defaults(func=cmd_catalog)

    ex = sub.add_parser("export", help="write a graph as text or JSON")
    ex.add_argument("--graph", required=True)
    ex.add_argument("--format", choices=["text", "json"], default="text")
    ex.add_argument("--output", "-o")
    ex.set_defaults(func=cmd_export)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"drgcodes: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"drgcodes: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
