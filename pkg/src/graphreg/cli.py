"""Command-line interface.

Exit codes: 0 the property holds, 1 it fails or is only conjectural,
2 the input could not be used.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .centralizer import DegenerateExtensionError, find_nondegenerate_extension, m2m3_hom, root_only
from .classify import regularity_report
from .corpus import GUARD_LIMIT, CorpusSpec, closed_form_count, run_corpus
from .desing import TailExtendedGraph, desingularize, load_file, to_dot_extended
from .errors import (
    ConditionKError,
    CycleError,
    GraphFormatError,
    GraphRegError,
    NotRowFiniteError,
    PreconditionError,
    UnknownVertexError,
    VerificationError,
)
from .graph import Graph, to_dot
from .lattice import composition_series
from .lpa import lpa_equal, normal_form, parse_element

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

PROPERTIES = ("condition-k", "distinct-detours", "no-sources", "row-finite", "pure", "elementary", "z-stable")


class InputError(Exception):
    pass


def _emit(args, payload, text: str | None = None):
    if args.format == "json" or text is None:
        print(json.dumps(payload, indent=2, sort_keys=False))
    else:
        print(text)


def _load(path: str):
    try:
        return load_file(path)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None
    except GraphFormatError as exc:
        raise InputError(f"{path}: {exc}") from None


def _finite_graph(obj, what: str) -> Graph:
    if isinstance(obj, TailExtendedGraph) or obj.has_omega:
        raise InputError(f"{what} needs a finite row-finite graph")
    return obj.expand()


def _report_text(rep: dict) -> str:
    lines = []
    for key, value in rep.items():
        if isinstance(value, dict) and "holds" in value:
            w = value.get("witness")
            value = f"{value['holds']}" + (f" (witness: {json.dumps(w)})" if w is not None else "")
        elif key == "zStable":
            value = f"{value['verdict']} [{value['provenance']}]"
        elif key == "elementarySubquotient":
            value = str(value["present"])
        elif key == "compositionSeries" and value is not None:
            value = " < ".join("{" + ",".join(f["upper"]) + "}:" + f["class"] for f in value)
        elif key == "notes":
            value = "; ".join(value) if value else "-"
        lines.append(f"{key}: {value}")
    return "\n".join(lines)


# -- commands ---------------------------------------------------------------------


def cmd_analyze(args) -> int:
    rep = regularity_report(_load(args.path)).to_json()
    _emit(args, rep, _report_text(rep))
    return EXIT_OK


def cmd_check(args) -> int:
    rep = regularity_report(_load(args.path))
    prop = args.property
    witness = None
    if prop == "condition-k":
        holds, witness = rep.condition_k["holds"], rep.condition_k["witness"]
    elif prop == "distinct-detours":
        holds, witness = rep.distinct_detours["holds"], rep.distinct_detours["witness"]
    elif prop == "no-sources":
        holds = rep.no_sources
    elif prop == "row-finite":
        holds = rep.row_finite
    elif prop == "pure":
        holds = rep.pure
        witness = rep.elementary["witness"]
    elif prop == "elementary":
        holds = rep.elementary["present"]
    else:
        holds = rep.z_stable == "yes"
        if rep.z_stable.startswith("conjecturally"):
            print(
                f"z-stable is {rep.z_stable} [{rep.provenance}]: Condition (K) and distinct detours hold, "
                "but no proved theorem covers this presentation",
                file=sys.stderr,
            )
        witness = {"verdict": rep.z_stable, "provenance": rep.provenance}
    payload = {"property": prop, "holds": holds, "witness": witness}
    _emit(args, payload, f"{prop}: {holds}" + ("" if holds or witness is None else f" (witness: {json.dumps(witness)})"))
    return EXIT_OK if holds else EXIT_FAIL


def cmd_corpus(args) -> int:
    try:
        spec = CorpusSpec(args.max_vertices, args.max_edges, args.omega, args.canonicalize)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    estimate = closed_form_count(spec)
    print(f"corpus estimate: {estimate} graphs", file=sys.stderr)
    if estimate > GUARD_LIMIT and not args.force:
        raise InputError(f"corpus of {estimate} graphs exceeds the guard of {GUARD_LIMIT}; pass --force")
    summary = run_corpus(spec, seed=args.seed, jobs=args.jobs, lpa_samples=args.lpa_samples)
    _emit(args, summary.to_json(), summary.render())
    return EXIT_OK if summary.ok else EXIT_FAIL


def cmd_export_dot(args) -> int:
    g = _load(args.path)
    sys.stdout.write(to_dot_extended(g) if isinstance(g, TailExtendedGraph) else to_dot(g))
    return EXIT_OK


def cmd_lpa(args) -> int:
    g = _finite_graph(_load(args.path), "lpa")
    needed = 1 if args.op in ("star", "nf") else 2
    if len(args.exprs) != needed:
        raise InputError(f"lpa {args.op} takes {needed} expression(s)")
    try:
        xs = [parse_element(g, text) for text in args.exprs]
    except (GraphFormatError, UnknownVertexError, PreconditionError) as exc:
        raise InputError(str(exc)) from None
    if args.op == "eq":
        same = lpa_equal(xs[0], xs[1])
        _emit(args, {"equal": same}, str(same).lower())
        return EXIT_OK if same else EXIT_FAIL
    if args.op == "mul":
        value = xs[0] * xs[1]
    elif args.op == "star":
        value = xs[0].star()
    else:
        value = xs[0]
    text = str(normal_form(value))
    _emit(args, {"normalForm": text}, text)
    return EXIT_OK


def cmd_centralizer(args) -> int:
    g = _finite_graph(_load(args.path), "centralizer")
    try:
        F = root_only(g, args.vertex)
        Fp = find_nondegenerate_extension(g, F, args.max_steps)
    except UnknownVertexError as exc:
        raise InputError(str(exc)) from None
    except CycleError as exc:
        raise InputError(f"centralizer needs an acyclic graph: {exc}") from None
    except DegenerateExtensionError as exc:
        payload = {"nondegenerate": False, "reason": str(exc), "pair": list(exc.pair or ()),
                   "path": exc.path.to_json() if exc.path else None, "steps": exc.steps}
        _emit(args, payload, f"degenerate: {exc} (path {exc.path})")
        return EXIT_FAIL
    system = m2m3_hom(g, F, Fp)
    payload = {"nondegenerate": True, "extension": Fp.to_json(), "system": system.to_json()}
    text = [f"extension: vertices {sorted(Fp.vertices)} edges {sorted(Fp.edges)}"]
    for b in payload["system"]["blocks"]:
        text.append(f"block {b['u']} <- {b['w']}: N={b['N']} paths {b['paths']}")
    for name, ok in system.checks:
        text.append(f"  {'ok ' if ok else 'BAD'} {name}")
    _emit(args, payload, "\n".join(text))
    return EXIT_OK


def cmd_desingularize(args) -> int:
    g = _load(args.path)
    teg = g if isinstance(g, TailExtendedGraph) else desingularize(g)
    print(json.dumps(teg.to_json(), indent=2))
    return EXIT_OK


def cmd_series(args) -> int:
    g = _finite_graph(_load(args.path), "series")
    try:
        rep = regularity_report(g)
        composition_series(g)
    except ConditionKError as exc:
        print(str(exc), file=sys.stderr)
        _emit(args, {"compositionSeries": None, "witness": exc.witness}, f"no composition series: {exc}")
        return EXIT_FAIL
    series = rep.composition_series
    text = "\n".join(f"{{{','.join(f['lower'])}}} < {{{','.join(f['upper'])}}}: {f['class']}" for f in series)
    _emit(args, {"compositionSeries": series}, text)
    return EXIT_OK


# -- parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")

    parser = argparse.ArgumentParser(prog="graphreg", description="Regularity analysis of graph algebras.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="full regularity report")
    p.add_argument("path")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("check", parents=[common], help="decide one property")
    p.add_argument("path")
    p.add_argument("property", choices=PROPERTIES)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("corpus", parents=[common], help="exhaustive cross-checks on small graphs")
    p.add_argument("--max-vertices", type=int, required=True)
    p.add_argument("--max-edges", type=int, required=True)
    p.add_argument("--omega", action="store_true", help="enumerate multiplicity presentations instead")
    p.add_argument("--canonicalize", action="store_true", help="skip isomorphic duplicates")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--lpa-samples", type=int, default=4)
    p.add_argument("--force", action="store_true", help="ignore the size guard")
    p.set_defaults(func=cmd_corpus)

    p = sub.add_parser("export-dot", parents=[common], help="Graphviz rendering")
    p.add_argument("path")
    p.set_defaults(func=cmd_export_dot)

    p = sub.add_parser("lpa", parents=[common], help="Leavitt path algebra arithmetic")
    p.add_argument("op", choices=("mul", "star", "nf", "eq"))
    p.add_argument("path")
    p.add_argument("exprs", nargs="+")
    p.set_defaults(func=cmd_lpa)

    p = sub.add_parser("centralizer", parents=[common], help="matrix units over a nondegenerate extension")
    p.add_argument("path")
    p.add_argument("--vertex", required=True)
    p.add_argument("--max-steps", type=int, default=64)
    p.set_defaults(func=cmd_centralizer)

    p = sub.add_parser("desingularize", parents=[common], help="replace infinite receivers by tails")
    p.add_argument("path")
    p.set_defaults(func=cmd_desingularize)

    p = sub.add_parser("series", parents=[common], help="composition series with factor classes")
    p.add_argument("path")
    p.set_defaults(func=cmd_series)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NotRowFiniteError, VerificationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except GraphRegError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
