"""Command-line interface: ``graphmfd <command> [input] [flags]``.

Every command reads a labeled-graph JSON document from a path or from stdin
("-") and writes canonical JSON (sorted keys, exact "p/q" rationals).
Exit codes: 0 success, 1 selftest failure, 2 input error, 3 internal
consistency failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from .core import (
    DisconnectedGraphError,
    GraphInputError,
    LabeledGraph,
    cohomology_classes,
    format_rational,
    graph_to_dict,
    normalize_orientation,
    parse_labeled_graph,
    validate,
)
from .decide import DEFAULT_TOL, PROPERTIES, decide_all
from .exactla import SubsetCapExceeded, SymRatMatrix, inertia
from .malpha import GluingMatrix, build_malpha
from .operators import admissible_s_functions, build_A_lambda, build_A_plus, build_H, sign_components

EXIT_OK, EXIT_SELFTEST, EXIT_INPUT, EXIT_CONSISTENCY = 0, 1, 2, 3


class UsageError(ValueError):
    """Bad flag value detected after argument parsing."""


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _read_graph(path: str) -> LabeledGraph:
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise GraphInputError(f"cannot read {path}: {exc.strerror}") from None
    return parse_labeled_graph(text)


def matrix_json(m: SymRatMatrix, floats: bool = False) -> dict:
    inn = inertia(m)
    out = {
        "matrix": [[format_rational(x) for x in row] for row in m.to_lists()],
        "inertia": {"n_pos": inn.n_pos, "n_zero": inn.n_zero, "n_neg": inn.n_neg},
    }
    if floats:
        out["matrix_float"] = m.to_floats()
    return out


def select_operator(g: LabeledGraph, which: str) -> tuple[SymRatMatrix, dict]:
    """Operator named by ``aplus``, ``alambda:CLASS`` or ``h:S`` on the normalized graph."""
    g.require_connected()
    g, _ = normalize_orientation(g)
    name, _, arg = which.partition(":")
    if name == "aplus" and not arg:
        return build_A_plus(g), {"operator": "aplus"}
    if name in ("alambda", "h"):
        try:
            idx = int(arg) if arg else 0
        except ValueError:
            raise UsageError(f"index in {which!r} must be an integer") from None
        if name == "alambda":
            basis, _ = cohomology_classes(g)
            if not 0 <= idx < basis.count:
                raise UsageError(f"class index {idx} out of range 0..{basis.count - 1}")
            lam = basis.representative(idx)
            return build_A_lambda(g, lam), {
                "operator": "alambda", "class_index": idx,
                "cocycle_negative_edges": [g.edges[e].id for e in lam.negative_edges()]}
        d = sign_components(g)
        s_list = admissible_s_functions(d)
        if not 0 <= idx < len(s_list):
            raise UsageError(f"s index {idx} out of range 0..{len(s_list) - 1}")
        return build_H(g, s_list[idx], d), {"operator": "h", "s_index": idx,
                                            "s": list(s_list[idx])}
    raise UsageError(f"unknown operator {which!r}; use aplus, alambda:CLASS or h:S")


# ---------------------------------------------------------------------------
# embedded acceptance corpus


def _rows(*rows) -> list[list[str]]:
    return [[str(Fraction(x)) for x in r] for r in rows]


NO_ALL = {p: "no" for p in PROPERTIES}

CORPUS: list[dict] = [
    {
        "name": "M(alpha) [[1,1],[4,3]]: no property",
        "malpha": [1, 1, 4, 3],
        "operators": {"aplus": {"matrix": _rows((1, -1, 0), (-1, 3, -1), (0, -1, 1)),
                                "inertia": [3, 0, 0]}},
        "verdicts": NO_ALL,
    },
    {
        "name": "M(alpha) [[-1,1],[2,-1]]: I and HI only",
        "malpha": [-1, 1, 2, -1],
        "operators": {"aplus": {"matrix": _rows((1, -1, 0), (-1, 1, -1), (0, -1, 1)),
                                "inertia": [2, 0, 1]},
                      "h:0": {"matrix": _rows((1, 0, 0), (0, 1, 0), (0, 0, 1)),
                              "inertia": [3, 0, 0]}},
        "verdicts": dict(NO_ALL, I="yes", HI="yes"),
    },
    {
        "name": "M(alpha) [[-3,2],[-1,1]]: VE without E (H has a negative eigenvalue)",
        "malpha": [-3, 2, -1, 1],
        "operators": {"h:0": {"matrix": _rows((1, -1, 0), (-1, "1/2", "-1/2"), (0, "-1/2", "3/2")),
                              "inertia": [2, 0, 1]}},
        "verdicts": dict(NO_ALL, I="yes", HI="yes", VE="yes", VF="yes", NPC="yes"),
    },
    {
        "name": "M(alpha) [[0,1],[1,2]]: VE without VF",
        "malpha": [0, 1, 1, 2],
        "operators": {"h:0": {"matrix": _rows((1, -1, 0), (-1, 2, 0), (0, 0, 0)),
                              "inertia": [2, 1, 0]}},
        "verdicts": dict(NO_ALL, I="yes", HI="yes", E="yes", VE="yes"),
    },
    {
        "name": "M(alpha) [[0,1],[1,1]]: E and VF, neither F nor NPC",
        "malpha": [0, 1, 1, 1],
        "operators": {"alambda:0": {"matrix": _rows((1, -1, 0), (-1, 1, -1), (0, -1, 0)),
                                    "inertia": [2, 0, 1]},
                      "h:0": {"matrix": _rows((1, -1, 0), (-1, 1, 0), (0, 0, 0)),
                              "inertia": [1, 2, 0]}},
        "verdicts": dict(NO_ALL, I="yes", HI="yes", E="yes", VE="yes", VF="yes"),
    },
    {
        "name": "Dehn twist: one loop with k = 2/|b|, no NPC metric",
        "graph": {"vertices": [{"id": 0, "charge": "1"}],
                  "edges": [{"id": 0, "tail": 0, "head": 0, "b": 2, "rho": 1}]},
        "operators": {"h:0": {"matrix": [["0"]], "inertia": [0, 1, 0]}},
        "verdicts": {"NPC": "no"},
    },
]


def _case_graph(case: dict) -> LabeledGraph:
    if "malpha" in case:
        return build_malpha(GluingMatrix(*case["malpha"]))
    return parse_labeled_graph(case["graph"])


def run_case(case: dict) -> list[str]:
    """Mismatches between a corpus case and the library; empty means pass."""
    problems = []
    try:
        g = _case_graph(case)
        for which, exp in case.get("operators", {}).items():
            m, _ = select_operator(g, which)
            got = matrix_json(m)
            want = [[str(Fraction(x)) for x in row] for row in exp["matrix"]]
            if got["matrix"] != want:
                problems.append(f"{which}: matrix {got['matrix']} != expected {want}")
            if "inertia" in exp:
                gi = got["inertia"]
                inn = [gi["n_pos"], gi["n_zero"], gi["n_neg"]]
                if inn != list(exp["inertia"]):
                    problems.append(f"{which}: inertia {inn} != expected {exp['inertia']}")
        if "verdicts" in case:
            report = decide_all(g)
            if not report.consistent:
                problems.append(f"diagram violations: {report.violations}")
            for prop, want in case["verdicts"].items():
                if report.verdicts[prop] != want:
                    problems.append(f"{prop}: {report.verdicts[prop]} != expected {want}")
    except (ValueError, KeyError, TypeError) as exc:
        problems.append(f"error: {exc}")
    return problems


def run_selftest(corpus: Sequence[dict], out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    if not corpus:
        print("warning: empty corpus, nothing to check", file=err)
        print("0/0 cases passed", file=out)
        return EXIT_OK
    failed = 0
    for case in corpus:
        problems = run_case(case)
        name = case.get("name", "<unnamed>")
        if problems:
            failed += 1
            print(f"FAIL {name}", file=out)
            for p in problems:
                print(f"  {p}", file=out)
        else:
            print(f"PASS {name}", file=out)
    print(f"{len(corpus) - failed}/{len(corpus)} cases passed", file=out)
    return EXIT_SELFTEST if failed else EXIT_OK


# ---------------------------------------------------------------------------
# commands


def cmd_validate(args) -> int:
    g = _read_graph(args.input)
    diags = validate(g)
    print(_dump({"valid": not diags, "diagnostics": diags, "n_vertices": g.n,
                 "n_edges": g.n_edges, "rho_given": g.rho is not None}))
    return EXIT_OK if not diags else EXIT_INPUT


def cmd_operators(args) -> int:
    g = _read_graph(args.input)
    m, meta = select_operator(g, args.which)
    meta.update(matrix_json(m, args.float))
    print(_dump(meta))
    return EXIT_OK


def _report(args, all_s: bool) -> int:
    g = _read_graph(args.input)
    tol = Fraction(args.tol) if args.tol else DEFAULT_TOL
    report = decide_all(g, tol)
    doc = report.to_dict(witnesses=args.witness, all_s=all_s, floats=args.float)
    if getattr(args, "property", None):
        keep = set(args.property)
        for p in PROPERTIES:
            if p not in keep:
                doc.pop(p)
        if "witnesses" in doc:
            doc["witnesses"] = {p: w for p, w in doc["witnesses"].items() if p in keep}
    print(_dump(doc))
    return EXIT_OK if report.consistent else EXIT_CONSISTENCY


def cmd_decide(args) -> int:
    return _report(args, all_s=False)


def cmd_report(args) -> int:
    return _report(args, all_s=args.all_s)


def cmd_malpha(args) -> int:
    g = build_malpha(GluingMatrix.parse(args.matrix))
    print(_dump(graph_to_dict(g)))
    return EXIT_OK


def cmd_selftest(args) -> int:
    corpus = CORPUS
    if args.corpus:
        with open(args.corpus, encoding="utf-8") as fh:
            corpus = json.load(fh)
        if not isinstance(corpus, list):
            raise GraphInputError("corpus must be a JSON list of cases")
    return run_selftest(corpus)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphmfd",
        description="Spectral decisions for labeled graphs of graph-manifolds.")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_input(p):
        p.add_argument("input", help="labeled-graph JSON file, or - for stdin")
        p.add_argument("--float", action="store_true",
                       help="add decimal approximations (non-authoritative)")
        return p

    p = with_input(sub.add_parser("validate", help="check a labeled graph"))
    p.set_defaults(func=cmd_validate)

    p = with_input(sub.add_parser("operators", help="print an operator and its inertia"))
    p.add_argument("--which", default="aplus", help="aplus, alambda:CLASS or h:S (default aplus)")
    p.set_defaults(func=cmd_operators)

    for name, func, text in (("decide", cmd_decide, "decide the seven properties"),
                             ("report", cmd_report, "full report with notes")):
        p = with_input(sub.add_parser(name, help=text))
        p.add_argument("--witness", action="store_true", help="include witnesses")
        p.add_argument("--tol", help="bracket width for deformation witnesses, e.g. 1/1000000")
        if name == "decide":
            p.add_argument("--property", action="append", choices=PROPERTIES,
                           help="restrict output to this property (repeatable)")
        else:
            p.add_argument("--all-s", action="store_true",
                           help="list spectral data for every admissible s-function")
        p.set_defaults(func=func)

    p = sub.add_parser("malpha", help="emit the labeled graph of M(alpha)")
    p.add_argument("--matrix", required=True, help="gluing matrix entries a,b,c,d (det -1)")
    p.add_argument("--float", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_malpha)

    p = sub.add_parser("selftest", help="run the embedded acceptance corpus")
    p.add_argument("--corpus", help="JSON list of cases replacing the embedded corpus")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (GraphInputError, DisconnectedGraphError, SubsetCapExceeded, UsageError,
            ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except json.JSONDecodeError as exc:  # pragma: no cover - subclass of ValueError
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
