"""Command-line front end.

Every subcommand prints one JSON document to stdout; diagnostics go to
stderr. Exit codes: 0 success, 1 invalid input or unsupported instance,
2 a verification check failed, 64 bad usage.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import verify as V
from .errors import PreconditionError, TreePartError
from .generate import KINDS, generate_instance, parse_cost_range
from .instance import Instance, format_fraction, load_instance, save_instance, star_to_quadratic
from .oracle import solve_bruteforce
from .pathdp import solve_path
from .solver import BncConfig, lower_bound, solution_dict, solve_exact

EXIT_OK, EXIT_INPUT, EXIT_VERIFY, EXIT_USAGE = 0, 1, 2, 64

RELAXATION_NAMES = {
    "theta0": "theta0",
    "theta1": "theta1",
    "squares": "theta1+squares",
    "path": "path-exact",
}
CROSS_CHECK_EDGES = 18


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return format_fraction(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _emit(doc) -> None:
    print(json.dumps(_jsonable(doc)))


def _read(path: str) -> Instance:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise TreePartError(f"cannot read {path}: {exc.strerror}") from exc
    return load_instance(data)


def _labeling_from_partition(inst, part):
    owner = part.component_of
    return tuple(int(owner[u] == owner[v]) for u, v in inst.tree.edges)


# -- solve / bound / gen / convert ----------------------------------------------


def cmd_solve(args) -> int:
    inst = _read(args.file)
    tree = inst.tree
    method = args.method
    if method == "auto":
        method = "dp" if tree.is_path() else "bnc"
    if method == "bruteforce":
        y, value = solve_bruteforce(inst)
        doc = solution_dict(inst, y, value)
    elif method == "dp":
        if not tree.is_path():
            raise PreconditionError("--method dp needs a path; this tree is not one (use bnc or bruteforce)")
        part, value = solve_path(inst)
        doc = solution_dict(inst, _labeling_from_partition(inst, part), value)
    else:
        cfg = BncConfig(relaxation=RELAXATION_NAMES[args.relaxation], node_limit=args.node_limit)
        y, value, cert = solve_exact(inst, cfg)
        doc = solution_dict(inst, y, value, cert)
    doc["method"] = method
    status = EXIT_OK
    if args.cross_check:
        if tree.n > CROSS_CHECK_EDGES:
            print(f"cross-check skipped: more than {CROSS_CHECK_EDGES} edges", file=sys.stderr)
        else:
            _, ref = solve_bruteforce(inst)
            doc["cross_check"] = {"bruteforce": format_fraction(ref), "agree": ref == value}
            if ref != value:
                status = EXIT_VERIFY
    _emit(doc)
    return status


def cmd_bound(args) -> int:
    inst = _read(args.file)
    rel = RELAXATION_NAMES[args.relaxation]
    _emit({"relaxation": rel, "bound": lower_bound(inst, rel)})
    return EXIT_OK


def cmd_gen(args) -> int:
    inst = generate_instance(args.type, args.nodes, args.seed, parse_cost_range(args.cost_range))
    data = save_instance(inst)
    if args.output:
        Path(args.output).write_bytes(data)
        print(f"wrote {args.output}", file=sys.stderr)
    else:
        sys.stdout.write(data.decode())
    return EXIT_OK


def cmd_convert(args) -> int:
    inst = _read(args.file)
    quad = star_to_quadratic(inst)
    tree = inst.tree
    center = tree.star_center()
    _emit({
        "format": "qubo",
        "variables": [{"index": i, "edge": list(e)} for i, e in enumerate(tree.edges)],
        "center": center,
        "terms": [{"vars": list(k), "coef": c} for k, c in quad.terms.items()],
        "note": "minimize the sum of coef * prod(y[v] for v in vars); y[i] = 1 keeps edge i",
    })
    return EXIT_OK


# -- verify ------------------------------------------------------------------------


def _verify_facets(args):
    sweep = V.facet_sweep(args.max_nodes)
    tri = V.verify_triangle_examples()
    report = {"check": "facets", "max_nodes": args.max_nodes, "sweep": sweep.as_dict(), "triangle_examples": tri}
    summary = [
        (fam, s["predicted"], s["observed"], s["agree"] == s["rows"]) for fam, s in sweep.by_family.items()
    ]
    summary.append(("star triangle facet", True, tri["star_triangle"]["facet"], tri["star_triangle"]["facet"]))
    summary.append(("tree example valid", True, tri["tree_example"]["valid"], tri["tree_example"]["valid"]))

    def figures(d: Path):
        return [_plotting().facet_counts(sweep.by_family, d / "facets.png")]

    return report, summary, sweep.ok and tri["ok"], figures


def _verify_path_polytope(args):
    rep = V.verify_path_integrality(args.n, args.trials, args.seed)
    report = {"check": "path-polytope", "integrality": rep.as_dict()}
    summary = [("integral optima", args.trials, rep.passed, rep.ok)]
    ok = rep.ok
    if args.n <= 4:
        vr = V.verify_path_vertices(args.n)
        report["vertices"] = {"count": len(vr.vertices), "lifted": vr.lifted_count,
                              "all_integral": vr.all_integral, "match": vr.matches_lifted}
        summary.append(("vertices = lifted multicuts", vr.lifted_count, len(vr.vertices), vr.matches_lifted))
        ok = ok and vr.matches_lifted
    neg = V.find_fractional_optimum("theta0", [args.n] if args.n >= 3 else [3], args.trials, args.seed)
    report["negative_control"] = None if neg is None else {"n": neg[0], "c": neg[1], "x": neg[2]}

    def figures(d: Path):
        pairs = list(zip(rep.lp_values, rep.best_values))
        return [_plotting().value_agreement(pairs, "LP optimum", "best lifted multicut",
                                         f"path n={args.n}", d / "path_polytope.png")]

    return report, summary, ok, figures


def _verify_tdi(args):
    res = V.verify_tdi(args.n, args.trials, args.seed)
    values = res.pop("values")
    report = {"check": "tdi", **res}
    summary = [("integral dual witnesses", args.trials, res["passed"], res["ok"])]

    def figures(d: Path):
        return [_plotting().value_agreement(values, "primal optimum", "integral dual value",
                                         f"extended path n={args.n}", d / "tdi.png")]

    return report, summary, res["ok"], figures


def _verify_non_tu(args):
    hit = V.verify_non_tu(args.n)
    expected = args.n >= 4 if args.n <= 4 else None
    found = hit is not None
    ok = expected is None or expected == found
    report = {"check": "non-tu", "n": args.n, "found": found, "expected": expected, "ok": ok}
    if hit:
        rows, cols, det = hit
        report.update(rows=list(rows), cols=list(cols), determinant=det)
    summary = [("subdeterminant outside {-1,0,1}", expected, found, ok)]

    def figures(d: Path):
        if not hit:
            return []
        M = V.theta_path_system(args.n).matrix()
        return [_plotting().submatrix(M, hit[0], hit[1], hit[2], d / "non_tu.png")]

    return report, summary, ok, figures


def _verify_inclusions(args):
    results = []
    if args.max_nodes is not None:
        for tree in V.trees_up_to(args.max_nodes):
            results.append(V.verify_inclusions(tree))
    else:
        results.append(V.verify_inclusions(args.n))
    ok = all(r["ok"] for r in results)
    report = {"check": "inclusions", "results": results}
    bars = []
    for r in results:
        for c in r["chains"]:
            if c["max_violation"] is not None:
                bars.append((f"{c['weaker']}<-{c['stronger']} N={len(r['edges']) + 1}", Fraction(c["max_violation"])))
    summary = [(f"{c['weaker']} implied by {c['stronger']}", True, c["ok"], c["ok"])
               for r in results for c in r["chains"]]
    n_strict = args.n if args.max_nodes is None and args.n >= 3 else 3
    wit = V.strictness_witness(n_strict)
    report["strictness"] = None if wit is None else {
        "n": n_strict, "row": wit[0].describe(V.pair_labels(V.Tree.path(n_strict))), "point": wit[1], "violation": wit[2]
    }
    summary.append(("strictness witness found", True, wit is not None, wit is not None))
    ok = ok and wit is not None

    def figures(d: Path):
        return [_plotting().chain_violations(bars, d / "inclusions.png")] if bars else []

    return report, summary, ok, figures


def _plotting():
    # matplotlib is only imported when figures are requested
    from . import plotting

    return plotting


VERIFY_CHECKS = {
    "facets": _verify_facets,
    "path-polytope": _verify_path_polytope,
    "tdi": _verify_tdi,
    "non-tu": _verify_non_tu,
    "inclusions": _verify_inclusions,
}


def cmd_verify(args) -> int:
    report, summary, ok, figures = VERIFY_CHECKS[args.check](args)
    report["ok"] = ok
    if args.report_dir:
        d = Path(args.report_dir)
        d.mkdir(parents=True, exist_ok=True)
        (d / "report.json").write_text(json.dumps(_jsonable(report), indent=2) + "\n")
        with open(d / "summary.tsv", "w", newline="") as fh:
            w = csv.writer(fh, delimiter="\t")
            w.writerow(["check", "predicted", "observed", "agree"])
            w.writerows(summary)
        written = [str(p) for p in figures(d)]
        report["files"] = ["report.json", "summary.tsv"] + [Path(p).name for p in written]
    for row in summary:
        print("\t".join(str(v) for v in row), file=sys.stderr)
    _emit(report)
    return EXIT_OK if ok else EXIT_VERIFY


# -- entry point ---------------------------------------------------------------


def _positive(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="treepart", description="Exact tree partitioning and polyhedral checks.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="solve an instance file exactly")
    s.add_argument("file")
    s.add_argument("--method", choices=["auto", "bruteforce", "dp", "bnc"], default="auto")
    s.add_argument("--relaxation", choices=list(RELAXATION_NAMES), default="squares")
    s.add_argument("--node-limit", type=_positive, default=100_000)
    s.add_argument("--cross-check", action="store_true",
                   help=f"also run brute force (up to {CROSS_CHECK_EDGES} edges) and compare")
    s.set_defaults(func=cmd_solve)

    b = sub.add_parser("bound", help="LP bound of a relaxation")
    b.add_argument("file")
    b.add_argument("--relaxation", choices=list(RELAXATION_NAMES), required=True)
    b.set_defaults(func=cmd_bound)

    g = sub.add_parser("gen", help="generate a random instance (numpy PCG64)")
    g.add_argument("--type", choices=list(KINDS), required=True)
    g.add_argument("--nodes", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--cost-range", default="-10,10")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("convert", help="rewrite a star instance as a quadratic binary program")
    c.add_argument("--to", choices=["qubo"], required=True)
    c.add_argument("file")
    c.set_defaults(func=cmd_convert)

    v = sub.add_parser("verify", help="run a polyhedral verification sweep")
    v.add_argument("check", choices=list(VERIFY_CHECKS))
    v.add_argument("--n", type=int, default=4)
    v.add_argument("--max-nodes", type=_positive, default=None)
    v.add_argument("--trials", type=_positive, default=100)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--report-dir", help="also write report.json, summary.tsv and PNG figures here")
    v.set_defaults(func=cmd_verify)
    return p


def _glue_negative_values(argv):
    """Let ``--cost-range -10,10`` through; argparse would read -10,10 as an option."""
    out = []
    it = iter(argv)
    for a in it:
        if a == "--cost-range":
            nxt = next(it, None)
            out.append(a if nxt is None else f"{a}={nxt}")
        else:
            out.append(a)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_glue_negative_values(argv))
    if args.command == "verify" and args.check == "facets" and args.max_nodes is None:
        args.max_nodes = 6
    try:
        return args.func(args)
    except TreePartError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def run(argv=None) -> int:
    """``main`` that also converts usage errors into the exit code instead of raising."""
    try:
        return main(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
