"""Command line: ``solve`` equation files, ``check`` a model, replay the ``demo`` fixtures.

Exit status is 0 when everything passes, 1 on an axiom failure or a demo
mismatch, 2 on bad input.  Results go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .axioms import Budget
from .core import brute_force_solutions
from .cpo import CpoModel
from .fixtures import STAR_EXAMPLE, read_fixture, two_chain_fixture
from .parser import ParseError, parse_equation_file
from .suite import MODELS, ModelConfig, build_model, run_suite
from .trees import prefix, render, solve_system, spine_leaves

SEED_ENV = "GUARDED_SEED"

WORKED_PREFIX = "((? * y2) * c) * y1"
WORKED_LEAVES = {
    "x1": ("y1", "c", "y2", "y1", "c", "y2", "y1"),
    "x2": ("c", "y2", "y1", "c", "y2", "y1", "c"),
}


def _fraction(text: str) -> Fraction:
    try:
        r = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}")
    if not 0 < r < 1:
        raise argparse.ArgumentTypeError("r must lie strictly between 0 and 1")
    return r


def _natural(low: int):
    def parse(text: str) -> int:
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
        if v < low:
            raise argparse.ArgumentTypeError(f"must be at least {low}")
        return v

    return parse


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"{SEED_ENV} must be an integer, got {raw!r}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="guarded", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve a guarded equation file and print prefixes")
    s.add_argument("file", help="equation file, or - for stdin")
    s.add_argument("--depth", "-k", type=_natural(0), default=5)
    s.add_argument("--format", choices=("text", "json"), default="text")
    s.add_argument("--graph", action="store_true", help="include the JSON node/edge graph")

    c = sub.add_parser("check", help="run a model's axiom suite")
    c.add_argument("--model", choices=MODELS, required=True)
    c.add_argument("--n", type=_natural(0), default=3, help="chain truncation level")
    c.add_argument("--r", type=_fraction, default=Fraction(1, 2), help="metric scale factor")
    c.add_argument("--site", choices=("vee", "diamond", "chain"), default="vee")
    c.add_argument("--mode", choices=("lifting", "identity"), default="lifting")
    c.add_argument("--max-size", type=_natural(1), default=None)
    c.add_argument("--seed", type=int, default=None)
    c.add_argument("--cases", type=_natural(1), default=200)
    c.add_argument("--exhaustive", action="store_true")
    c.add_argument("--format", choices=("text", "json"), default="text")

    d = sub.add_parser("demo", help="replay the worked example and the cpo counterexample")
    d.add_argument("--format", choices=("text", "json"), default="text")
    return p


def cmd_solve(args, out) -> int:
    try:
        text = sys.stdin.read() if args.file == "-" else open(args.file).read()
    except OSError as e:
        print(f"{args.file}: {e.strerror}", file=sys.stderr)
        return 2
    try:
        _, system = parse_equation_file(text)
    except ParseError as e:
        print(f"{args.file}:{e}", file=sys.stderr)
        return 2
    sol = solve_system(system)
    if args.format == "json":
        data = {}
        for x in system.variables:
            entry = {"prefix": render(prefix(sol[x], args.depth))}
            if args.graph:
                entry["tree"] = sol[x].to_json()
            data[x] = entry
        print(json.dumps({"depth": args.depth, "solutions": data}, indent=2), file=out)
    else:
        for x in system.variables:
            print(f"{x} = {render(prefix(sol[x], args.depth))}", file=out)
            if args.graph:
                print(json.dumps(sol[x].to_json()), file=out)
    return 0


def cmd_check(args, out) -> int:
    seed = default_seed() if args.seed is None else args.seed
    cfg = ModelConfig(args.model, args.n, args.r, args.site, args.mode, args.max_size)
    try:
        model = build_model(cfg)
    except ValueError as e:
        print(str(e), file=sys.stderr)
        return 2
    if args.exhaustive and not model.enumerable:
        print(f"{model.name}: hom-sets are infinite; exhaustive mode is unavailable", file=sys.stderr)
        return 2
    report = run_suite(model, Budget(cases=args.cases, seed=seed, exhaustive=args.exhaustive))
    if args.format == "json":
        print(json.dumps(report.to_dict(), indent=2, default=str), file=out)
    else:
        print(f"model {model.name}  seed {seed}  cases {args.cases}", file=out)
        print(report.render(), file=out)
    return 0 if report.passed else 1


def demo_results() -> list[dict]:
    """Expected versus actual for every shipped fixture."""
    rows = []
    _, system = parse_equation_file(read_fixture(STAR_EXAMPLE))
    sol = solve_system(system)
    rows.append({"check": "x1 prefix at depth 3", "expected": WORKED_PREFIX,
                 "actual": render(prefix(sol["x1"], 3))})
    for x, want in WORKED_LEAVES.items():
        rows.append({"check": f"{x} right leaves along the spine, depth 7", "expected": " ".join(want),
                     "actual": " ".join(spine_leaves(sol[x], 7))})
    model = CpoModel()
    f = two_chain_fixture()
    sols = [list(s.table) for s in brute_force_solutions(model, f)]
    rows.append({"check": "two-chain: all solutions", "expected": "[[0], [1]]", "actual": str(sols)})
    rows.append({"check": "two-chain: least fixpoint", "expected": "[0]",
                 "actual": str(list(model.dagger(f).table))})
    for r in rows:
        r["match"] = r["expected"] == r["actual"]
    return rows


def cmd_demo(args, out) -> int:
    rows = demo_results()
    if args.format == "json":
        print(json.dumps(rows, indent=2), file=out)
    else:
        for r in rows:
            print(f"{r['check']}", file=out)
            print(f"  expected: {r['expected']}", file=out)
            print(f"  actual:   {r['actual']}", file=out)
            print(f"  {'match' if r['match'] else 'MISMATCH'}", file=out)
    return 0 if all(r["match"] for r in rows) else 1


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    return {"solve": cmd_solve, "check": cmd_check, "demo": cmd_demo}[args.command](args, out)


if __name__ == "__main__":
    sys.exit(main())
