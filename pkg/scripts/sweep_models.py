"""Run the full check suite on every model and print one summary row per check.

    python3 scripts/sweep_models.py --cases 200 --seed 0 [--json sweep.json]
"""

import argparse
import json
import time
from fractions import Fraction

from guarded.axioms import Budget
from guarded.suite import ModelConfig, build_model, run_suite

CONFIGS = (
    ModelConfig("trivial"),
    ModelConfig("presheaf", n=3),
    ModelConfig("poset", site="vee"),
    ModelConfig("poset", site="diamond"),
    ModelConfig("cpo"),
    ModelConfig("cpo", mode="identity"),
    ModelConfig("cms", r=Fraction(1, 2)),
    ModelConfig("cms", r=Fraction(9, 10)),
    ModelConfig("ctree"),
)


def leaves(report, path=()):
    path = path + (report.axiom,)
    if not report.children:
        yield "/".join(path[1:]), report
    for child in report.children:
        yield from leaves(child, path)


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--cases", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", help="write every report here")
    args = p.parse_args()

    budget = Budget(cases=args.cases, seed=args.seed)
    dumped = []
    for cfg in CONFIGS:
        model = build_model(cfg)
        start = time.perf_counter()
        report = run_suite(model, budget)
        elapsed = time.perf_counter() - start
        failing = [name for name, r in leaves(report) if not r.passed]
        verdict = "PASS" if report.passed else "FAIL"
        print(f"{model.name:<30} {verdict}  cases={report.total_cases:<7} {elapsed:6.1f}s"
              + (f"  failing: {', '.join(failing)}" if failing else ""))
        dumped.append(report.to_dict())
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(dumped, fh, indent=2, default=str)


if __name__ == "__main__":
    main()
